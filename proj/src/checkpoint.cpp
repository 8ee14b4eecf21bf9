#include "moodkit/checkpoint.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>

namespace moodkit {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'M', 'K', 'C', 'H', 'K', 'P', 'T', '\0'};

void put_u16(std::string& buf, std::uint16_t v) {
  for (int i = 0; i < 2; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& buf, double v) {
  put_u64(buf, std::bit_cast<std::uint64_t>(v));
}

class Reader {
 public:
  Reader(std::string bytes, std::string path)
      : bytes_(std::move(bytes)), path_(std::move(path)) {}

  void raw(void* out, std::size_t n) {
    if (pos_ + n > bytes_.size()) {
      throw IoError("truncated checkpoint file: " + path_);
    }
    std::memcpy(out, bytes_.data() + pos_, n);
    pos_ += n;
  }

  std::uint16_t u16() { return static_cast<std::uint16_t>(uint_le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint_le(4)); }
  std::uint64_t u64() { return uint_le(8); }
  double f64() { return std::bit_cast<double>(u64()); }

  std::string str(std::size_t n) {
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }

  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  std::uint64_t uint_le(int width) {
    unsigned char b[8] = {};
    raw(b, static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = width - 1; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  std::string bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

json encoder_to_json(const EncoderConfig& e) {
  return {{"hash_dim", e.hash_dim},
          {"max_context_tokens", e.max_context_tokens},
          {"w_e", e.w_e},
          {"w_a", e.w_a},
          {"affect_concat", std::string(to_string(e.affect_concat))}};
}

json train_to_json(const TrainConfig& t) {
  return {{"learning_rate", t.learning_rate},
          {"batch_size", t.batch_size},
          {"epochs", t.epochs},
          {"warmup_fraction", t.warmup_fraction},
          {"seed", t.seed},
          {"focal_alpha", t.focal_alpha},
          {"focal_gamma", t.focal_gamma},
          {"mood_loss_form", std::string(to_string(t.mood_loss_form))},
          {"delta_norm", std::string(to_string(t.delta_norm))},
          {"d_h", t.d_h}};
}

EncoderConfig encoder_from_json(const json& j) {
  EncoderConfig e;
  e.hash_dim = j.at("hash_dim").get<int>();
  e.max_context_tokens = j.at("max_context_tokens").get<int>();
  e.w_e = j.at("w_e").get<double>();
  e.w_a = j.at("w_a").get<double>();
  e.affect_concat = j.at("affect_concat").get<std::string>() == "split"
                        ? AffectConcat::Split
                        : AffectConcat::Sum;
  return e;
}

TrainConfig train_from_json(const json& j) {
  TrainConfig t;
  t.learning_rate = j.at("learning_rate").get<double>();
  t.batch_size = j.at("batch_size").get<int>();
  t.epochs = j.at("epochs").get<int>();
  t.warmup_fraction = j.at("warmup_fraction").get<double>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.focal_alpha = j.at("focal_alpha").get<double>();
  t.focal_gamma = j.at("focal_gamma").get<double>();
  t.mood_loss_form = j.at("mood_loss_form").get<std::string>() == "mse"
                         ? MoodLossForm::Mse
                         : MoodLossForm::AsWritten;
  t.delta_norm = j.at("delta_norm").get<std::string>() == "sigmoid"
                     ? DeltaNorm::Sigmoid
                     : DeltaNorm::Softmax;
  t.d_h = j.at("d_h").get<int>();
  return t;
}

}  // namespace

void save_checkpoint(const std::string& path, const CheckpointData& data) {
  std::string buf;
  buf.append(kMagic, sizeof(kMagic));
  put_u32(buf, kCheckpointVersion);
  put_u32(buf, static_cast<std::uint32_t>(data.params.d_ctx));
  put_u32(buf, static_cast<std::uint32_t>(data.params.d_h));
  put_u32(buf, static_cast<std::uint32_t>(data.params.affect_dim));

  const json cfg = {{"encoder", encoder_to_json(data.encoder)},
                    {"train", train_to_json(data.train)},
                    {"variant", data.variant}};
  const std::string cfg_str = cfg.dump();
  put_u64(buf, cfg_str.size());
  buf += cfg_str;

  const Vec flat = data.params.flatten();
  const auto groups = param_groups(data.params);
  put_u32(buf, static_cast<std::uint32_t>(groups.size()));
  for (const auto& g : groups) {
    put_u16(buf, static_cast<std::uint16_t>(g.name.size()));
    buf += g.name;
    put_u64(buf, static_cast<std::uint64_t>(g.size));
    for (Eigen::Index i = g.offset; i < g.offset + g.size; ++i) {
      put_f64(buf, flat[i]);
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(buf.data(), static_cast<std::streamsize>(buf.size()))) {
    throw IoError("cannot write checkpoint: " + path);
  }
}

CheckpointData load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open checkpoint: " + path);
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  Reader r(std::move(bytes), path);

  char magic[8];
  r.raw(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ConfigError("not a checkpoint file: " + path);
  }
  const std::uint32_t version = r.u32();
  if (version > kCheckpointVersion) {
    throw ConfigError("checkpoint format version " + std::to_string(version) +
                      " is newer than supported version " +
                      std::to_string(kCheckpointVersion));
  }

  const int d_ctx = static_cast<int>(r.u32());
  const int d_h = static_cast<int>(r.u32());
  const int affect_dim = static_cast<int>(r.u32());

  const std::uint64_t cfg_len = r.u64();
  const json cfg = json::parse(r.str(cfg_len), nullptr, false);
  if (cfg.is_discarded()) {
    throw ConfigError("corrupt config snapshot in checkpoint: " + path);
  }

  CheckpointData data;
  data.encoder = encoder_from_json(cfg.at("encoder"));
  data.train = train_from_json(cfg.at("train"));
  data.variant = cfg.value("variant", "full");
  if (data.encoder.d_ctx() != d_ctx || data.train.d_h != d_h ||
      data.encoder.affect_dim() != affect_dim) {
    throw ConfigError("checkpoint dims disagree with its config snapshot");
  }

  ModelParams shape = ModelParams::zeros(d_ctx, d_h, affect_dim);
  Vec flat = Vec::Zero(shape.size());
  const auto groups = param_groups(shape);
  const std::uint32_t n_arrays = r.u32();
  if (n_arrays != groups.size()) {
    throw ConfigError("checkpoint has unexpected weight array count");
  }
  for (const auto& g : groups) {
    const std::uint16_t name_len = r.u16();
    const std::string name = r.str(name_len);
    const std::uint64_t count = r.u64();
    if (name != g.name || count != static_cast<std::uint64_t>(g.size)) {
      throw ConfigError("checkpoint weight array mismatch at '" + name + "'");
    }
    for (Eigen::Index i = g.offset; i < g.offset + g.size; ++i) {
      flat[i] = r.f64();
    }
  }
  if (!r.exhausted()) {
    throw ConfigError("trailing bytes in checkpoint: " + path);
  }

  data.params = ModelParams::unflatten(flat, d_ctx, d_h, affect_dim);
  if (!flat.allFinite()) {
    throw ConfigError("checkpoint contains non-finite weights");
  }
  return data;
}

}  // namespace moodkit
