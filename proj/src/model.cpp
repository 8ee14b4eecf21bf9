#include "moodkit/model.hpp"

#include "moodkit/numeric.hpp"
#include "moodkit/rng.hpp"

#include <cmath>

namespace moodkit {

namespace {

// Row-major copy in/out of the flat vector, fixed traversal order.
void write_flat(Eigen::Ref<Vec> flat, Eigen::Index& pos, const Mat& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat[pos++] = m(r, c);
  }
}

void read_flat(const Vec& flat, Eigen::Index& pos, Mat& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = flat[pos++];
  }
}

void fill_uniform(Mat& m, double bound, Rng& rng) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-bound, bound);
  }
}

}  // namespace

std::string_view to_string(DeltaNorm n) {
  return n == DeltaNorm::Softmax ? "softmax" : "sigmoid";
}

std::string_view to_string(AffectConcat c) {
  return c == AffectConcat::Sum ? "sum" : "split";
}

Eigen::Index ModelParams::size() const {
  return 9 + 3 + 3 * var_in() + 3 + d_h * 3 + d_h + d_h * 5 + d_h +
         7 * cls_in() + 7 + 2;
}

ModelParams ModelParams::zeros(int d_ctx, int d_h, int affect_dim) {
  ModelParams p;
  p.d_ctx = d_ctx;
  p.d_h = d_h;
  p.affect_dim = affect_dim;
  p.adapt_w.setZero();
  p.adapt_b.setZero();
  p.var_w = Mat::Zero(3, p.var_in());
  p.var_b.setZero();
  p.mood_w = Mat::Zero(d_h, 3);
  p.mood_b = Vec::Zero(d_h);
  p.pers_w = Mat::Zero(d_h, 5);
  p.pers_b = Vec::Zero(d_h);
  p.cls_w = Mat::Zero(7, p.cls_in());
  p.cls_b.setZero();
  p.loss_logits.setZero();
  return p;
}

ModelParams ModelParams::init(int d_ctx, int d_h, int affect_dim,
                              std::uint64_t seed) {
  ModelParams p = zeros(d_ctx, d_h, affect_dim);
  p.adapt_w.setIdentity();  // training starts from the temperament prior

  Rng rng(Rng::mix(seed, 0xA11CE));
  const auto uniform_layer = [&rng](Mat& w, Eigen::Ref<Vec> b) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    fill_uniform(w, bound, rng);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.uniform(-bound, bound);
  };

  Vec var_b(3), cls_b(7);
  uniform_layer(p.var_w, var_b);
  p.var_b = var_b.head<3>();
  uniform_layer(p.mood_w, p.mood_b);
  uniform_layer(p.pers_w, p.pers_b);
  uniform_layer(p.cls_w, cls_b);
  p.cls_b = cls_b.head<7>();
  // loss_logits stay zero: equal joint-loss weights at the start.
  return p;
}

Vec ModelParams::flatten() const {
  Vec flat(size());
  Eigen::Index pos = 0;
  write_flat(flat, pos, adapt_w);
  flat.segment(pos, 3) = adapt_b;
  pos += 3;
  write_flat(flat, pos, var_w);
  flat.segment(pos, 3) = var_b;
  pos += 3;
  write_flat(flat, pos, mood_w);
  flat.segment(pos, d_h) = mood_b;
  pos += d_h;
  write_flat(flat, pos, pers_w);
  flat.segment(pos, d_h) = pers_b;
  pos += d_h;
  write_flat(flat, pos, cls_w);
  flat.segment(pos, 7) = cls_b;
  pos += 7;
  flat.segment(pos, 2) = loss_logits;
  pos += 2;
  return flat;
}

ModelParams ModelParams::unflatten(const Vec& flat, int d_ctx, int d_h,
                                   int affect_dim) {
  ModelParams p = zeros(d_ctx, d_h, affect_dim);
  if (flat.size() != p.size()) {
    throw ConfigError("parameter vector size does not match model dims");
  }
  Eigen::Index pos = 0;
  Mat adapt(3, 3);
  read_flat(flat, pos, adapt);
  p.adapt_w = adapt;
  p.adapt_b = flat.segment(pos, 3);
  pos += 3;
  read_flat(flat, pos, p.var_w);
  p.var_b = flat.segment(pos, 3);
  pos += 3;
  read_flat(flat, pos, p.mood_w);
  p.mood_b = flat.segment(pos, d_h);
  pos += d_h;
  read_flat(flat, pos, p.pers_w);
  p.pers_b = flat.segment(pos, d_h);
  pos += d_h;
  read_flat(flat, pos, p.cls_w);
  p.cls_b = flat.segment(pos, 7);
  pos += 7;
  p.loss_logits = flat.segment(pos, 2);
  return p;
}

std::vector<ParamGroup> param_groups(const ModelParams& p) {
  std::vector<ParamGroup> groups;
  Eigen::Index pos = 0;
  const auto add = [&](const char* name, Eigen::Index n) {
    groups.push_back({name, pos, n});
    pos += n;
  };
  add("adapt_w", 9);
  add("adapt_b", 3);
  add("var_w", 3 * p.var_in());
  add("var_b", 3);
  add("mood_w", p.d_h * 3);
  add("mood_b", p.d_h);
  add("pers_w", p.d_h * 5);
  add("pers_b", p.d_h);
  add("cls_w", 7 * p.cls_in());
  add("cls_b", 7);
  add("loss_logits", 2);
  return groups;
}

AdaptedTemperament adapt_personality(const Vad& prior, const ModelParams& params) {
  return {params.adapt_w * prior + params.adapt_b};
}

Vec variation_input(const AffectiveSummary& summary, const Vec& r_c,
                    const EncoderConfig& cfg) {
  Vec x(cfg.affect_dim() + r_c.size());
  if (cfg.affect_concat == AffectConcat::Sum) {
    x.head<3>() = cfg.w_e * summary.mean_emotion_vad +
                  cfg.w_a * summary.mean_attention_vad;
  } else {
    x.head<3>() = cfg.w_e * summary.mean_emotion_vad;
    x.segment<3>(3) = cfg.w_a * summary.mean_attention_vad;
  }
  x.tail(r_c.size()) = r_c;
  return x;
}

Vad mood_variation(const AffectiveSummary& summary, const Vec& r_c,
                   const ModelParams& params, const EncoderConfig& cfg) {
  const Vec x = variation_input(summary, r_c, cfg);
  if (x.size() != params.var_w.cols()) {
    throw ConfigError("variation layer input size mismatch");
  }
  return params.var_w * x + params.var_b;
}

Vad normalize_delta(const Vad& delta, DeltaNorm mode) {
  if (mode == DeltaNorm::Softmax) {
    return softmax(delta);
  }
  return Vad(sigmoid(delta.x()), sigmoid(delta.y()), sigmoid(delta.z()));
}

Vad transition_mood(MoodState m_i, const Vad& delta,
                    const AdaptedTemperament& adapted, DeltaNorm mode) {
  return mood_to_vad(m_i) +
         adapted.weights.cwiseProduct(normalize_delta(delta, mode));
}

Vec7 emotion_head(const Vad& m_pred, const Ocean& p, const Vec& r_c,
                  const ModelParams& params) {
  if (r_c.size() != params.d_ctx) {
    throw ConfigError("classifier context size mismatch");
  }
  Vec x(params.cls_in());
  x.head(params.d_h) = params.mood_w * m_pred + params.mood_b;
  x.segment(params.d_h, params.d_h) = params.pers_w * p + params.pers_b;
  x.tail(params.d_ctx) = r_c;
  return params.cls_w * x + params.cls_b;
}

SampleFeatures featurize(const TripleInputs& inputs, const EncoderConfig& cfg) {
  SampleFeatures f;
  f.summary = summarize_affect(inputs.utterances, inputs.emotions);
  f.r_c = encode_context(inputs.utterances, inputs.emotions, cfg);
  f.personality = inputs.personality;
  f.prior = personality_to_vad(inputs.personality);
  f.mood_in = mood_to_vad(inputs.initial_mood);
  return f;
}

VariantSpec VariantSpec::full() { return {}; }

VariantSpec VariantSpec::no_personality() {
  VariantSpec v;
  v.scramble_personality = true;
  v.frozen_groups = {"adapt_w", "adapt_b", "pers_w", "pers_b"};
  return v;
}

VariantSpec VariantSpec::no_mood() {
  VariantSpec v;
  v.mood_in_classifier = false;
  v.pers_in_classifier = false;
  v.mood_supervision = MoodSupervision::None;
  return v;
}

VariantSpec VariantSpec::personality_concat() {
  VariantSpec v;
  v.mood_in_classifier = false;
  v.mood_supervision = MoodSupervision::None;
  return v;
}

VariantSpec VariantSpec::mood_aux() {
  VariantSpec v;
  v.mood_in_classifier = false;
  v.pers_in_classifier = false;
  v.mood_supervision = MoodSupervision::Auxiliary;
  return v;
}

VariantSpec VariantSpec::from_name(std::string_view name) {
  if (name == "full") return full();
  if (name == "no-personality") return no_personality();
  if (name == "no-mood") return no_mood();
  if (name == "personality-concat") return personality_concat();
  if (name == "mood-aux") return mood_aux();
  throw ConfigError("unknown ablation variant: " + std::string(name));
}

ForwardResult forward(const SampleFeatures& f, const ModelParams& params,
                      const EncoderConfig& cfg, DeltaNorm delta_norm,
                      const VariantSpec& variant) {
  ForwardResult out;
  switch (variant.mood_supervision) {
    case MoodSupervision::Transition: {
      const Vad delta = mood_variation(f.summary, f.r_c, params, cfg);
      const auto adapted = adapt_personality(f.prior, params);
      out.m_pred = f.mood_in +
                   adapted.weights.cwiseProduct(normalize_delta(delta, delta_norm));
      break;
    }
    case MoodSupervision::Auxiliary: {
      // Mood read off the context representation alone, no transition.
      Vec x = Vec::Zero(params.var_in());
      x.tail(params.d_ctx) = f.r_c;
      out.m_pred = params.var_w * x + params.var_b;
      break;
    }
    case MoodSupervision::None:
      break;
  }

  Vec x(params.cls_in());
  if (variant.mood_in_classifier) {
    x.head(params.d_h) = params.mood_w * out.m_pred + params.mood_b;
  } else {
    x.head(params.d_h).setZero();
  }
  if (variant.pers_in_classifier) {
    x.segment(params.d_h, params.d_h) = params.pers_w * f.personality + params.pers_b;
  } else {
    x.segment(params.d_h, params.d_h).setZero();
  }
  x.tail(params.d_ctx) = f.r_c;
  out.logits = params.cls_w * x + params.cls_b;
  return out;
}

ForwardResult forward(const TripleInputs& inputs, const ModelParams& params,
                      const EncoderConfig& cfg, DeltaNorm delta_norm) {
  return forward(featurize(inputs, cfg), params, cfg, delta_norm);
}

}  // namespace moodkit
