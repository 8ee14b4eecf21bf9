#include "moodkit/encoder.hpp"

#include "moodkit/numeric.hpp"

namespace moodkit {

namespace {

void require_context(std::span<const TokenSeq> utterances,
                     std::span<const Emotion> emotions) {
  if (utterances.empty()) {
    throw ConfigError("context must contain at least one utterance");
  }
  if (utterances.size() != emotions.size()) {
    throw ConfigError("context utterances and emotions differ in length");
  }
}

// Flattens the context into one token stream, oldest first, then keeps the
// newest max_tokens.
std::vector<const Token*> clipped_tokens(std::span<const TokenSeq> utterances,
                                         int max_tokens) {
  std::vector<const Token*> stream;
  for (const auto& seq : utterances) {
    for (const auto& tok : seq.tokens) stream.push_back(&tok);
  }
  if (max_tokens > 0 && stream.size() > static_cast<std::size_t>(max_tokens)) {
    stream.erase(stream.begin(),
                 stream.end() - static_cast<std::ptrdiff_t>(max_tokens));
  }
  return stream;
}

void l2_normalize_block(Eigen::Ref<Vec> block) {
  const double norm = block.norm();
  if (norm > 0.0) block /= norm;
}

}  // namespace

AttentionResult attend_utterance(Emotion e, const TokenSeq& seq) {
  const Vad query = emotion_to_vad(e);

  std::vector<const Vad*> attended;
  attended.reserve(seq.tokens.size());
  for (const auto& tok : seq.tokens) {
    if (tok.vad) attended.push_back(&*tok.vad);
  }

  AttentionResult res;
  if (attended.empty()) return res;

  Vec logits(attended.size());
  for (std::size_t j = 0; j < attended.size(); ++j) {
    logits[static_cast<Eigen::Index>(j)] = query.dot(*attended[j]);
  }
  res.weights = softmax(logits);
  for (std::size_t j = 0; j < attended.size(); ++j) {
    res.output += res.weights[static_cast<Eigen::Index>(j)] * *attended[j];
  }
  return res;
}

AffectiveSummary summarize_affect(std::span<const TokenSeq> utterances,
                                  std::span<const Emotion> emotions) {
  require_context(utterances, emotions);
  AffectiveSummary sum;
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    sum.mean_emotion_vad += emotion_to_vad(emotions[i]);
    sum.mean_attention_vad += attend_utterance(emotions[i], utterances[i]).output;
  }
  const double n = static_cast<double>(utterances.size());
  sum.mean_emotion_vad /= n;
  sum.mean_attention_vad /= n;
  return sum;
}

Vec encode_context(std::span<const TokenSeq> utterances,
                   std::span<const Emotion> emotions,
                   const EncoderConfig& cfg) {
  require_context(utterances, emotions);
  if (cfg.hash_dim < 1) {
    throw ConfigError("encoder hash_dim must be positive");
  }

  Vec enc = Vec::Zero(cfg.d_ctx());
  const auto stream = clipped_tokens(utterances, cfg.max_context_tokens);

  // Block (a): mean VAD of in-lexicon tokens.
  int in_lexicon = 0;
  for (const Token* tok : stream) {
    if (tok->vad) {
      enc.head<3>() += *tok->vad;
      ++in_lexicon;
    }
  }
  if (in_lexicon > 0) enc.head<3>() /= static_cast<double>(in_lexicon);

  // Block (b): mean one-hot of the context emotion labels.
  for (const Emotion e : emotions) {
    enc[3 + static_cast<int>(e)] += 1.0;
  }
  enc.segment(3, kNumEmotions) /= static_cast<double>(emotions.size());

  // Block (c): hashed bag-of-words relative frequencies.
  if (!stream.empty()) {
    auto bow = enc.tail(cfg.hash_dim);
    for (const Token* tok : stream) {
      const auto bucket = fnv1a64(tok->surface) % static_cast<std::uint64_t>(cfg.hash_dim);
      bow[static_cast<Eigen::Index>(bucket)] += 1.0;
    }
    bow /= static_cast<double>(stream.size());
  }

  l2_normalize_block(enc.head<3>());
  l2_normalize_block(enc.segment(3, kNumEmotions));
  l2_normalize_block(enc.tail(cfg.hash_dim));
  return enc;
}

}  // namespace moodkit
