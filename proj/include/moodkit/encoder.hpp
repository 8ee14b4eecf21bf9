#pragma once

#include "moodkit/affect.hpp"
#include "moodkit/lexicon.hpp"
#include "moodkit/types.hpp"

#include <span>
#include <vector>

namespace moodkit {

// affect_dim of the variation-layer input: Sum folds the two affective means
// into one 3-vector, Split concatenates them (6 dims).
enum class AffectConcat { Sum, Split };

struct EncoderConfig {
  int hash_dim = 22;             // bag-of-words buckets, block (c)
  int max_context_tokens = 128;  // oldest tokens beyond this are dropped
  double w_e = 0.5;              // weight on the mean emotion VAD
  double w_a = 0.5;              // weight on the mean attention VAD
  AffectConcat affect_concat = AffectConcat::Sum;

  int d_ctx() const { return 3 + kNumEmotions + hash_dim; }
  int affect_dim() const { return affect_concat == AffectConcat::Sum ? 3 : 6; }
};

struct AttentionResult {
  Vec weights;  // over in-lexicon tokens only, sums to 1 (empty if none)
  Vad output = Vad::Zero();
};

struct AffectiveSummary {
  Vad mean_emotion_vad = Vad::Zero();
  Vad mean_attention_vad = Vad::Zero();
};

// Softmax attention of the utterance emotion's VAD over the in-lexicon token
// VADs (plain inner products, no temperature). With no in-lexicon tokens the
// weights are empty and the output is zero.
AttentionResult attend_utterance(Emotion e, const TokenSeq& seq);

// Arithmetic means of the emotion VADs and of the per-utterance attention
// outputs over the context. Throws ConfigError on empty or mismatched input.
AffectiveSummary summarize_affect(std::span<const TokenSeq> utterances,
                                  std::span<const Emotion> emotions);

// Deterministic fixed-dimension context encoding: three L2-normalized blocks
// (mean in-lexicon token VAD | mean emotion one-hot | hashed bag-of-words
// frequencies). Token blocks see at most max_context_tokens, newest kept.
Vec encode_context(std::span<const TokenSeq> utterances,
                   std::span<const Emotion> emotions,
                   const EncoderConfig& cfg);

}  // namespace moodkit
