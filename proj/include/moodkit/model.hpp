#pragma once

#include "moodkit/affect.hpp"
#include "moodkit/encoder.hpp"
#include "moodkit/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace moodkit {

// Normalization applied to the raw mood variation before weighting: joint
// softmax over the 3-vector (default) or elementwise logistic.
enum class DeltaNorm { Softmax, Sigmoid };

std::string_view to_string(DeltaNorm n);
std::string_view to_string(AffectConcat c);

// All learnable weights, flat-serializable. Shapes are fixed by
// (d_ctx, d_h, affect_dim) recorded alongside.
struct ModelParams {
  int d_ctx = 0;
  int d_h = 0;
  int affect_dim = 3;

  Eigen::Matrix3d adapt_w;   // adaptation layer on the temperament prior
  Vad adapt_b;
  Mat var_w;                 // 3 x (affect_dim + d_ctx), mood variation
  Vad var_b;
  Mat mood_w;                // d_h x 3
  Vec mood_b;
  Mat pers_w;                // d_h x 5
  Vec pers_b;
  Mat cls_w;                 // 7 x (2*d_h + d_ctx)
  Vec7 cls_b;
  Eigen::Vector2d loss_logits;  // softmaxed into the joint-loss weights

  int var_in() const { return affect_dim + d_ctx; }
  int cls_in() const { return 2 * d_h + d_ctx; }
  Eigen::Index size() const;

  // Adaptation starts at identity (the temperament prior passes through
  // unchanged); all other layers use symmetric uniform init with bound
  // 1/sqrt(fan_in), drawn from the seed.
  static ModelParams init(int d_ctx, int d_h, int affect_dim, std::uint64_t seed);
  static ModelParams zeros(int d_ctx, int d_h, int affect_dim);

  Vec flatten() const;
  static ModelParams unflatten(const Vec& flat, int d_ctx, int d_h, int affect_dim);
};

// Named slice of the flat parameter vector; order matches flatten().
struct ParamGroup {
  std::string name;
  Eigen::Index offset;
  Eigen::Index size;
};
std::vector<ParamGroup> param_groups(const ModelParams& p);

struct AdaptedTemperament {
  Vad weights = Vad::Zero();  // per-dimension transition weights
};

// adapt_w * prior + adapt_b
AdaptedTemperament adapt_personality(const Vad& prior, const ModelParams& params);

// Input of the variation layer: (w_e*E + w_a*A | r_c) in Sum mode,
// (w_e*E | w_a*A | r_c) in Split mode.
Vec variation_input(const AffectiveSummary& summary, const Vec& r_c,
                    const EncoderConfig& cfg);

// Raw mood variation, var_w * variation_input + var_b.
Vad mood_variation(const AffectiveSummary& summary, const Vec& r_c,
                   const ModelParams& params, const EncoderConfig& cfg);

Vad normalize_delta(const Vad& delta, DeltaNorm mode);

// mood_to_vad(m_i) + adapted ⊙ normalize_delta(delta)
Vad transition_mood(MoodState m_i, const Vad& delta,
                    const AdaptedTemperament& adapted, DeltaNorm mode);

// cls_w * (mood_w*m_pred + mood_b | pers_w*p + pers_b | r_c) + cls_b
Vec7 emotion_head(const Vad& m_pred, const Ocean& p, const Vec& r_c,
                  const ModelParams& params);

// One training/eval unit after featurization. Everything here is constant
// with respect to the parameters.
struct SampleFeatures {
  Vec r_c;
  AffectiveSummary summary;
  Ocean personality = Ocean::Zero();
  Vad prior = Vad::Zero();      // personality_to_vad(personality)
  Vad mood_in = Vad::Zero();    // mood_to_vad(m_i)
  Vad mood_target = Vad::Zero();
  Emotion label = Emotion::Neutral;      // E_r
  MoodState mood_label = MoodState::Neutral;  // m_r
};

// Raw context of one forward call.
struct TripleInputs {
  std::vector<TokenSeq> utterances;  // U_1..U_{n-1}
  std::vector<Emotion> emotions;     // E_1..E_{n-1}
  Ocean personality = Ocean::Zero();
  MoodState initial_mood = MoodState::Neutral;
};

SampleFeatures featurize(const TripleInputs& inputs, const EncoderConfig& cfg);

// Which parts of the graph a training variant keeps.
enum class MoodSupervision { Transition, Auxiliary, None };

struct VariantSpec {
  bool mood_in_classifier = true;   // feed Linear_m(m_pred) into the head
  bool pers_in_classifier = true;   // feed Linear_p(P) into the head
  MoodSupervision mood_supervision = MoodSupervision::Transition;
  bool scramble_personality = false;  // replace P with one frozen random draw
  std::vector<std::string> frozen_groups;  // never updated by the optimizer

  static VariantSpec full();
  static VariantSpec no_personality();
  static VariantSpec no_mood();
  static VariantSpec personality_concat();
  static VariantSpec mood_aux();
  static VariantSpec from_name(std::string_view name);  // throws ConfigError
};

struct ForwardResult {
  Vad m_pred = Vad::Zero();
  Vec7 logits = Vec7::Zero();
};

// Full pipeline on featurized inputs; pure in (features, params, cfg).
ForwardResult forward(const SampleFeatures& f, const ModelParams& params,
                      const EncoderConfig& cfg, DeltaNorm delta_norm,
                      const VariantSpec& variant = VariantSpec::full());

ForwardResult forward(const TripleInputs& inputs, const ModelParams& params,
                      const EncoderConfig& cfg, DeltaNorm delta_norm);

}  // namespace moodkit
