#pragma once

#include "moodkit/corpus.hpp"
#include "moodkit/grad.hpp"
#include "moodkit/lexicon.hpp"
#include "moodkit/model.hpp"
#include "moodkit/stats.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace moodkit {

struct TrainConfig {
  double learning_rate = 1e-5;
  int batch_size = 16;
  int epochs = 50;
  double warmup_fraction = 0.05;  // linear warmup over this share of steps
  std::uint64_t seed = 0;
  double focal_alpha = 0.5;
  double focal_gamma = 2.0;
  MoodLossForm mood_loss_form = MoodLossForm::AsWritten;
  DeltaNorm delta_norm = DeltaNorm::Softmax;
  int d_h = 16;

  LossConfig loss_config() const {
    return {focal_alpha, focal_gamma, mood_loss_form, delta_norm};
  }
  void validate() const;  // throws ConfigError
};

struct FeatureSet {
  std::vector<SampleFeatures> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
};

FeatureSet featurize_triples(std::span<const DialogTriple> triples,
                             const VadLexicon& lex, const EncoderConfig& cfg);

struct SplitFeatures {
  FeatureSet train, valid, test;
};

SplitFeatures featurize_splits(std::span<const DialogTriple> triples,
                               const VadLexicon& lex, const EncoderConfig& cfg);

// Replaces every sample's personality (and its temperament prior) with one
// frozen random draw derived from the seed, removing per-speaker signal.
void apply_personality_scramble(FeatureSet& features, std::uint64_t seed);

struct Prediction {
  Emotion emotion = Emotion::Neutral;
  MoodState mood = MoodState::Neutral;  // quadrantized m_pred
  Vec7 probs = Vec7::Zero();
  Vad m_pred = Vad::Zero();
};

Prediction predict(const SampleFeatures& f, const ModelParams& params,
                   const EncoderConfig& cfg, DeltaNorm delta_norm,
                   const VariantSpec& variant = VariantSpec::full());

struct EvalReports {
  ClassificationReport emotion;  // 7-class
  ClassificationReport mood;     // 5-class, quadrantized m_pred vs m_r
};

EvalReports evaluate(const FeatureSet& features, const ModelParams& params,
                     const EncoderConfig& cfg, DeltaNorm delta_norm,
                     const VariantSpec& variant = VariantSpec::full());

struct EpochStats {
  int epoch = 0;
  double mood_loss = 0.0;
  double emo_loss = 0.0;
  double w1 = 0.5;
  double w2 = 0.5;
  double total = 0.0;
  double val_macro_f1 = 0.0;
  double val_weighted_f1 = 0.0;
};

struct TrainLog {
  std::vector<EpochStats> epochs;
  int best_epoch = -1;  // 1-based; -1 when no epochs ran
  double best_val_macro_f1 = 0.0;
};

struct TrainResult {
  ModelParams params;  // best validation macro-F1 epoch
  TrainLog log;
};

// Adam with linear warmup, single-threaded, bitwise reproducible from
// (seed, data, cfg). Returns the parameters of the best validation
// macro-F1 epoch (the last epoch if the validation set is empty). Throws
// NumericError on divergence.
TrainResult train(const SplitFeatures& data, const EncoderConfig& enc_cfg,
                  const TrainConfig& cfg,
                  const VariantSpec& variant = VariantSpec::full());

}  // namespace moodkit
