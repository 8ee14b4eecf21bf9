#pragma once

#include "moodkit/stats.hpp"
#include "moodkit/train.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace moodkit {

struct SeedRunResult {
  std::uint64_t seed = 0;
  bool diverged = false;
  std::string error;
  ClassificationReport emotion;  // emotion generation, test split
  ClassificationReport mood;     // mood-transition prediction, test split
};

struct SeedSweepResult {
  std::string variant = "full";
  std::vector<SeedRunResult> runs;

  std::vector<const SeedRunResult*> usable() const;  // non-diverged
};

// Trains and evaluates once per seed (training is per-seed deterministic;
// divergence is recorded and the sweep continues). Needs >= 2 distinct
// seeds.
SeedSweepResult seed_sweep(const SplitFeatures& data, const EncoderConfig& enc_cfg,
                           const TrainConfig& base_cfg,
                           std::span<const std::uint64_t> seeds,
                           const VariantSpec& variant = VariantSpec::full());

// Spearman across seeds between each mood class's transition F1 (rows:
// Neutral, M1..M4, then macro average) and each emotion's generation F1
// (cols: the 7 emotions, then macro average). NaN where a series is
// constant. Needs >= 3 usable runs.
Mat cross_metric_spearman(const SeedSweepResult& sweep);

// Trains the named variant under the given config and reports test-split
// emotion metrics.
ClassificationReport ablation_run(const SplitFeatures& data,
                                  const EncoderConfig& enc_cfg,
                                  const TrainConfig& cfg,
                                  const VariantSpec& variant);

}  // namespace moodkit
