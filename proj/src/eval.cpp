#include "moodkit/eval.hpp"

#include <set>

namespace moodkit {

std::vector<const SeedRunResult*> SeedSweepResult::usable() const {
  std::vector<const SeedRunResult*> out;
  for (const auto& r : runs) {
    if (!r.diverged) out.push_back(&r);
  }
  return out;
}

SeedSweepResult seed_sweep(const SplitFeatures& data, const EncoderConfig& enc_cfg,
                           const TrainConfig& base_cfg,
                           std::span<const std::uint64_t> seeds,
                           const VariantSpec& variant) {
  if (seeds.size() < 2) {
    throw ConfigError("seed_sweep: need at least 2 seeds");
  }
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("seed_sweep: seeds must be distinct");
  }
  if (data.test.empty()) {
    throw DataError("seed_sweep: empty test split");
  }

  SeedSweepResult sweep;
  for (const std::uint64_t seed : seeds) {
    TrainConfig cfg = base_cfg;
    cfg.seed = seed;
    SeedRunResult run;
    run.seed = seed;
    try {
      const TrainResult trained = train(data, enc_cfg, cfg, variant);
      FeatureSet test = data.test;
      if (variant.scramble_personality) {
        apply_personality_scramble(test, cfg.seed);
      }
      const EvalReports rep =
          evaluate(test, trained.params, enc_cfg, cfg.delta_norm, variant);
      run.emotion = rep.emotion;
      run.mood = rep.mood;
    } catch (const NumericError& e) {
      run.diverged = true;
      run.error = e.what();
    }
    sweep.runs.push_back(std::move(run));
  }
  return sweep;
}

Mat cross_metric_spearman(const SeedSweepResult& sweep) {
  const auto runs = sweep.usable();
  if (runs.size() < 3) {
    throw DataError("cross_metric_spearman: need at least 3 usable runs");
  }
  const std::size_t n = runs.size();

  // Row series: per-mood transition F1 plus the macro average; column
  // series: per-emotion generation F1 plus the macro average.
  const int rows = kNumMoods + 1;
  const int cols = kNumEmotions + 1;
  Mat corr(rows, cols);
  std::vector<double> x(n), y(n);
  for (int r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = r < kNumMoods ? runs[k]->mood.per_class_f1[r] : runs[k]->mood.macro_f1;
    }
    for (int c = 0; c < cols; ++c) {
      for (std::size_t k = 0; k < n; ++k) {
        y[k] = c < kNumEmotions ? runs[k]->emotion.per_class_f1[c]
                                : runs[k]->emotion.macro_f1;
      }
      corr(r, c) = spearman(x, y);
    }
  }
  return corr;
}

ClassificationReport ablation_run(const SplitFeatures& data,
                                  const EncoderConfig& enc_cfg,
                                  const TrainConfig& cfg,
                                  const VariantSpec& variant) {
  const TrainResult trained = train(data, enc_cfg, cfg, variant);
  FeatureSet test = data.test;
  if (variant.scramble_personality) {
    apply_personality_scramble(test, cfg.seed);
  }
  return evaluate(test, trained.params, enc_cfg, cfg.delta_norm, variant).emotion;
}

}  // namespace moodkit
