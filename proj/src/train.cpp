#include "moodkit/train.hpp"

#include "moodkit/numeric.hpp"
#include "moodkit/rng.hpp"

#include <cmath>
#include <numeric>

namespace moodkit {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be finite and >= 0");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (warmup_fraction < 0.0 || warmup_fraction > 1.0) {
    throw ConfigError("warmup_fraction must be in [0, 1]");
  }
  if (focal_gamma < 0.0) throw ConfigError("focal_gamma must be >= 0");
  if (d_h < 1) throw ConfigError("d_h must be >= 1");
}

FeatureSet featurize_triples(std::span<const DialogTriple> triples,
                             const VadLexicon& lex, const EncoderConfig& cfg) {
  FeatureSet out;
  out.samples.reserve(triples.size());
  for (const auto& t : triples) {
    TripleInputs inputs;
    inputs.utterances = {tokenize(t.u1.text, lex), tokenize(t.u2.text, lex)};
    inputs.emotions = {t.u1.emotion, t.u2.emotion};
    inputs.personality = t.personality;
    inputs.initial_mood = t.m_i;

    SampleFeatures f = featurize(inputs, cfg);
    f.mood_target = mood_to_vad(t.m_r);
    f.label = t.u3.emotion;
    f.mood_label = t.m_r;
    out.samples.push_back(std::move(f));
  }
  return out;
}

SplitFeatures featurize_splits(std::span<const DialogTriple> triples,
                               const VadLexicon& lex, const EncoderConfig& cfg) {
  std::vector<DialogTriple> train, valid, test;
  for (const auto& t : triples) {
    switch (t.split) {
      case Split::Train: train.push_back(t); break;
      case Split::Valid: valid.push_back(t); break;
      case Split::Test: test.push_back(t); break;
    }
  }
  return {featurize_triples(train, lex, cfg), featurize_triples(valid, lex, cfg),
          featurize_triples(test, lex, cfg)};
}

void apply_personality_scramble(FeatureSet& features, std::uint64_t seed) {
  Rng rng(Rng::mix(seed, 0xFACE));
  Ocean frozen;
  for (int i = 0; i < 5; ++i) frozen[i] = rng.uniform();
  const Vad prior = personality_to_vad(frozen);
  for (auto& f : features.samples) {
    f.personality = frozen;
    f.prior = prior;
  }
}

Prediction predict(const SampleFeatures& f, const ModelParams& params,
                   const EncoderConfig& cfg, DeltaNorm delta_norm,
                   const VariantSpec& variant) {
  const ForwardResult fwd = forward(f, params, cfg, delta_norm, variant);
  Prediction pred;
  pred.m_pred = fwd.m_pred;
  pred.probs = softmax(fwd.logits);
  Eigen::Index argmax = 0;
  fwd.logits.maxCoeff(&argmax);
  pred.emotion = static_cast<Emotion>(argmax);
  pred.mood = vad_to_mood(fwd.m_pred);
  return pred;
}

EvalReports evaluate(const FeatureSet& features, const ModelParams& params,
                     const EncoderConfig& cfg, DeltaNorm delta_norm,
                     const VariantSpec& variant) {
  std::vector<Emotion> emo_pred, emo_gold;
  std::vector<MoodState> mood_pred, mood_gold;
  emo_pred.reserve(features.size());
  for (const auto& f : features.samples) {
    const Prediction p = predict(f, params, cfg, delta_norm, variant);
    emo_pred.push_back(p.emotion);
    emo_gold.push_back(f.label);
    mood_pred.push_back(p.mood);
    mood_gold.push_back(f.mood_label);
  }
  return {f1_report(emo_pred, emo_gold), mood_f1_report(mood_pred, mood_gold)};
}

namespace {

// Zeroes gradient entries of frozen groups so Adam never moves them.
Vec frozen_mask(const ModelParams& params, const VariantSpec& variant) {
  Vec mask = Vec::Ones(params.size());
  for (const auto& group : param_groups(params)) {
    for (const auto& frozen : variant.frozen_groups) {
      if (group.name == frozen) {
        mask.segment(group.offset, group.size).setZero();
      }
    }
  }
  return mask;
}

}  // namespace

TrainResult train(const SplitFeatures& data, const EncoderConfig& enc_cfg,
                  const TrainConfig& cfg, const VariantSpec& variant) {
  cfg.validate();
  if (data.train.empty()) {
    throw DataError("train: empty training split");
  }

  SplitFeatures scrambled;
  const SplitFeatures* sets = &data;
  if (variant.scramble_personality) {
    scrambled = data;
    apply_personality_scramble(scrambled.train, cfg.seed);
    apply_personality_scramble(scrambled.valid, cfg.seed);
    apply_personality_scramble(scrambled.test, cfg.seed);
    sets = &scrambled;
  }

  ModelParams params = ModelParams::init(enc_cfg.d_ctx(), cfg.d_h,
                                         enc_cfg.affect_dim(), cfg.seed);
  if (variant.scramble_personality) {
    // The adaptation layer starts random rather than at identity: the
    // temperament prior it would preserve is no longer meaningful.
    Rng rng(Rng::mix(cfg.seed, 0xADAF7));
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        params.adapt_w(r, c) = rng.uniform(-1.0, 1.0) / std::sqrt(3.0);
      }
    }
  }

  const Vec mask = frozen_mask(params, variant);
  const LossConfig loss_cfg = cfg.loss_config();

  const std::size_t n = sets->train.size();
  const std::size_t batches_per_epoch =
      (n + static_cast<std::size_t>(cfg.batch_size) - 1) /
      static_cast<std::size_t>(cfg.batch_size);
  const std::size_t total_steps = batches_per_epoch * static_cast<std::size_t>(cfg.epochs);
  const auto warmup_steps = static_cast<std::size_t>(
      std::ceil(cfg.warmup_fraction * static_cast<double>(total_steps)));

  Vec flat = params.flatten();
  Vec m1 = Vec::Zero(flat.size());
  Vec m2 = Vec::Zero(flat.size());
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;

  Rng shuffle_rng(Rng::mix(cfg.seed, 0x0E0C4));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  result.params = params;
  std::size_t step = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);

    EpochStats stats;
    stats.epoch = epoch;
    std::vector<SampleFeatures> batch;
    batch.reserve(cfg.batch_size);

    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      batch.clear();
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
      for (std::size_t k = start; k < end; ++k) {
        batch.push_back(sets->train.samples[order[k]]);
      }

      params = ModelParams::unflatten(flat, params.d_ctx, params.d_h, params.affect_dim);
      BatchEval eval = batch_gradients(batch, params, enc_cfg, loss_cfg, variant);
      eval.grad = eval.grad.cwiseProduct(mask);

      ++step;
      const double warm = warmup_steps == 0
                              ? 1.0
                              : std::min(1.0, static_cast<double>(step) /
                                                  static_cast<double>(warmup_steps));
      const double lr = cfg.learning_rate * warm;

      m1 = kBeta1 * m1 + (1.0 - kBeta1) * eval.grad;
      m2 = kBeta2 * m2 + (1.0 - kBeta2) * eval.grad.cwiseProduct(eval.grad);
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      flat -= lr * (m1 / c1).cwiseQuotient((m2 / c2).cwiseSqrt() + Vec::Constant(flat.size(), kEps));

      const double w = static_cast<double>(batch.size());
      stats.mood_loss += eval.mean.mood_loss * w;
      stats.emo_loss += eval.mean.emo_loss * w;
      stats.w1 += eval.mean.w1 * w;
      stats.w2 += eval.mean.w2 * w;
      stats.total += eval.mean.total * w;
    }

    stats.mood_loss /= static_cast<double>(n);
    stats.emo_loss /= static_cast<double>(n);
    stats.w1 /= static_cast<double>(n);
    stats.w2 /= static_cast<double>(n);
    stats.total /= static_cast<double>(n);

    params = ModelParams::unflatten(flat, params.d_ctx, params.d_h, params.affect_dim);
    if (!sets->valid.empty()) {
      const EvalReports rep = evaluate(sets->valid, params, enc_cfg, cfg.delta_norm, variant);
      stats.val_macro_f1 = rep.emotion.macro_f1;
      stats.val_weighted_f1 = rep.emotion.weighted_f1;
      if (result.log.best_epoch < 0 || stats.val_macro_f1 > result.log.best_val_macro_f1) {
        result.log.best_epoch = epoch;
        result.log.best_val_macro_f1 = stats.val_macro_f1;
        result.params = params;
      }
    } else {
      result.log.best_epoch = epoch;
      result.params = params;
    }
    result.log.epochs.push_back(stats);
  }

  if (cfg.epochs == 0) {
    result.params = params;
  }
  return result;
}

}  // namespace moodkit
