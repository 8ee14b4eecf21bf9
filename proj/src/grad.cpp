#include "moodkit/grad.hpp"

#include "moodkit/numeric.hpp"
#include "moodkit/rng.hpp"

#include <cmath>
#include <string>

namespace moodkit {

namespace {

// Everything the backward pass reuses from the forward pass.
struct Trace {
  Vec x_var;        // variation-layer input (Transition), or (0 | r_c) (Aux)
  Vad delta = Vad::Zero();
  Vad s = Vad::Zero();        // normalized delta
  Vad adapted = Vad::Zero();
  Vad m_pred = Vad::Zero();
  Vec x_cls;
  Vec7 probs = Vec7::Zero();
  LossBreakdown loss;
};

Trace run_forward(const SampleFeatures& f, const ModelParams& params,
                  const EncoderConfig& enc_cfg, const LossConfig& loss_cfg,
                  const VariantSpec& variant) {
  Trace t;
  switch (variant.mood_supervision) {
    case MoodSupervision::Transition:
      t.x_var = variation_input(f.summary, f.r_c, enc_cfg);
      if (t.x_var.size() != params.var_w.cols()) {
        throw ConfigError("variation layer input size mismatch");
      }
      t.delta = params.var_w * t.x_var + params.var_b;
      t.s = normalize_delta(t.delta, loss_cfg.delta_norm);
      t.adapted = params.adapt_w * f.prior + params.adapt_b;
      t.m_pred = f.mood_in + t.adapted.cwiseProduct(t.s);
      break;
    case MoodSupervision::Auxiliary:
      t.x_var = Vec::Zero(params.var_in());
      t.x_var.tail(params.d_ctx) = f.r_c;
      t.m_pred = params.var_w * t.x_var + params.var_b;
      break;
    case MoodSupervision::None:
      break;
  }

  t.x_cls = Vec::Zero(params.cls_in());
  if (variant.mood_in_classifier) {
    t.x_cls.head(params.d_h) = params.mood_w * t.m_pred + params.mood_b;
  }
  if (variant.pers_in_classifier) {
    t.x_cls.segment(params.d_h, params.d_h) =
        params.pers_w * f.personality + params.pers_b;
  }
  t.x_cls.tail(params.d_ctx) = f.r_c;
  t.probs = softmax(Vec7(params.cls_w * t.x_cls + params.cls_b));

  const double emo =
      focal_loss(t.probs, f.label, loss_cfg.focal_alpha, loss_cfg.focal_gamma);
  if (variant.mood_supervision == MoodSupervision::None) {
    t.loss.mood_loss = 0.0;
    t.loss.emo_loss = emo;
    t.loss.w1 = 0.0;
    t.loss.w2 = 1.0;
    t.loss.total = emo;
  } else {
    const double mood =
        mood_loss(f.mood_target, t.m_pred, loss_cfg.mood_loss_form);
    t.loss = joint_loss(mood, emo, params.loss_logits);
  }
  return t;
}

// d focal / d p_t, consistent with the floor applied inside the log.
double focal_dp(double p, double alpha, double gamma) {
  const double pc = std::max(p, kFocalProbFloor);
  const double log_p = std::log(pc);
  const double u = std::max(1.0 - p, 0.0);
  const double mod = gamma == 0.0 ? 1.0 : std::pow(u, gamma);
  double g = 0.0;
  if (gamma != 0.0) {
    g += alpha * gamma * std::pow(u, gamma - 1.0) * log_p;
  }
  if (p > kFocalProbFloor) {
    g -= alpha * mod / pc;
  }
  return g;
}

void accumulate_sample(const SampleFeatures& f, const ModelParams& params,
                       const LossConfig& loss_cfg, const VariantSpec& variant,
                       const Trace& t, ModelParams& g) {
  const int y = static_cast<int>(f.label);
  const double gm = t.loss.w1;  // d total / d mood_loss
  const double ge = t.loss.w2;  // d total / d emo_loss

  if (variant.mood_supervision != MoodSupervision::None) {
    // (w1, w2) = softmax(ll): d total / d ll_i = w_i * (loss_i - total).
    g.loss_logits[0] += t.loss.w1 * (t.loss.mood_loss - t.loss.total);
    g.loss_logits[1] += t.loss.w2 * (t.loss.emo_loss - t.loss.total);
  }

  // Classifier branch. dL/dz_j = dL/dp_y * p_y * (delta_jy - p_j).
  const double dp = focal_dp(t.probs[y], loss_cfg.focal_alpha, loss_cfg.focal_gamma);
  Vec7 g_z = -t.probs[y] * t.probs;
  g_z[y] += t.probs[y];
  g_z *= ge * dp;

  g.cls_w += g_z * t.x_cls.transpose();
  g.cls_b += g_z;
  const Vec g_xcls = params.cls_w.transpose() * g_z;

  Vad g_mpred = Vad::Zero();
  if (variant.mood_in_classifier) {
    const Vec g_hm = g_xcls.head(params.d_h);
    g.mood_w += g_hm * t.m_pred.transpose();
    g.mood_b += g_hm;
    g_mpred += params.mood_w.transpose() * g_hm;
  }
  if (variant.pers_in_classifier) {
    const Vec g_hp = g_xcls.segment(params.d_h, params.d_h);
    g.pers_w += g_hp * f.personality.transpose();
    g.pers_b += g_hp;
  }

  if (variant.mood_supervision == MoodSupervision::None) return;

  // Mood-loss term. Subgradient of |.| at 0 is taken as 0.
  const Vad diff = f.mood_target - t.m_pred;
  Vad dmood;
  if (loss_cfg.mood_loss_form == MoodLossForm::AsWritten) {
    dmood = (-diff.array().sign()).matrix();
  } else {
    dmood = -(2.0 / 3.0) * diff;
  }
  g_mpred += gm * dmood;

  if (variant.mood_supervision == MoodSupervision::Auxiliary) {
    g.var_w += g_mpred * t.x_var.transpose();
    g.var_b += g_mpred;
    return;
  }

  // Transition branch: m_pred = mood_in + adapted ⊙ s.
  const Vad g_adapted = g_mpred.cwiseProduct(t.s);
  g.adapt_w += g_adapted * f.prior.transpose();
  g.adapt_b += g_adapted;

  const Vad g_s = g_mpred.cwiseProduct(t.adapted);
  Vad g_delta;
  if (loss_cfg.delta_norm == DeltaNorm::Softmax) {
    g_delta = t.s.cwiseProduct(g_s - Vad::Constant(g_s.dot(t.s)));
  } else {
    g_delta = g_s.cwiseProduct(t.s.cwiseProduct(Vad::Ones() - t.s));
  }
  g.var_w += g_delta * t.x_var.transpose();
  g.var_b += g_delta;
}

}  // namespace

LossBreakdown sample_loss(const SampleFeatures& f, const ModelParams& params,
                          const EncoderConfig& enc_cfg, const LossConfig& loss_cfg,
                          const VariantSpec& variant) {
  return run_forward(f, params, enc_cfg, loss_cfg, variant).loss;
}

BatchEval batch_gradients(std::span<const SampleFeatures> batch,
                          const ModelParams& params, const EncoderConfig& enc_cfg,
                          const LossConfig& loss_cfg, const VariantSpec& variant) {
  if (batch.empty()) {
    throw ConfigError("batch_gradients: empty batch");
  }

  ModelParams acc = ModelParams::zeros(params.d_ctx, params.d_h, params.affect_dim);
  BatchEval out;
  out.mean = LossBreakdown{0.0, 0.0, 0.0, 0.0, 0.0};

  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Trace t = run_forward(batch[i], params, enc_cfg, loss_cfg, variant);
    if (!std::isfinite(t.loss.total)) {
      throw NumericError("non-finite loss at sample index " + std::to_string(i));
    }
    accumulate_sample(batch[i], params, loss_cfg, variant, t, acc);
    out.mean.mood_loss += t.loss.mood_loss;
    out.mean.emo_loss += t.loss.emo_loss;
    out.mean.w1 += t.loss.w1;
    out.mean.w2 += t.loss.w2;
    out.mean.total += t.loss.total;
  }

  const double n = static_cast<double>(batch.size());
  out.mean.mood_loss /= n;
  out.mean.emo_loss /= n;
  out.mean.w1 /= n;
  out.mean.w2 /= n;
  out.mean.total /= n;
  out.grad = acc.flatten() / n;
  return out;
}

std::vector<GroupCheck> finite_difference_check(
    std::span<const SampleFeatures> batch, const ModelParams& params,
    const EncoderConfig& enc_cfg, const LossConfig& loss_cfg,
    const VariantSpec& variant, const Vec& analytic_grad, double h_scale) {
  const auto mean_loss = [&](const ModelParams& p) {
    double sum = 0.0;
    for (const auto& f : batch) {
      sum += sample_loss(f, p, enc_cfg, loss_cfg, variant).total;
    }
    return sum / static_cast<double>(batch.size());
  };

  Vec flat = params.flatten();
  std::vector<GroupCheck> checks;
  for (const auto& group : param_groups(params)) {
    GroupCheck gc;
    gc.group = group.name;
    for (Eigen::Index k = group.offset; k < group.offset + group.size; ++k) {
      const double theta = flat[k];
      const double h = h_scale * std::max(1.0, std::abs(theta));
      flat[k] = theta + h;
      const double lp = mean_loss(
          ModelParams::unflatten(flat, params.d_ctx, params.d_h, params.affect_dim));
      flat[k] = theta - h;
      const double lm = mean_loss(
          ModelParams::unflatten(flat, params.d_ctx, params.d_h, params.affect_dim));
      flat[k] = theta;

      const double fd = (lp - lm) / (2.0 * h);
      const double a = analytic_grad[k];
      // Denominator floored so FD roundoff on near-zero coordinates does not
      // register as relative error.
      const double rel =
          std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-2});
      gc.max_rel_err = std::max(gc.max_rel_err, rel);
    }
    checks.push_back(std::move(gc));
  }
  return checks;
}

std::vector<SampleFeatures> make_gradcheck_batch(int n, const EncoderConfig& cfg,
                                                 std::uint64_t seed) {
  std::vector<SampleFeatures> batch;
  Rng rng(Rng::mix(seed, 0x6C4D));
  while (static_cast<int>(batch.size()) < n) {
    SampleFeatures f;
    f.r_c = Vec::Zero(cfg.d_ctx());
    for (Eigen::Index i = 0; i < f.r_c.size(); ++i) f.r_c[i] = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < 3; ++i) {
      f.summary.mean_emotion_vad[i] = rng.uniform(-1.0, 1.0);
      f.summary.mean_attention_vad[i] = rng.uniform(-1.0, 1.0);
    }
    for (int i = 0; i < 5; ++i) f.personality[i] = rng.uniform();
    f.prior = personality_to_vad(f.personality);
    const auto m_i = static_cast<MoodState>(rng.uniform_int(kNumMoods));
    const auto m_r = static_cast<MoodState>(rng.uniform_int(kNumMoods));
    f.mood_in = mood_to_vad(m_i);
    f.mood_target = mood_to_vad(m_r);
    f.label = static_cast<Emotion>(rng.uniform_int(kNumEmotions));
    f.mood_label = m_r;
    // Nudge the target off the |.|-loss kink so central differences do not
    // straddle it.
    for (int i = 0; i < 3; ++i) {
      f.mood_target[i] += rng.uniform(0.05, 0.15) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    }
    batch.push_back(std::move(f));
  }
  return batch;
}

std::vector<GroupCheck> gradient_check(const EncoderConfig& enc_cfg,
                                       const LossConfig& loss_cfg,
                                       std::uint64_t seed,
                                       const VariantSpec& variant) {
  std::uint64_t attempt_seed = seed;
  for (int attempt = 0; attempt < 16; ++attempt) {
    const auto batch = make_gradcheck_batch(8, enc_cfg, attempt_seed);
    const ModelParams params =
        ModelParams::init(enc_cfg.d_ctx(), 16, enc_cfg.affect_dim(),
                          Rng::mix(attempt_seed, 0xBEEF));

    // Reject a draw whose |.|-loss sits too close to a kink; the check is
    // rerun on a derived seed so the procedure stays deterministic.
    bool near_kink = false;
    if (loss_cfg.mood_loss_form == MoodLossForm::AsWritten &&
        variant.mood_supervision != MoodSupervision::None) {
      for (const auto& f : batch) {
        const auto fwd = forward(f, params, enc_cfg, loss_cfg.delta_norm, variant);
        if (((f.mood_target - fwd.m_pred).cwiseAbs().array() < 1e-2).any()) {
          near_kink = true;
          break;
        }
      }
    }
    if (near_kink) {
      attempt_seed = Rng::mix(attempt_seed, 0x5EED + attempt);
      continue;
    }

    const auto eval = batch_gradients(batch, params, enc_cfg, loss_cfg, variant);
    return finite_difference_check(batch, params, enc_cfg, loss_cfg, variant,
                                   eval.grad);
  }
  throw NumericError("gradient_check: could not find a kink-free batch");
}

}  // namespace moodkit
