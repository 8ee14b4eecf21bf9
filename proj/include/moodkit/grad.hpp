#pragma once

#include "moodkit/loss.hpp"
#include "moodkit/model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace moodkit {

struct LossConfig {
  double focal_alpha = 0.5;
  double focal_gamma = 2.0;
  MoodLossForm mood_loss_form = MoodLossForm::AsWritten;
  DeltaNorm delta_norm = DeltaNorm::Softmax;
};

// Joint loss of one sample (forward only).
LossBreakdown sample_loss(const SampleFeatures& f, const ModelParams& params,
                          const EncoderConfig& enc_cfg, const LossConfig& loss_cfg,
                          const VariantSpec& variant = VariantSpec::full());

struct BatchEval {
  LossBreakdown mean;  // losses and weights averaged over the batch
  Vec grad;            // d(mean total)/d(params.flatten())
};

// Analytic gradient of the mean joint loss over the batch, accumulated in
// fixed sample-index order. Throws NumericError (with the sample index) if a
// sample's loss is non-finite.
BatchEval batch_gradients(std::span<const SampleFeatures> batch,
                          const ModelParams& params, const EncoderConfig& enc_cfg,
                          const LossConfig& loss_cfg,
                          const VariantSpec& variant = VariantSpec::full());

struct GroupCheck {
  std::string group;
  double max_rel_err = 0.0;
};

// Central finite differences (h = h_scale * max(1, |theta|)) of the mean
// batch loss against a supplied analytic gradient; per-group worst relative
// error. Exposed with an injectable gradient so tests can feed a corrupted
// one and watch the check fail.
std::vector<GroupCheck> finite_difference_check(
    std::span<const SampleFeatures> batch, const ModelParams& params,
    const EncoderConfig& enc_cfg, const LossConfig& loss_cfg,
    const VariantSpec& variant, const Vec& analytic_grad,
    double h_scale = 1e-4);

// Random but feasible features for exercising the full graph; kink margins
// are enforced so |.|-loss subgradients stay away from discontinuities.
std::vector<SampleFeatures> make_gradcheck_batch(int n, const EncoderConfig& cfg,
                                                 std::uint64_t seed);

// End-to-end check of the analytic gradients on a seeded synthetic batch.
std::vector<GroupCheck> gradient_check(const EncoderConfig& enc_cfg,
                                       const LossConfig& loss_cfg,
                                       std::uint64_t seed,
                                       const VariantSpec& variant = VariantSpec::full());

}  // namespace moodkit
