#include "moodkit/loss.hpp"

#include "moodkit/numeric.hpp"

#include <cmath>

namespace moodkit {

std::string_view to_string(MoodLossForm f) {
  return f == MoodLossForm::AsWritten ? "as-written" : "mse";
}

double mood_loss(const Vad& target, const Vad& pred, MoodLossForm form) {
  const Vad diff = target - pred;
  if (form == MoodLossForm::AsWritten) {
    return diff.cwiseAbs().sum();
  }
  return diff.squaredNorm() / 3.0;
}

double focal_loss(const Vec7& probs, Emotion true_class, double alpha,
                  double gamma) {
  const double p = probs[static_cast<int>(true_class)];
  const double log_p = std::log(std::max(p, kFocalProbFloor));
  const double one_minus_p = std::max(1.0 - p, 0.0);
  const double modulator = gamma == 0.0 ? 1.0 : std::pow(one_minus_p, gamma);
  return -alpha * modulator * log_p;
}

LossBreakdown joint_loss(double mood, double emo,
                         const Eigen::Vector2d& loss_logits) {
  const Eigen::Vector2d w = softmax(loss_logits);
  LossBreakdown out;
  out.mood_loss = mood;
  out.emo_loss = emo;
  out.w1 = w[0];
  out.w2 = w[1];
  out.total = w[0] * mood + w[1] * emo;
  return out;
}

}  // namespace moodkit
