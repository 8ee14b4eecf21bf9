#pragma once

#include "moodkit/affect.hpp"
#include "moodkit/types.hpp"

namespace moodkit {

// AsWritten is a sum of absolute errors; Mse is the mean of squares.
enum class MoodLossForm { AsWritten, Mse };

std::string_view to_string(MoodLossForm f);

inline constexpr double kFocalProbFloor = 1e-12;

double mood_loss(const Vad& target, const Vad& pred, MoodLossForm form);

// -alpha * (1 - p_t)^gamma * log(p_t), p_t floored at kFocalProbFloor inside
// the log. Reduces to cross-entropy at gamma=0, alpha=1.
double focal_loss(const Vec7& probs, Emotion true_class, double alpha, double gamma);

struct LossBreakdown {
  double mood_loss = 0.0;
  double emo_loss = 0.0;
  double w1 = 0.5;
  double w2 = 0.5;
  double total = 0.0;
};

// (w1, w2) = softmax(loss_logits); total = w1*mood + w2*emo.
LossBreakdown joint_loss(double mood, double emo, const Eigen::Vector2d& loss_logits);

}  // namespace moodkit
