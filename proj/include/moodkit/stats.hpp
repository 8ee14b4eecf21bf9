#pragma once

#include "moodkit/affect.hpp"
#include "moodkit/types.hpp"

#include <span>
#include <vector>

namespace moodkit {

// Per-class precision/recall/F1 with 0 substituted when a denominator is 0.
// Macro averages over all n_classes (absent classes count as 0); weighted
// averages by gold support. Confusion rows are gold, columns predicted.
struct ClassificationReport {
  int n_classes = 0;
  Vec precision;
  Vec recall;
  Vec per_class_f1;
  Eigen::VectorXi support;
  Eigen::MatrixXi confusion;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
};

ClassificationReport classification_report(std::span<const int> preds,
                                           std::span<const int> golds,
                                           int n_classes);

ClassificationReport f1_report(std::span<const Emotion> preds,
                               std::span<const Emotion> golds);

ClassificationReport mood_f1_report(std::span<const MoodState> preds,
                                    std::span<const MoodState> golds);

// Average ranks (ties share the mean rank), 1-based.
Vec average_ranks(std::span<const double> values);

// Spearman rank correlation with average-rank ties. Returns NaN when either
// series is constant (correlation undefined).
double spearman(std::span<const double> x, std::span<const double> y);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
// Absolute error well under 1e-8 in the parameter ranges used here.
double regularized_incomplete_beta(double a, double b, double x);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
// freedom. Throws DataError on lists shorter than 2 or when both samples
// have zero variance.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace moodkit
