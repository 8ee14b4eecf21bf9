#include "moodkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace moodkit {

ClassificationReport classification_report(std::span<const int> preds,
                                           std::span<const int> golds,
                                           int n_classes) {
  if (preds.size() != golds.size() || preds.empty()) {
    throw DataError("classification_report: prediction/gold length mismatch");
  }

  ClassificationReport rep;
  rep.n_classes = n_classes;
  rep.confusion = Eigen::MatrixXi::Zero(n_classes, n_classes);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (golds[i] < 0 || golds[i] >= n_classes || preds[i] < 0 || preds[i] >= n_classes) {
      throw DataError("classification_report: label out of range");
    }
    rep.confusion(golds[i], preds[i]) += 1;
  }

  rep.support = rep.confusion.rowwise().sum();
  rep.precision = Vec::Zero(n_classes);
  rep.recall = Vec::Zero(n_classes);
  rep.per_class_f1 = Vec::Zero(n_classes);

  for (int c = 0; c < n_classes; ++c) {
    const double tp = rep.confusion(c, c);
    const double pred_total = rep.confusion.col(c).sum();
    const double gold_total = rep.support[c];
    rep.precision[c] = pred_total > 0 ? tp / pred_total : 0.0;
    rep.recall[c] = gold_total > 0 ? tp / gold_total : 0.0;
    const double denom = rep.precision[c] + rep.recall[c];
    rep.per_class_f1[c] = denom > 0 ? 2.0 * rep.precision[c] * rep.recall[c] / denom : 0.0;
  }

  rep.macro_f1 = rep.per_class_f1.mean();
  const double total_support = rep.support.sum();
  rep.weighted_f1 =
      rep.per_class_f1.dot(rep.support.cast<double>()) / total_support;
  return rep;
}

namespace {

template <typename E>
ClassificationReport enum_report(std::span<const E> preds, std::span<const E> golds,
                                 int n_classes) {
  std::vector<int> p(preds.size()), g(golds.size());
  std::transform(preds.begin(), preds.end(), p.begin(),
                 [](E e) { return static_cast<int>(e); });
  std::transform(golds.begin(), golds.end(), g.begin(),
                 [](E e) { return static_cast<int>(e); });
  return classification_report(p, g, n_classes);
}

}  // namespace

ClassificationReport f1_report(std::span<const Emotion> preds,
                               std::span<const Emotion> golds) {
  return enum_report(preds, golds, kNumEmotions);
}

ClassificationReport mood_f1_report(std::span<const MoodState> preds,
                                    std::span<const MoodState> golds) {
  return enum_report(preds, golds, kNumMoods);
}

Vec average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  Vec ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[static_cast<Eigen::Index>(order[k])] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DataError("spearman: need two equal-length series of size >= 2");
  }
  const Vec rx = average_ranks(x);
  const Vec ry = average_ranks(y);
  const Vec cx = rx.array() - rx.mean();
  const Vec cy = ry.array() - ry.mean();
  const double sx = cx.norm();
  const double sy = cy.norm();
  if (sx == 0.0 || sy == 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return cx.dot(cy) / (sx * sy);
}

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericError("incomplete beta: continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || x < 0.0 || x > 1.0) {
    throw NumericError("incomplete beta: arguments out of domain");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw DataError("welch_t_test: each sample needs at least 2 values");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / na;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / nb;

  double va = 0.0, vb = 0.0;  // unbiased sample variances
  for (const double v : a) va += (v - ma) * (v - ma);
  for (const double v : b) vb += (v - mb) * (v - mb);
  va /= na - 1.0;
  vb /= nb - 1.0;

  const double sa = va / na;
  const double sb = vb / nb;
  if (sa + sb == 0.0) {
    throw DataError("welch_t_test: zero variance in both samples");
  }

  WelchResult res;
  res.t = (ma - mb) / std::sqrt(sa + sb);
  res.df = (sa + sb) * (sa + sb) /
           (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  // Two-sided p through the Student-t CDF identity with the regularized
  // incomplete beta.
  const double x = res.df / (res.df + res.t * res.t);
  res.p = regularized_incomplete_beta(res.df / 2.0, 0.5, x);
  return res;
}

}  // namespace moodkit
