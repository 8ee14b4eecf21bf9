#pragma once

#include "moodkit/types.hpp"

#include <cmath>
#include <cstdint>
#include <string_view>

namespace moodkit {

// Shift-invariant softmax (max subtracted before exponentiation).
template <typename Derived>
auto softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Plain = typename Derived::PlainObject;
  Plain out = logits;
  if (out.size() == 0) return out;
  const double m = out.maxCoeff();
  out = (out.array() - m).exp();
  out /= out.sum();
  return out;
}

inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// FNV-1a, 64-bit. Stable across platforms; std::hash is not.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace moodkit
