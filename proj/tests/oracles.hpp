#pragma once

// Test-only reference implementations, independent of the library code they
// check: direct long-double evaluation with no log-sum-exp shifting, no
// shared helpers, and their own cosine/ranking logic. Expected values frozen
// into the unit tests were produced by these.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline long double log_softmax_at(const std::vector<long double>& logits, std::size_t index) {
  long double sum = 0.0L;
  for (long double x : logits) sum += std::exp(x);
  return logits[index] - std::log(sum);
}

// Direct evaluation of the margin loss:
//   -log( e^{s(c_t - m)} / (e^{s(c_t - m)} + sum_{i != t} e^{s c_i}) )
inline long double angular_loss(const std::vector<long double>& cosines, std::size_t target,
                                long double s, long double m) {
  const long double num = std::exp(s * (cosines[target] - m));
  long double den = num;
  for (std::size_t i = 0; i < cosines.size(); ++i) {
    if (i != target) den += std::exp(s * cosines[i]);
  }
  return -std::log(num / den);
}

inline long double ce_loss(const std::vector<long double>& cosines, std::size_t target) {
  return angular_loss(cosines, target, 1.0L, 0.0L);
}

inline long double cosine(const std::vector<long double>& a, const std::vector<long double>& b) {
  long double dot = 0.0L, na = 0.0L, nb = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Exhaustive top-k by cosine to mean; ties broken by ascending id. The
// returned order is (cosine desc, id asc).
inline std::vector<std::int64_t> top_k_by_cosine(
    const std::vector<std::pair<std::int64_t, std::vector<long double>>>& features,
    const std::vector<long double>& mean, int k) {
  std::vector<std::pair<long double, std::int64_t>> ranked;
  for (const auto& [id, f] : features) ranked.emplace_back(cosine(f, mean), id);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::int64_t> out;
  for (int i = 0; i < k; ++i) out.push_back(ranked[static_cast<std::size_t>(i)].second);
  return out;
}

// |a - b| relative to the larger magnitude; falls back to the absolute
// difference when both are tiny.
inline double rel_err(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  if (scale < 1e-10) return std::fabs(a - b);
  return std::fabs(a - b) / scale;
}

}  // namespace oracle
