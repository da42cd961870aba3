#include "alice/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace alice {

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dot: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

Vec l2_normalize(const Vec& v) {
  const double n = norm(v);
  if (n < kZeroVectorEps) {
    throw Error(ErrorCode::ZeroVector, "cannot normalize vector with norm " + std::to_string(n));
  }
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
  return out;
}

double cosine_similarity(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cosine_similarity: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  const double na = norm(a);
  const double nb = norm(b);
  if (na < kZeroVectorEps || nb < kZeroVectorEps) {
    throw Error(ErrorCode::ZeroVector, "cosine_similarity of (near-)zero vector");
  }
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

Vec log_softmax(const Vec& logits) {
  if (logits.empty()) throw Error(ErrorCode::EmptyInput, "log_softmax of empty vector");
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double x : logits) sum += std::exp(x - m);
  const double lse = m + std::log(sum);
  Vec out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

}  // namespace alice
