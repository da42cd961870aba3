#pragma once

#include <vector>

#include "alice/error.hpp"

namespace alice {

/// Dense real vector. Feature embeddings, classifier weight rows and
/// prototypes are all plain Vecs; all numeric work is in 64-bit floats.
using Vec = std::vector<double>;

/// Norms below this are treated as zero vectors.
inline constexpr double kZeroVectorEps = 1e-12;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& v);

/// Unit-norm copy of v. Throws ZeroVector when ||v|| < 1e-12.
Vec l2_normalize(const Vec& v);

/// <a,b> / (||a|| ||b||), clamped to [-1, 1] to absorb rounding.
/// Throws DimensionMismatch / ZeroVector.
double cosine_similarity(const Vec& a, const Vec& b);

/// Max-shifted log-sum-exp form; exp of the result sums to 1.
/// Throws EmptyInput.
Vec log_softmax(const Vec& logits);

}  // namespace alice
