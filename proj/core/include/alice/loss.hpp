#pragma once

#include <cstddef>
#include <vector>

#include "alice/core_math.hpp"

namespace alice {

/// Scale and margin of the additive-cosine-margin (CosFace-style) loss.
/// Held constant for a whole run.
struct LossConfig {
  double scale = 30.0;   // s > 0
  double margin = 0.4;   // 0 <= m < 1
};

/// Throws InvalidConfig unless s > 0 and 0 <= m < 1.
void validate(const LossConfig& cfg);

/// Per-class cosine similarities cos(theta_i), each in [-1, 1].
using CosineLogits = Vec;

/// cos(theta_i) between f and every classifier row; bias fixed at 0 and both
/// sides normalized internally, so input magnitudes are irrelevant.
CosineLogits cosine_logits(const Vec& f, const std::vector<Vec>& weights);

/// Plain softmax cross-entropy over raw cosines: -log_softmax(logits)[target].
double ce_cosine_loss(const CosineLogits& logits, std::size_t target);

/// Margin loss: the target cosine is reduced by m before scaling by s, so
///   L = -log( e^{s(cos_t - m)} / (e^{s(cos_t - m)} + sum_{i!=t} e^{s cos_i}) )
/// evaluated in log-sum-exp stabilized form (s = 30 overflows the naive
/// exponentials). With m = 0, s = 1 this reduces to ce_cosine_loss.
double angular_penalty_loss(const CosineLogits& logits, std::size_t target,
                            const LossConfig& cfg);

/// dL/dcos_i = s * (p_i - [i == target]) where p is the softmax of the
/// margin-adjusted scaled logits. Entries sum to zero.
Vec angular_penalty_grad(const CosineLogits& logits, std::size_t target,
                         const LossConfig& cfg);

/// Mean angular penalty loss over a batch of raw feature vectors.
double batch_loss(const std::vector<Vec>& features, const std::vector<std::size_t>& targets,
                  const std::vector<Vec>& weights, const LossConfig& cfg);

}  // namespace alice
