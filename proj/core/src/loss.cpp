#include "alice/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace alice {

namespace {

void check_target(std::size_t target, std::size_t classes) {
  if (target >= classes) {
    throw Error(ErrorCode::BadTarget, "target " + std::to_string(target) + " out of range for " +
                                          std::to_string(classes) + " classes");
  }
}

// s * cos_i, with the margin subtracted from the target entry first.
Vec adjusted_logits(const CosineLogits& logits, std::size_t target, const LossConfig& cfg) {
  Vec adj(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    adj[i] = cfg.scale * (i == target ? logits[i] - cfg.margin : logits[i]);
  }
  return adj;
}

}  // namespace

void validate(const LossConfig& cfg) {
  if (!(cfg.scale > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "loss scale must be > 0, got " + std::to_string(cfg.scale));
  }
  if (!(cfg.margin >= 0.0 && cfg.margin < 1.0)) {
    throw Error(ErrorCode::InvalidConfig,
                "loss margin must be in [0, 1), got " + std::to_string(cfg.margin));
  }
}

CosineLogits cosine_logits(const Vec& f, const std::vector<Vec>& weights) {
  CosineLogits out(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out[i] = cosine_similarity(f, weights[i]);
  }
  return out;
}

double ce_cosine_loss(const CosineLogits& logits, std::size_t target) {
  check_target(target, logits.size());
  return -log_softmax(logits)[target];
}

double angular_penalty_loss(const CosineLogits& logits, std::size_t target,
                            const LossConfig& cfg) {
  check_target(target, logits.size());
  validate(cfg);
  const Vec adj = adjusted_logits(logits, target, cfg);

  // Anchor on the target entry: loss = log(1 + sum_{i != t} e^{adj_i - adj_t}).
  // log1p keeps full precision when the target dominates and the loss is
  // tiny; the max-shifted fallback covers exponent gaps that would overflow.
  double max_other = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (i != target) max_other = std::max(max_other, adj[i]);
  }
  if (adj.size() == 1) return 0.0;

  if (max_other - adj[target] < 700.0) {
    double rest = 0.0;
    for (std::size_t i = 0; i < adj.size(); ++i) {
      if (i != target) rest += std::exp(adj[i] - adj[target]);
    }
    return std::log1p(rest);
  }
  double sum = std::exp(adj[target] - max_other);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (i != target) sum += std::exp(adj[i] - max_other);
  }
  return (max_other - adj[target]) + std::log(sum);
}

Vec angular_penalty_grad(const CosineLogits& logits, std::size_t target, const LossConfig& cfg) {
  check_target(target, logits.size());
  validate(cfg);
  const Vec logp = log_softmax(adjusted_logits(logits, target, cfg));
  Vec grad(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    grad[i] = cfg.scale * (std::exp(logp[i]) - (i == target ? 1.0 : 0.0));
  }
  return grad;
}

double batch_loss(const std::vector<Vec>& features, const std::vector<std::size_t>& targets,
                  const std::vector<Vec>& weights, const LossConfig& cfg) {
  if (features.empty()) throw Error(ErrorCode::EmptyBatch, "batch_loss over empty batch");
  if (features.size() != targets.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "batch_loss: " + std::to_string(features.size()) + " features vs " +
                    std::to_string(targets.size()) + " targets");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < features.size(); ++j) {
    total += angular_penalty_loss(cosine_logits(features[j], weights), targets[j], cfg);
  }
  return total / static_cast<double>(features.size());
}

}  // namespace alice
