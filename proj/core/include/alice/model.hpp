#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "alice/augment.hpp"
#include "alice/data.hpp"
#include "alice/loss.hpp"
#include "alice/rng.hpp"

namespace alice {

/// y = W x + b with W stored row-major (out x in).
struct AffineLayer {
  int in = 0;
  int out = 0;
  Vec w;
  Vec b;
};

/// Backbone MLP: rectifier after every hidden layer, linear final layer.
/// This is the only part of the model that survives base training; prototype
/// generation and evaluation consume an Extractor, never full ModelParams.
struct Extractor {
  std::vector<AffineLayer> layers;

  int input_dim() const { return layers.empty() ? 0 : layers.front().in; }
  int output_dim() const { return layers.empty() ? 0 : layers.back().out; }
};

/// Everything trained during the base session. The projection head and the
/// classifier rows are discarded once training finishes; only the extractor
/// is consumed downstream.
struct ModelParams {
  Extractor extractor;
  bool has_projection = true;
  AffineLayer proj_in;   // embedding -> hidden, rectified
  AffineLayer proj_out;  // hidden -> projection output
  std::vector<Vec> classifier;  // one unit-direction-free row per training label

  /// Width of the vector fed to the cosine classifier.
  int classifier_input_dim() const {
    return has_projection ? proj_out.out : extractor.output_dim();
  }
};

/// Layer widths; input dimension comes from the data.
struct ModelShape {
  std::vector<int> extractor_hidden;
  int embedding_dim = 16;
  int projection_hidden = 2048;
  int projection_dim = 0;  // 0 -> embedding_dim
};

enum class LossKind { Angular, CrossEntropy };

struct TrainConfig {
  int epochs = 30;
  int batch_size = 64;
  double learning_rate = 0.05;
  double momentum = 0.9;
  LossConfig loss;
  LossKind loss_kind = LossKind::Angular;
  bool class_aug = true;
  double mix_fraction = 0.5;
  bool two_view_aug = true;
  ViewTransformSpec view;
  bool use_projection = true;
  ModelShape shape;
  std::uint64_t seed = 1;
};

void validate(const TrainConfig& cfg);

/// Fan-in uniform initialization: weights, biases and classifier rows all
/// drawn from +-1/sqrt(fan_in).
ModelParams init_params(const ModelShape& shape, int input_dim, int num_labels,
                        bool use_projection, Rng& rng);

/// Backbone output for one payload; deterministic, pure.
Vec extract_feature(const Extractor& extractor, const Payload& x);
Vec extract_feature(const ModelParams& params, const Payload& x);

/// Two-layer rectified projection of a backbone feature.
Vec project(const ModelParams& params, const Vec& f);

/// Gradients and momentum buffers share the parameter layout.
using ModelGrads = ModelParams;

ModelGrads zeros_like(const ModelParams& params);
std::size_t parameter_count(const ModelParams& params);

/// Visits every parameter array in a fixed order (per-layer w then b, then
/// classifier rows). Fixed order keeps reductions and updates deterministic.
void for_each_array(ModelParams& params, const std::function<void(Vec&)>& fn);
void for_each_array(ModelParams& a, ModelParams& b, ModelParams& c,
                    const std::function<void(Vec&, Vec&, Vec&)>& fn);

struct LossAndGrads {
  double loss = 0.0;
  ModelGrads grads;
};

/// Loss of a fixed pair of view batches, averaged over both views, with
/// exact analytic gradients for every parameter. The chain runs through the
/// extractor, the projection head, the feature/weight normalization inside
/// the cosine logits, and the margin loss.
LossAndGrads two_view_batch_loss(const ModelParams& params, const std::vector<Payload>& views_a,
                                 const std::vector<Payload>& views_b,
                                 const std::vector<int>& targets, const LossConfig& loss_cfg);

/// Draws the two stochastic views of every batch sample (identity views when
/// two-view augmentation is off) and evaluates two_view_batch_loss.
LossAndGrads forward_loss(const ModelParams& params, const std::vector<Sample>& batch,
                          const TrainConfig& cfg, Rng& rng);

/// v <- momentum * v + g;  p <- p - lr * v
void sgd_step(ModelParams& params, const ModelGrads& grads, ModelGrads& velocity, double lr,
              double momentum);

struct TrainResult {
  ModelParams params;
  std::vector<double> epoch_loss;  // mean step loss per epoch
};

/// Base-session training: class augmentation (when enabled), two views per
/// sample, margin loss, SGD with momentum. Bit-reproducible per seed.
/// Labels must form {0..C-1} with C >= 2.
TrainResult train_base(const std::vector<Sample>& data, const TrainConfig& cfg);

}  // namespace alice
