#include "alice/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace alice {

void validate(const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw Error(ErrorCode::InvalidConfig, "epochs must be >= 1");
  if (cfg.batch_size < 1) throw Error(ErrorCode::InvalidConfig, "batch_size must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw Error(ErrorCode::InvalidConfig, "learning_rate must be > 0");
  if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "momentum must be in [0, 1)");
  }
  if (!(cfg.mix_fraction >= 0.0 && cfg.mix_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "mix_fraction must be in [0, 1]");
  }
  if (cfg.shape.embedding_dim < 1) throw Error(ErrorCode::InvalidConfig, "embedding_dim must be >= 1");
  if (cfg.use_projection && cfg.shape.projection_hidden < 1) {
    throw Error(ErrorCode::InvalidConfig, "projection_hidden must be >= 1");
  }
  for (int h : cfg.shape.extractor_hidden) {
    if (h < 1) throw Error(ErrorCode::InvalidConfig, "extractor hidden widths must be >= 1");
  }
  validate(cfg.loss);
  validate(cfg.view);
}

namespace {

AffineLayer init_affine(int in, int out, Rng& rng) {
  AffineLayer layer;
  layer.in = in;
  layer.out = out;
  layer.w.resize(static_cast<std::size_t>(in) * out);
  layer.b.resize(out);
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  for (double& v : layer.w) v = rng.uniform(-bound, bound);
  // Nonzero bias draws keep a dead rectified layer from collapsing the
  // classifier input to the exact zero vector.
  for (double& v : layer.b) v = rng.uniform(-bound, bound);
  return layer;
}

// z = W x + b
Vec affine_forward(const AffineLayer& layer, const Vec& x) {
  Vec z(layer.out);
  for (int o = 0; o < layer.out; ++o) {
    double s = layer.b[o];
    const double* row = layer.w.data() + static_cast<std::size_t>(o) * layer.in;
    for (int i = 0; i < layer.in; ++i) s += row[i] * x[i];
    z[o] = s;
  }
  return z;
}

// Accumulates dW += weight * dz x^T, db += weight * dz and returns dx.
Vec affine_backward(const AffineLayer& layer, const Vec& x, const Vec& dz, double weight,
                    AffineLayer& grad) {
  Vec dx(layer.in, 0.0);
  for (int o = 0; o < layer.out; ++o) {
    const double g = dz[o];
    const double wg = weight * g;
    grad.b[o] += wg;
    double* grow = grad.w.data() + static_cast<std::size_t>(o) * layer.in;
    const double* row = layer.w.data() + static_cast<std::size_t>(o) * layer.in;
    for (int i = 0; i < layer.in; ++i) {
      grow[i] += wg * x[i];
      dx[i] += row[i] * g;
    }
  }
  return dx;
}

Vec relu(const Vec& z) {
  Vec a(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) a[i] = z[i] > 0.0 ? z[i] : 0.0;
  return a;
}

void relu_backward_inplace(const Vec& z, Vec& dz) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] <= 0.0) dz[i] = 0.0;
  }
}

const Vec& flatten(const Payload& x, int expected_dim) {
  if (static_cast<int>(x.values.size()) != expected_dim) {
    throw Error(ErrorCode::ShapeMismatch,
                "payload size " + std::to_string(x.values.size()) + " does not match model input " +
                    std::to_string(expected_dim));
  }
  return x.values;
}

struct ForwardCache {
  std::vector<Vec> extractor_pre;   // z per extractor layer
  std::vector<Vec> extractor_act;   // input + activation per layer
  Vec proj_pre;                     // projection hidden pre-activation
  Vec proj_hidden;
  Vec classified;                   // vector fed to the cosine classifier
};

Vec forward_sample(const ModelParams& params, const Vec& x, ForwardCache* cache) {
  Vec a = x;
  const std::size_t n = params.extractor.layers.size();
  if (cache) cache->extractor_act.push_back(a);
  for (std::size_t l = 0; l < n; ++l) {
    Vec z = affine_forward(params.extractor.layers[l], a);
    a = (l + 1 < n) ? relu(z) : z;
    if (cache) {
      cache->extractor_pre.push_back(std::move(z));
      cache->extractor_act.push_back(a);
    }
  }
  if (!params.has_projection) {
    if (cache) cache->classified = a;
    return a;
  }
  Vec zp = affine_forward(params.proj_in, a);
  Vec hp = relu(zp);
  Vec g = affine_forward(params.proj_out, hp);
  if (cache) {
    cache->proj_pre = std::move(zp);
    cache->proj_hidden = hp;
    cache->classified = g;
  }
  return g;
}

// Per-sample loss plus weight-scaled gradient accumulation through the whole
// chain: extractor -> projection -> normalization -> margin loss.
double sample_loss_backward(const ModelParams& params, const Payload& x, int target,
                            const LossConfig& loss_cfg, double weight, ModelGrads& acc) {
  const int num_labels = static_cast<int>(params.classifier.size());
  if (target < 0 || target >= num_labels) {
    throw Error(ErrorCode::BadTarget, "target " + std::to_string(target) + " out of range for " +
                                          std::to_string(num_labels) + " classifier rows");
  }

  ForwardCache cache;
  const Vec& input = flatten(x, params.extractor.input_dim());
  forward_sample(params, input, &cache);
  const Vec& g = cache.classified;

  const double g_norm = norm(g);
  if (g_norm < kZeroVectorEps) {
    throw Error(ErrorCode::ZeroVector, "classifier input collapsed to zero vector");
  }

  CosineLogits cosines(num_labels);
  Vec row_norms(num_labels);
  for (int i = 0; i < num_labels; ++i) {
    const Vec& w = params.classifier[i];
    row_norms[i] = norm(w);
    if (row_norms[i] < kZeroVectorEps) {
      throw Error(ErrorCode::ZeroVector, "classifier row " + std::to_string(i) + " is zero");
    }
    cosines[i] = std::clamp(dot(g, w) / (g_norm * row_norms[i]), -1.0, 1.0);
  }

  const double loss = angular_penalty_loss(cosines, static_cast<std::size_t>(target), loss_cfg);
  const Vec dcos = angular_penalty_grad(cosines, static_cast<std::size_t>(target), loss_cfg);

  // cos_i = <g, w_i> / (|g| |w_i|):
  //   d cos_i / dg   = (w_i/|w_i| - cos_i g/|g|) / |g|
  //   d cos_i / dw_i = (g/|g| - cos_i w_i/|w_i|) / |w_i|
  Vec dg(g.size(), 0.0);
  for (int i = 0; i < num_labels; ++i) {
    const Vec& w = params.classifier[i];
    const double cross = dcos[i] / (g_norm * row_norms[i]);
    const double self_g = dcos[i] * cosines[i] / (g_norm * g_norm);
    const double self_w = dcos[i] * cosines[i] / (row_norms[i] * row_norms[i]);
    Vec& wgrad = acc.classifier[i];
    for (std::size_t k = 0; k < g.size(); ++k) {
      dg[k] += cross * w[k] - self_g * g[k];
      wgrad[k] += weight * (cross * g[k] - self_w * w[k]);
    }
  }

  Vec dfeat;
  if (params.has_projection) {
    Vec dh = affine_backward(params.proj_out, cache.proj_hidden, dg, weight, acc.proj_out);
    relu_backward_inplace(cache.proj_pre, dh);
    dfeat = affine_backward(params.proj_in, cache.extractor_act.back(), dh, weight, acc.proj_in);
  } else {
    dfeat = dg;
  }

  const std::size_t n = params.extractor.layers.size();
  Vec dz = std::move(dfeat);
  for (std::size_t l = n; l-- > 0;) {
    if (l + 1 < n) relu_backward_inplace(cache.extractor_pre[l], dz);
    dz = affine_backward(params.extractor.layers[l], cache.extractor_act[l], dz, weight,
                         acc.extractor.layers[l]);
  }

  return loss;
}

LossConfig effective_loss(const TrainConfig& cfg) {
  // Cross-entropy over cosines is the margin loss at s = 1, m = 0.
  return cfg.loss_kind == LossKind::CrossEntropy ? LossConfig{1.0, 0.0} : cfg.loss;
}

}  // namespace

ModelParams init_params(const ModelShape& shape, int input_dim, int num_labels,
                        bool use_projection, Rng& rng) {
  if (input_dim < 1) throw Error(ErrorCode::InvalidConfig, "input_dim must be >= 1");
  if (num_labels < 1) throw Error(ErrorCode::InvalidConfig, "num_labels must be >= 1");

  ModelParams params;
  int in = input_dim;
  for (int h : shape.extractor_hidden) {
    params.extractor.layers.push_back(init_affine(in, h, rng));
    in = h;
  }
  params.extractor.layers.push_back(init_affine(in, shape.embedding_dim, rng));

  params.has_projection = use_projection;
  const int proj_dim = shape.projection_dim > 0 ? shape.projection_dim : shape.embedding_dim;
  if (use_projection) {
    params.proj_in = init_affine(shape.embedding_dim, shape.projection_hidden, rng);
    params.proj_out = init_affine(shape.projection_hidden, proj_dim, rng);
  }

  const int cls_dim = use_projection ? proj_dim : shape.embedding_dim;
  const double bound = 1.0 / std::sqrt(static_cast<double>(cls_dim));
  params.classifier.resize(num_labels);
  for (Vec& row : params.classifier) {
    row.resize(cls_dim);
    for (double& v : row) v = rng.uniform(-bound, bound);
  }
  return params;
}

Vec extract_feature(const Extractor& extractor, const Payload& x) {
  if (extractor.layers.empty()) throw Error(ErrorCode::InvalidConfig, "extractor has no layers");
  Vec a = flatten(x, extractor.input_dim());
  const std::size_t n = extractor.layers.size();
  for (std::size_t l = 0; l < n; ++l) {
    Vec z = affine_forward(extractor.layers[l], a);
    a = (l + 1 < n) ? relu(z) : std::move(z);
  }
  return a;
}

Vec extract_feature(const ModelParams& params, const Payload& x) {
  return extract_feature(params.extractor, x);
}

Vec project(const ModelParams& params, const Vec& f) {
  if (!params.has_projection) {
    throw Error(ErrorCode::InvalidConfig, "model has no projection head");
  }
  if (static_cast<int>(f.size()) != params.proj_in.in) {
    throw Error(ErrorCode::ShapeMismatch,
                "feature size " + std::to_string(f.size()) + " does not match projection input " +
                    std::to_string(params.proj_in.in));
  }
  return affine_forward(params.proj_out, relu(affine_forward(params.proj_in, f)));
}

ModelGrads zeros_like(const ModelParams& params) {
  ModelGrads z = params;
  for_each_array(z, [](Vec& v) { std::fill(v.begin(), v.end(), 0.0); });
  return z;
}

std::size_t parameter_count(const ModelParams& params) {
  std::size_t n = 0;
  for_each_array(const_cast<ModelParams&>(params), [&n](Vec& v) { n += v.size(); });
  return n;
}

void for_each_array(ModelParams& params, const std::function<void(Vec&)>& fn) {
  for (AffineLayer& layer : params.extractor.layers) {
    fn(layer.w);
    fn(layer.b);
  }
  if (params.has_projection) {
    fn(params.proj_in.w);
    fn(params.proj_in.b);
    fn(params.proj_out.w);
    fn(params.proj_out.b);
  }
  for (Vec& row : params.classifier) fn(row);
}

void for_each_array(ModelParams& a, ModelParams& b, ModelParams& c,
                    const std::function<void(Vec&, Vec&, Vec&)>& fn) {
  std::vector<Vec*> pa, pb, pc;
  for_each_array(a, [&pa](Vec& v) { pa.push_back(&v); });
  for_each_array(b, [&pb](Vec& v) { pb.push_back(&v); });
  for_each_array(c, [&pc](Vec& v) { pc.push_back(&v); });
  if (pa.size() != pb.size() || pa.size() != pc.size()) {
    throw Error(ErrorCode::ShapeMismatch, "parameter layouts differ");
  }
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i]->size() != pb[i]->size() || pa[i]->size() != pc[i]->size()) {
      throw Error(ErrorCode::ShapeMismatch, "parameter array sizes differ");
    }
    fn(*pa[i], *pb[i], *pc[i]);
  }
}

LossAndGrads two_view_batch_loss(const ModelParams& params, const std::vector<Payload>& views_a,
                                 const std::vector<Payload>& views_b,
                                 const std::vector<int>& targets, const LossConfig& loss_cfg) {
  if (views_a.empty()) throw Error(ErrorCode::EmptyBatch, "empty view batch");
  if (views_a.size() != views_b.size() || views_a.size() != targets.size()) {
    throw Error(ErrorCode::DimensionMismatch, "view batches and targets must have equal length");
  }

  LossAndGrads out;
  out.grads = zeros_like(params);
  const double weight = 1.0 / (2.0 * static_cast<double>(views_a.size()));
  double total = 0.0;
  for (std::size_t j = 0; j < views_a.size(); ++j) {
    total += sample_loss_backward(params, views_a[j], targets[j], loss_cfg, weight, out.grads);
    total += sample_loss_backward(params, views_b[j], targets[j], loss_cfg, weight, out.grads);
  }
  out.loss = total * weight;
  return out;
}

LossAndGrads forward_loss(const ModelParams& params, const std::vector<Sample>& batch,
                          const TrainConfig& cfg, Rng& rng) {
  if (batch.empty()) throw Error(ErrorCode::EmptyBatch, "forward_loss over empty batch");

  std::vector<Payload> views_a, views_b;
  std::vector<int> targets;
  views_a.reserve(batch.size());
  views_b.reserve(batch.size());
  targets.reserve(batch.size());
  for (const Sample& s : batch) {
    if (cfg.two_view_aug) {
      auto [a, b] = two_view(s.payload, cfg.view, rng);
      views_a.push_back(std::move(a));
      views_b.push_back(std::move(b));
    } else {
      views_a.push_back(s.payload);
      views_b.push_back(s.payload);
    }
    targets.push_back(s.label);
  }
  return two_view_batch_loss(params, views_a, views_b, targets, effective_loss(cfg));
}

void sgd_step(ModelParams& params, const ModelGrads& grads, ModelGrads& velocity, double lr,
              double momentum) {
  for_each_array(params, const_cast<ModelGrads&>(grads), velocity,
                 [lr, momentum](Vec& p, Vec& g, Vec& v) {
                   for (std::size_t i = 0; i < p.size(); ++i) {
                     v[i] = momentum * v[i] + g[i];
                     p[i] -= lr * v[i];
                   }
                 });
}

TrainResult train_base(const std::vector<Sample>& data, const TrainConfig& cfg) {
  validate(cfg);
  if (data.empty()) throw Error(ErrorCode::EmptyDataset, "no training data");

  std::set<int> labels;
  for (const Sample& s : data) labels.insert(s.label);
  const int num_classes = static_cast<int>(labels.size());
  if (num_classes < 2) {
    throw Error(ErrorCode::InsufficientClasses,
                "base training needs >= 2 classes, got " + std::to_string(num_classes));
  }
  if (*labels.begin() != 0 || *labels.rbegin() != num_classes - 1) {
    throw Error(ErrorCode::NonContiguousLabels, "training labels must form {0..C-1}");
  }
  const int input_dim = static_cast<int>(data.front().payload.size());
  for (const Sample& s : data) {
    if (static_cast<int>(s.payload.size()) != input_dim) {
      throw Error(ErrorCode::ShapeMismatch, "training payload sizes differ");
    }
  }

  const AugmentedLabelSpace space = build_augmented_label_space(num_classes);
  const int num_labels = cfg.class_aug ? space.total_labels() : num_classes;
  const double mix = cfg.class_aug ? cfg.mix_fraction : 0.0;

  Rng rng(cfg.seed);
  Rng init_rng = rng.fork();
  Rng train_rng = rng.fork();

  TrainResult result;
  result.params = init_params(cfg.shape, input_dim, num_labels, cfg.use_projection, init_rng);
  ModelGrads velocity = zeros_like(result.params);

  const std::size_t steps =
      std::max<std::size_t>(1, data.size() / static_cast<std::size_t>(cfg.batch_size));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_total = 0.0;
    for (std::size_t step = 0; step < steps; ++step) {
      const std::vector<Sample> batch = sample_class_augmented_batch(
          data, space, static_cast<std::size_t>(cfg.batch_size), mix, train_rng);
      LossAndGrads lg = forward_loss(result.params, batch, cfg, train_rng);
      sgd_step(result.params, lg.grads, velocity, cfg.learning_rate, cfg.momentum);
      epoch_total += lg.loss;
    }
    result.epoch_loss.push_back(epoch_total / static_cast<double>(steps));
  }
  return result;
}

}  // namespace alice
