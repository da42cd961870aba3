// Microbenchmarks for the hot paths of the training and evaluation loops.

#include <benchmark/benchmark.h>

#include "alice/loss.hpp"
#include "alice/model.hpp"
#include "alice/prototype.hpp"

namespace {

using alice::Payload;
using alice::Rng;
using alice::Vec;

Vec random_vec(Rng& rng, int dim) {
  Vec v(static_cast<std::size_t>(dim));
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

void BM_cosine_logits(benchmark::State& state) {
  const int dim = 64;
  const int classes = static_cast<int>(state.range(0));
  Rng rng(1);
  Vec f = random_vec(rng, dim);
  std::vector<Vec> weights;
  for (int c = 0; c < classes; ++c) weights.push_back(random_vec(rng, dim));
  for (auto _ : state) {
    benchmark::DoNotOptimize(alice::cosine_logits(f, weights));
  }
}
BENCHMARK(BM_cosine_logits)->Arg(60)->Arg(1830);

void BM_angular_penalty_loss_and_grad(benchmark::State& state) {
  const int classes = static_cast<int>(state.range(0));
  Rng rng(2);
  alice::CosineLogits cosines(static_cast<std::size_t>(classes));
  for (double& c : cosines) c = rng.uniform(-1.0, 1.0);
  const alice::LossConfig cfg{30.0, 0.4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(alice::angular_penalty_loss(cosines, 0, cfg));
    benchmark::DoNotOptimize(alice::angular_penalty_grad(cosines, 0, cfg));
  }
}
BENCHMARK(BM_angular_penalty_loss_and_grad)->Arg(60)->Arg(1830);

void BM_extract_feature(benchmark::State& state) {
  alice::ModelShape shape;
  shape.extractor_hidden = {64};
  shape.embedding_dim = 32;
  Rng rng(3);
  const alice::ModelParams params = alice::init_params(shape, 32, 10, true, rng);
  const Payload x = Payload::vector(random_vec(rng, 32));
  for (auto _ : state) {
    benchmark::DoNotOptimize(alice::extract_feature(params, x));
  }
}
BENCHMARK(BM_extract_feature);

void BM_two_view_batch_loss(benchmark::State& state) {
  alice::ModelShape shape;
  shape.extractor_hidden = {32};
  shape.embedding_dim = 16;
  shape.projection_hidden = 32;
  Rng rng(4);
  const alice::ModelParams params = alice::init_params(shape, 16, 55, true, rng);
  std::vector<Payload> va, vb;
  std::vector<int> targets;
  for (int i = 0; i < 64; ++i) {
    va.push_back(Payload::vector(random_vec(rng, 16)));
    vb.push_back(Payload::vector(random_vec(rng, 16)));
    targets.push_back(static_cast<int>(rng.uniform_index(55)));
  }
  const alice::LossConfig cfg{30.0, 0.4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(alice::two_view_batch_loss(params, va, vb, targets, cfg));
  }
}
BENCHMARK(BM_two_view_batch_loss);

void BM_ncm_classify(benchmark::State& state) {
  const int classes = static_cast<int>(state.range(0));
  Rng rng(5);
  alice::PrototypeStore store;
  for (int c = 0; c < classes; ++c) {
    Vec p = random_vec(rng, 32);
    p[0] += 1.5;
    store.by_class[c] = {alice::l2_normalize(p), {c}, 1};
  }
  const Vec f = random_vec(rng, 32);
  for (auto _ : state) {
    benchmark::DoNotOptimize(alice::ncm_classify(store, f));
  }
}
BENCHMARK(BM_ncm_classify)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
