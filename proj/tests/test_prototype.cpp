#include <doctest.h>

#include <cmath>

#include "alice/prototype.hpp"
#include "oracles.hpp"

using alice::Error;
using alice::ErrorCode;
using alice::Extractor;
using alice::Payload;
using alice::PrototypeStore;
using alice::Rng;
using alice::Sample;
using alice::Vec;

namespace {

// Identity extractor: features equal payloads.
Extractor identity_extractor(int dim) {
  alice::AffineLayer layer;
  layer.in = dim;
  layer.out = dim;
  layer.w.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) layer.w[static_cast<std::size_t>(i) * dim + i] = 1.0;
  layer.b.assign(dim, 0.0);
  Extractor e;
  e.layers.push_back(std::move(layer));
  return e;
}

Sample make_sample(std::int64_t id, int label, Vec v) {
  Sample s;
  s.id = id;
  s.label = label;
  s.payload = Payload::vector(std::move(v));
  return s;
}

}  // namespace

TEST_SUITE("prototype") {

TEST_CASE("class_mean basic cases") {
  const Vec m = alice::class_mean({{1, 0}, {0, 1}});
  CHECK(m[0] == doctest::Approx(0.70710678118654752));
  CHECK(m[1] == doctest::Approx(0.70710678118654752));

  const Vec single = alice::class_mean({{3, 4}});
  CHECK(single[0] == doctest::Approx(0.6));
  CHECK(single[1] == doctest::Approx(0.8));

  CHECK_THROWS_AS(alice::class_mean({{1, 0}, {-1, 0}}), Error);
  try {
    alice::class_mean({{1, 0}, {-1, 0}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVector);
  }
  CHECK_THROWS_AS(alice::class_mean({}), Error);
}

TEST_CASE("select_balanced_exemplars basic cases") {
  const std::vector<std::pair<std::int64_t, Vec>> feats = {
      {0, {1, 0}}, {1, {0.9, 0.1}}, {2, {0, 1}}};
  const Vec mean = {1, 0};

  const auto top2 = alice::select_balanced_exemplars(feats, mean, 2);
  CHECK(top2 == std::vector<std::int64_t>{0, 1});

  const auto all = alice::select_balanced_exemplars(feats, mean, 3);
  CHECK(all.size() == 3);

  // Identical features: lower id wins.
  const std::vector<std::pair<std::int64_t, Vec>> twins = {{7, {1, 1}}, {3, {1, 1}}};
  const auto one = alice::select_balanced_exemplars(twins, mean, 1);
  CHECK(one == std::vector<std::int64_t>{3});

  CHECK_THROWS_AS(alice::select_balanced_exemplars(feats, mean, 4), Error);
  try {
    alice::select_balanced_exemplars(feats, mean, 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotEnoughSamples);
  }
}

TEST_CASE("select_balanced_exemplars matches exhaustive enumeration") {
  Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t size = 2 + rng.uniform_index(11);  // <= 12
    const int k = 1 + static_cast<int>(rng.uniform_index(std::min<std::uint64_t>(5, size)));
    const std::size_t dim = 2 + rng.uniform_index(4);

    std::vector<std::pair<std::int64_t, Vec>> feats;
    std::vector<std::pair<std::int64_t, std::vector<long double>>> lfeats;
    for (std::size_t i = 0; i < size; ++i) {
      Vec v(dim);
      for (double& x : v) x = rng.uniform(-1.0, 1.0);
      v[0] += 1.5;
      // Occasional duplicates exercise the tie rule.
      if (i > 0 && rng.bernoulli(0.2)) v = feats[i - 1].second;
      feats.emplace_back(static_cast<std::int64_t>(i * 3 + 1), v);
      lfeats.emplace_back(static_cast<std::int64_t>(i * 3 + 1),
                          std::vector<long double>(v.begin(), v.end()));
    }
    Vec mean(dim);
    for (double& x : mean) x = rng.uniform(-1.0, 1.0);
    mean[0] += 1.5;

    const auto got = alice::select_balanced_exemplars(feats, mean, k);
    const auto expected =
        oracle::top_k_by_cosine(lfeats, std::vector<long double>(mean.begin(), mean.end()), k);
    CHECK(got == expected);
  }
}

TEST_CASE("build_base_prototypes with k = class size equals the full mean") {
  const Extractor e = identity_extractor(2);
  const std::vector<Sample> data = {
      make_sample(0, 0, {1.0, 0.1}), make_sample(1, 0, {0.9, -0.1}), make_sample(2, 0, {1.1, 0.0}),
      make_sample(3, 1, {0.0, 1.0}), make_sample(4, 1, {0.1, 0.9}), make_sample(5, 1, {-0.1, 1.1})};

  const PrototypeStore store = alice::build_base_prototypes(e, data, 3);
  REQUIRE(store.size() == 2);

  const Vec full_mean_0 = alice::class_mean({{1.0, 0.1}, {0.9, -0.1}, {1.1, 0.0}});
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(store.by_class.at(0).prototype[i] == doctest::Approx(full_mean_0[i]).epsilon(1e-12));
  }
  CHECK(store.by_class.at(0).shots == 3);
  CHECK(store.by_class.at(0).provenance.size() == 3);
}

TEST_CASE("build_base_prototypes excludes the outlier") {
  // Four tight points near [1, 0] and one outlier near [0, 1]; with
  // k = size - 1 the outlier (id 9) must not contribute. Verified against
  // the exhaustive oracle ranking.
  const Extractor e = identity_extractor(2);
  const std::vector<Sample> data = {
      make_sample(1, 0, {1.00, 0.02}), make_sample(3, 0, {0.98, -0.03}),
      make_sample(5, 0, {1.03, 0.01}), make_sample(7, 0, {0.97, 0.04}),
      make_sample(9, 0, {0.10, 0.99})};

  const PrototypeStore store = alice::build_base_prototypes(e, data, 4);
  const auto& prov = store.by_class.at(0).provenance;
  CHECK(prov.size() == 4);
  for (std::int64_t id : prov) CHECK(id != 9);

  CHECK_THROWS_AS(alice::build_base_prototypes(e, data, 6), Error);
}

TEST_CASE("add_incremental_prototypes grows without touching old entries") {
  const Extractor e = identity_extractor(2);
  const std::vector<Sample> base = {make_sample(0, 0, {1.0, 0.0}), make_sample(1, 1, {0.0, 1.0})};
  PrototypeStore store = alice::build_base_prototypes(e, base, 1);
  const std::string before_0 = alice::serialize_prototype_store(store);

  // 1-shot class: prototype is the normalized single feature.
  const PrototypeStore grown = alice::add_incremental_prototypes(
      store, e, {make_sample(10, 2, {3.0, 4.0})});
  CHECK(grown.size() == 3);
  CHECK(grown.by_class.at(2).prototype[0] == doctest::Approx(0.6));
  CHECK(grown.by_class.at(2).prototype[1] == doctest::Approx(0.8));

  // Old entries bit-identical.
  PrototypeStore old_only = grown;
  old_only.by_class.erase(2);
  CHECK(alice::serialize_prototype_store(old_only) == before_0);

  // Two 5-shot classes grow the store by exactly 2.
  std::vector<Sample> shots;
  for (int i = 0; i < 5; ++i) {
    shots.push_back(make_sample(20 + i, 3, {1.0, static_cast<double>(i) * 0.01}));
    shots.push_back(make_sample(30 + i, 4, {-1.0, static_cast<double>(i) * 0.01}));
  }
  const PrototypeStore grown2 = alice::add_incremental_prototypes(grown, e, shots);
  CHECK(grown2.size() == 5);

  CHECK_THROWS_AS(alice::add_incremental_prototypes(grown, e, {make_sample(40, 0, {1, 1})}),
                  Error);
  try {
    alice::add_incremental_prototypes(grown, e, {make_sample(40, 0, {1, 1})});
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::DuplicateClass);
  }
}

TEST_CASE("ncm_classify basic cases and scale invariance") {
  PrototypeStore store;
  store.by_class[0] = {Vec{1, 0}, {0}, 1};
  store.by_class[1] = {Vec{0, 1}, {1}, 1};

  CHECK(alice::ncm_classify(store, {0.9, 0.1}) == 0);
  CHECK(alice::ncm_classify(store, {0.0, 5.0}) == 1);
  CHECK(alice::ncm_classify(store, {1.0, 1.0}) == 0);  // tie -> smaller id

  Rng rng(62);
  for (int i = 0; i < 100; ++i) {
    Vec f = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    f[0] += 1.2;
    const double c = rng.uniform(0.1, 10.0);
    Vec scaled = f;
    for (double& v : scaled) v *= c;
    CHECK(alice::ncm_classify(store, f) == alice::ncm_classify(store, scaled));
  }

  CHECK_THROWS_AS(alice::ncm_classify(PrototypeStore{}, {1, 0}), Error);
  CHECK_THROWS_AS(alice::ncm_classify(store, {0, 0}), Error);
}

TEST_CASE("prototypes are unit norm with balanced provenance") {
  const Extractor e = identity_extractor(3);
  Rng rng(63);
  std::vector<Sample> data;
  std::int64_t id = 0;
  for (int c = 0; c < 4; ++c) {
    for (int s = 0; s < 7; ++s) {
      Vec v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      v[c % 3] += 2.0;
      data.push_back(make_sample(id++, c, std::move(v)));
    }
  }
  const int k = 3;
  const PrototypeStore store = alice::build_base_prototypes(e, data, k);
  for (const auto& [label, entry] : store.by_class) {
    CHECK(std::fabs(alice::norm(entry.prototype) - 1.0) < 1e-9);
    CHECK(entry.provenance.size() == static_cast<std::size_t>(k));
    for (std::int64_t pid : entry.provenance) {
      CHECK(data[static_cast<std::size_t>(pid)].label == label);
    }
  }
}

TEST_CASE("prototype store serialization round trip") {
  const Extractor e = identity_extractor(2);
  const std::vector<Sample> base = {make_sample(0, 0, {0.3, 0.7}), make_sample(1, 1, {-0.2, 0.5})};
  const PrototypeStore store = alice::build_base_prototypes(e, base, 1);

  const std::string text = alice::serialize_prototype_store(store);
  const PrototypeStore parsed = alice::parse_prototype_store(text);
  CHECK(alice::serialize_prototype_store(parsed) == text);
  CHECK(parsed.size() == store.size());
  CHECK(parsed.by_class.at(0).prototype == store.by_class.at(0).prototype);
  CHECK(parsed.by_class.at(1).provenance == store.by_class.at(1).provenance);

  CHECK_THROWS_AS(alice::parse_prototype_store("garbage"), Error);
}

}  // TEST_SUITE
