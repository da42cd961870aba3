#pragma once

#include <cstdint>
#include <vector>

#include "alice/data.hpp"
#include "alice/model.hpp"
#include "alice/prototype.hpp"

namespace alice {

/// A base session followed by `steps` incremental sessions of `way` classes
/// with `shot` training samples each. Label spaces are disjoint across
/// sessions and test sets are cumulative.
struct ProtocolSpec {
  int base_classes = 0;
  int steps = 0;  // M
  int way = 0;    // N
  int shot = 0;   // K
  std::uint64_t seed = 0;
  bool shuffle_classes = false;  // seeded shuffle of the class order
};

struct SessionSplit {
  int index = 0;
  std::vector<Sample> train;
  std::vector<int> train_labels;        // C^i, ascending
  std::vector<Sample> test_cumulative;  // all test samples over C^0..C^i
  std::vector<int> test_labels;         // cumulative label space, ascending
};

struct SessionResult {
  int index = 0;
  std::vector<int> label_space;               // cumulative, ascending
  std::vector<std::pair<int, int>> pairs;     // (true, predicted)
};

/// Deterministic session construction: classes sorted by id (optionally
/// seeded-shuffled), the first `base_classes` form session 0 with all their
/// training data, then consecutive `way`-blocks per incremental session with
/// exactly `shot` seeded draws per class (without replacement).
std::vector<SessionSplit> build_splits(const Dataset& dataset, const ProtocolSpec& spec);

struct EvalOptions {
  bool balanced = true;  // balanced base prototypes vs full-data means
  int k_override = 0;    // 0 -> use spec.shot; anything else departs from the
                         // balanced-testing recipe and must be set explicitly
};

/// Runs the incremental protocol: builds base prototypes (k = K), then per
/// incremental session adds the new few-shot prototypes and classifies the
/// cumulative test set. The extractor is read-only throughout. When
/// final_store is given it receives the store after the last session.
std::vector<SessionResult> run_protocol(const Extractor& extractor,
                                        const std::vector<SessionSplit>& splits, int shot,
                                        const EvalOptions& options = {},
                                        PrototypeStore* final_store = nullptr);

}  // namespace alice
