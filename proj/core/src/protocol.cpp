#include "alice/protocol.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace alice {

namespace {

void validate(const ProtocolSpec& spec, std::size_t total_classes) {
  if (spec.base_classes < 1) throw Error(ErrorCode::InfeasibleSpec, "base_classes must be >= 1");
  if (spec.steps < 0) throw Error(ErrorCode::InfeasibleSpec, "steps must be >= 0");
  if (spec.steps > 0 && spec.way < 1) throw Error(ErrorCode::InfeasibleSpec, "way must be >= 1");
  if (spec.shot < 1) throw Error(ErrorCode::InfeasibleSpec, "shot must be >= 1");
  const std::size_t needed = static_cast<std::size_t>(spec.base_classes) +
                             static_cast<std::size_t>(spec.steps) * std::max(spec.way, 0);
  if (needed > total_classes) {
    throw Error(ErrorCode::InfeasibleSpec,
                "protocol needs " + std::to_string(needed) + " classes, dataset has " +
                    std::to_string(total_classes));
  }
}

// k distinct indices in [0, n), seeded, selection order preserved.
std::vector<std::size_t> draw_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_index(n - i);
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

}  // namespace

std::vector<SessionSplit> build_splits(const Dataset& dataset, const ProtocolSpec& spec) {
  std::map<int, std::vector<Sample>> train_by_class, test_by_class;
  for (const Sample& s : dataset.train) train_by_class[s.label].push_back(s);
  for (const Sample& s : dataset.test) test_by_class[s.label].push_back(s);

  validate(spec, train_by_class.size());
  for (const auto& [label, samples] : train_by_class) {
    if (samples.size() < static_cast<std::size_t>(spec.shot)) {
      throw Error(ErrorCode::InsufficientShots,
                  "class " + std::to_string(label) + " has " + std::to_string(samples.size()) +
                      " train samples, protocol needs " + std::to_string(spec.shot));
    }
    if (test_by_class.count(label) == 0) {
      throw Error(ErrorCode::InsufficientShots,
                  "class " + std::to_string(label) + " has no test samples");
    }
  }

  // Sort within each class by sample id so the seeded draws do not depend on
  // file order.
  for (auto& [label, samples] : train_by_class) {
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.id < b.id; });
  }

  std::vector<int> order;
  order.reserve(train_by_class.size());
  for (const auto& [label, _] : train_by_class) order.push_back(label);

  Rng rng(spec.seed);
  if (spec.shuffle_classes) {
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const std::size_t j = i + rng.uniform_index(order.size() - i);
      std::swap(order[i], order[j]);
    }
  }

  std::vector<SessionSplit> splits;
  std::vector<int> cumulative;
  std::size_t next_class = 0;
  for (int session = 0; session <= spec.steps; ++session) {
    SessionSplit split;
    split.index = session;
    const int count = session == 0 ? spec.base_classes : spec.way;
    for (int c = 0; c < count; ++c) {
      const int label = order[next_class++];
      split.train_labels.push_back(label);
      cumulative.push_back(label);
      const auto& pool = train_by_class[label];
      if (session == 0) {
        split.train.insert(split.train.end(), pool.begin(), pool.end());
      } else {
        for (std::size_t idx :
             draw_without_replacement(pool.size(), static_cast<std::size_t>(spec.shot), rng)) {
          split.train.push_back(pool[idx]);
        }
      }
    }
    std::sort(split.train_labels.begin(), split.train_labels.end());

    split.test_labels = cumulative;
    std::sort(split.test_labels.begin(), split.test_labels.end());
    for (int label : split.test_labels) {
      const auto& pool = test_by_class[label];
      split.test_cumulative.insert(split.test_cumulative.end(), pool.begin(), pool.end());
    }
    std::sort(split.test_cumulative.begin(), split.test_cumulative.end(),
              [](const Sample& a, const Sample& b) {
                if (a.label != b.label) return a.label < b.label;
                return a.id < b.id;
              });
    splits.push_back(std::move(split));
  }
  return splits;
}

std::vector<SessionResult> run_protocol(const Extractor& extractor,
                                        const std::vector<SessionSplit>& splits, int shot,
                                        const EvalOptions& options, PrototypeStore* final_store) {
  if (splits.empty()) throw Error(ErrorCode::SplitMismatch, "no session splits");
  for (std::size_t i = 0; i < splits.size(); ++i) {
    if (splits[i].index != static_cast<int>(i)) {
      throw Error(ErrorCode::SplitMismatch, "session indices must be consecutive from 0");
    }
  }
  const int k = options.k_override > 0 ? options.k_override : shot;
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "balanced shot count must be >= 1");

  PrototypeStore store = options.balanced
                             ? build_base_prototypes(extractor, splits[0].train, k)
                             : build_full_mean_prototypes(extractor, splits[0].train);

  std::vector<SessionResult> results;
  for (const SessionSplit& split : splits) {
    if (split.index > 0) {
      store = add_incremental_prototypes(std::move(store), extractor, split.train);
    }
    SessionResult result;
    result.index = split.index;
    result.label_space = split.test_labels;
    result.pairs.reserve(split.test_cumulative.size());
    for (const Sample& s : split.test_cumulative) {
      result.pairs.emplace_back(s.label, ncm_classify(store, extract_feature(extractor, s.payload)));
    }
    results.push_back(std::move(result));
  }
  if (final_store) *final_store = std::move(store);
  return results;
}

}  // namespace alice
