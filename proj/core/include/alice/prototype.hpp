#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "alice/data.hpp"
#include "alice/model.hpp"

namespace alice {

struct PrototypeEntry {
  Vec prototype;                       // unit norm
  std::vector<std::int64_t> provenance;  // contributing sample ids
  int shots = 0;                       // k used to build the entry
};

/// Map class id -> unit-norm prototype, with the provenance needed to audit
/// balanced construction. Immutable once built; safe to share for parallel
/// classification.
struct PrototypeStore {
  std::map<int, PrototypeEntry> by_class;

  bool empty() const { return by_class.empty(); }
  std::size_t size() const { return by_class.size(); }
};

/// Arithmetic mean of the features, then l2-normalized.
Vec class_mean(const std::vector<Vec>& features);

/// Ids of the k features with the largest cosine similarity to mean, ties
/// broken by ascending id. Result kept in (cosine desc, id asc) order.
std::vector<std::int64_t> select_balanced_exemplars(
    const std::vector<std::pair<std::int64_t, Vec>>& class_features, const Vec& mean, int k);

/// Balanced base prototypes: per class, compute the full-data mean, keep the
/// k exemplars nearest to it (cosine), and rebuild the prototype as the
/// normalized mean of just those exemplars.
PrototypeStore build_base_prototypes(const Extractor& extractor,
                                     const std::vector<Sample>& base_data, int k);

/// Unbalanced variant: prototype = normalized full-data class mean.
PrototypeStore build_full_mean_prototypes(const Extractor& extractor,
                                          const std::vector<Sample>& base_data);

/// Adds one prototype per new class as the normalized mean of its few-shot
/// features. New labels must be disjoint from the store; old entries are
/// returned bit-identical.
PrototypeStore add_incremental_prototypes(PrototypeStore store, const Extractor& extractor,
                                          const std::vector<Sample>& shots);

/// Nearest class mean under cosine similarity; ties go to the smaller id.
int ncm_classify(const PrototypeStore& store, const Vec& f);

/// Versioned text serialization (class id, shot count, provenance ids, vector
/// entries); round-trips through parse_prototype_store.
std::string serialize_prototype_store(const PrototypeStore& store);
PrototypeStore parse_prototype_store(const std::string& text);

}  // namespace alice
