#include "alice/prototype.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace alice {

Vec class_mean(const std::vector<Vec>& features) {
  if (features.empty()) throw Error(ErrorCode::EmptyClass, "class_mean over no features");
  Vec mean(features.front().size(), 0.0);
  for (const Vec& f : features) {
    if (f.size() != mean.size()) {
      throw Error(ErrorCode::DimensionMismatch, "class_mean feature dims differ");
    }
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += f[i];
  }
  for (double& v : mean) v /= static_cast<double>(features.size());
  return l2_normalize(mean);
}

std::vector<std::int64_t> select_balanced_exemplars(
    const std::vector<std::pair<std::int64_t, Vec>>& class_features, const Vec& mean, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  if (static_cast<std::size_t>(k) > class_features.size()) {
    throw Error(ErrorCode::NotEnoughSamples,
                "k = " + std::to_string(k) + " exceeds class size " +
                    std::to_string(class_features.size()));
  }
  std::vector<std::pair<double, std::int64_t>> ranked;  // (cosine, id)
  ranked.reserve(class_features.size());
  for (const auto& [id, f] : class_features) {
    ranked.emplace_back(cosine_similarity(f, mean), id);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::int64_t> ids(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) ids[static_cast<std::size_t>(i)] = ranked[static_cast<std::size_t>(i)].second;
  return ids;
}

namespace {

std::map<int, std::vector<std::pair<std::int64_t, Vec>>> features_by_class(
    const Extractor& extractor, const std::vector<Sample>& data) {
  std::map<int, std::vector<std::pair<std::int64_t, Vec>>> out;
  for (const Sample& s : data) {
    out[s.label].emplace_back(s.id, extract_feature(extractor, s.payload));
  }
  return out;
}

PrototypeEntry entry_from_ids(const std::vector<std::pair<std::int64_t, Vec>>& feats,
                              const std::vector<std::int64_t>& ids) {
  std::vector<Vec> kept;
  kept.reserve(ids.size());
  for (std::int64_t id : ids) {
    for (const auto& [fid, f] : feats) {
      if (fid == id) {
        kept.push_back(f);
        break;
      }
    }
  }
  PrototypeEntry e;
  e.prototype = class_mean(kept);
  e.provenance = ids;
  e.shots = static_cast<int>(ids.size());
  return e;
}

}  // namespace

PrototypeStore build_base_prototypes(const Extractor& extractor,
                                     const std::vector<Sample>& base_data, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  PrototypeStore store;
  for (const auto& [label, feats] : features_by_class(extractor, base_data)) {
    if (static_cast<std::size_t>(k) > feats.size()) {
      throw Error(ErrorCode::NotEnoughSamples,
                  "class " + std::to_string(label) + " has " + std::to_string(feats.size()) +
                      " samples, need " + std::to_string(k));
    }
    std::vector<Vec> all;
    all.reserve(feats.size());
    for (const auto& [id, f] : feats) all.push_back(f);
    const Vec mean = class_mean(all);
    store.by_class[label] = entry_from_ids(feats, select_balanced_exemplars(feats, mean, k));
  }
  return store;
}

PrototypeStore build_full_mean_prototypes(const Extractor& extractor,
                                          const std::vector<Sample>& base_data) {
  PrototypeStore store;
  for (const auto& [label, feats] : features_by_class(extractor, base_data)) {
    std::vector<std::int64_t> ids;
    ids.reserve(feats.size());
    for (const auto& [id, f] : feats) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    store.by_class[label] = entry_from_ids(feats, ids);
  }
  return store;
}

PrototypeStore add_incremental_prototypes(PrototypeStore store, const Extractor& extractor,
                                          const std::vector<Sample>& shots) {
  for (const auto& [label, feats] : features_by_class(extractor, shots)) {
    if (store.by_class.count(label) != 0) {
      throw Error(ErrorCode::DuplicateClass,
                  "class " + std::to_string(label) + " already has a prototype");
    }
    std::vector<std::int64_t> ids;
    ids.reserve(feats.size());
    for (const auto& [id, f] : feats) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    store.by_class[label] = entry_from_ids(feats, ids);
  }
  return store;
}

int ncm_classify(const PrototypeStore& store, const Vec& f) {
  if (store.empty()) throw Error(ErrorCode::EmptyStore, "classification against empty store");
  int best = -1;
  double best_cos = 0.0;
  for (const auto& [label, entry] : store.by_class) {
    const double c = cosine_similarity(f, entry.prototype);
    if (best < 0 || c > best_cos) {  // strict > keeps the smallest id on ties
      best = label;
      best_cos = c;
    }
  }
  return best;
}

std::string serialize_prototype_store(const PrototypeStore& store) {
  std::string out = "alice-prototypes v1\n";
  out += "classes " + std::to_string(store.size()) + "\n";
  char buf[64];
  for (const auto& [label, entry] : store.by_class) {
    out += "class " + std::to_string(label) + " shots " + std::to_string(entry.shots) +
           " provenance";
    for (std::int64_t id : entry.provenance) {
      std::snprintf(buf, sizeof(buf), " %" PRId64, id);
      out += buf;
    }
    out += "\nvector";
    for (double v : entry.prototype) {
      std::snprintf(buf, sizeof(buf), " %.17g", v);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

PrototypeStore parse_prototype_store(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "alice-prototypes v1") {
    throw Error(ErrorCode::ParseError, "bad prototype store header");
  }
  if (!std::getline(in, line) || line.rfind("classes ", 0) != 0) {
    throw Error(ErrorCode::ParseError, "missing class count");
  }
  const std::size_t count = std::stoul(line.substr(8));

  PrototypeStore store;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "truncated store");
    std::istringstream head(line);
    std::string tok;
    int label = 0;
    PrototypeEntry entry;
    head >> tok >> label;
    if (tok != "class") throw Error(ErrorCode::ParseError, "expected class record");
    head >> tok >> entry.shots;
    if (tok != "shots") throw Error(ErrorCode::ParseError, "expected shot count");
    head >> tok;
    if (tok != "provenance") throw Error(ErrorCode::ParseError, "expected provenance list");
    std::int64_t id;
    while (head >> id) entry.provenance.push_back(id);

    if (!std::getline(in, line) || line.rfind("vector", 0) != 0) {
      throw Error(ErrorCode::ParseError, "expected vector record");
    }
    std::istringstream vec_line(line.substr(6));
    double v;
    while (vec_line >> v) entry.prototype.push_back(v);
    if (entry.prototype.empty()) throw Error(ErrorCode::ParseError, "empty prototype vector");
    store.by_class[label] = std::move(entry);
  }
  return store;
}

}  // namespace alice
