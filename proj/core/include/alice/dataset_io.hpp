#pragma once

#include <string>
#include <vector>

#include "alice/data.hpp"
#include "alice/rng.hpp"

namespace alice {

enum class DatasetFormat { Csv, Image };

DatasetFormat parse_format(const std::string& tag);

/// Loads one split (train or test file).
///
/// csv:   one sample per row, `label,f1,...,fd`; sample id = 0-based row.
/// image: manifest rows `id,label,relative_path`; each referenced tensor file
///        is `u32 width, u32 height, u32 channels` (little-endian) followed
///        by width*height*channels bytes, row-major HWC, mapped to [0, 1].
///
/// Labels must be contiguous 0..C-1 over the loaded split.
std::vector<Sample> load_samples(const std::string& path, DatasetFormat format);

/// Train + test pair; contiguity is validated over the union of labels.
Dataset load_dataset(const std::string& train_path, const std::string& test_path,
                     DatasetFormat format);

struct SynthConfig {
  int classes = 10;
  int dim = 16;
  int per_class_train = 200;
  int per_class_test = 40;
  double spread = 0.35;  // isotropic stddev around each class center
  std::uint64_t seed = 7;
};

/// Isotropic Gaussian clusters with unit-sphere centers; identical seeds
/// write byte-identical files.
void write_synth_dataset(const SynthConfig& cfg, const std::string& train_path,
                         const std::string& test_path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace alice
