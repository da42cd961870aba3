#include "alice/dataset_io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace alice {

DatasetFormat parse_format(const std::string& tag) {
  if (tag == "csv") return DatasetFormat::Csv;
  if (tag == "image") return DatasetFormat::Image;
  throw Error(ErrorCode::InvalidConfig, "unknown dataset format '" + tag + "'");
}

namespace {

void check_contiguous(const std::set<int>& labels, const std::string& what) {
  if (labels.empty()) throw Error(ErrorCode::EmptyDataset, what + " contains no samples");
  if (*labels.begin() != 0 || *labels.rbegin() != static_cast<int>(labels.size()) - 1) {
    throw Error(ErrorCode::NonContiguousLabels,
                what + " labels must form {0..C-1}, found range [" +
                    std::to_string(*labels.begin()) + ", " + std::to_string(*labels.rbegin()) +
                    "] over " + std::to_string(labels.size()) + " distinct labels");
  }
}

std::vector<Sample> load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected_dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    Sample s;
    s.id = static_cast<std::int64_t>(samples.size());
    if (!std::getline(row, cell, ',')) {
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(line_no) + ": empty row");
    }
    char* end = nullptr;
    s.label = static_cast<int>(std::strtol(cell.c_str(), &end, 10));
    if (end == cell.c_str() || *end != '\0') {
      throw Error(ErrorCode::ParseError,
                  path + ":" + std::to_string(line_no) + ": bad label '" + cell + "'");
    }
    Vec values;
    while (std::getline(row, cell, ',')) {
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw Error(ErrorCode::ParseError,
                    path + ":" + std::to_string(line_no) + ": bad value '" + cell + "'");
      }
      values.push_back(v);
    }
    if (values.empty()) {
      throw Error(ErrorCode::ParseError,
                  path + ":" + std::to_string(line_no) + ": row has no feature values");
    }
    if (expected_dim == 0) {
      expected_dim = values.size();
    } else if (values.size() != expected_dim) {
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(line_no) + ": expected " +
                                             std::to_string(expected_dim) + " values, got " +
                                             std::to_string(values.size()));
    }
    s.payload = Payload::vector(std::move(values));
    samples.push_back(std::move(s));
  }
  return samples;
}

Payload load_tensor_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open tensor file " + path);
  std::uint32_t header[3];
  if (!in.read(reinterpret_cast<char*>(header), sizeof(header))) {
    throw Error(ErrorCode::ParseError, "truncated tensor header in " + path);
  }
  const std::uint32_t w = header[0], h = header[1], c = header[2];
  if (w == 0 || h == 0 || c == 0 || w > 4096 || h > 4096 || c > 16) {
    throw Error(ErrorCode::ParseError, "implausible tensor shape in " + path);
  }
  const std::size_t n = static_cast<std::size_t>(w) * h * c;
  std::vector<unsigned char> raw(n);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n))) {
    throw Error(ErrorCode::ParseError, "truncated tensor data in " + path);
  }
  Vec values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = raw[i] / 255.0;
  return Payload::image(static_cast<int>(w), static_cast<int>(h), static_cast<int>(c),
                        std::move(values));
}

std::vector<Sample> load_image_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string id_cell, label_cell, rel_path;
    if (!std::getline(row, id_cell, ',') || !std::getline(row, label_cell, ',') ||
        !std::getline(row, rel_path)) {
      throw Error(ErrorCode::ParseError,
                  path + ":" + std::to_string(line_no) + ": expected id,label,relative_path");
    }
    Sample s;
    char* end = nullptr;
    s.id = std::strtoll(id_cell.c_str(), &end, 10);
    if (end == id_cell.c_str() || *end != '\0') {
      throw Error(ErrorCode::ParseError,
                  path + ":" + std::to_string(line_no) + ": bad id '" + id_cell + "'");
    }
    s.label = static_cast<int>(std::strtol(label_cell.c_str(), &end, 10));
    if (end == label_cell.c_str() || *end != '\0') {
      throw Error(ErrorCode::ParseError,
                  path + ":" + std::to_string(line_no) + ": bad label '" + label_cell + "'");
    }
    s.payload = load_tensor_file((base / rel_path).string());
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace

std::vector<Sample> load_samples(const std::string& path, DatasetFormat format) {
  std::vector<Sample> samples =
      format == DatasetFormat::Csv ? load_csv(path) : load_image_manifest(path);
  std::set<int> labels;
  for (const Sample& s : samples) labels.insert(s.label);
  check_contiguous(labels, path);
  return samples;
}

Dataset load_dataset(const std::string& train_path, const std::string& test_path,
                     DatasetFormat format) {
  Dataset d;
  d.train = load_samples(train_path, format);
  d.test = load_samples(test_path, format);
  std::set<int> all;
  for (const Sample& s : d.train) all.insert(s.label);
  for (const Sample& s : d.test) all.insert(s.label);
  check_contiguous(all, "dataset union");
  return d;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_synth_dataset(const SynthConfig& cfg, const std::string& train_path,
                         const std::string& test_path) {
  if (cfg.classes < 1 || cfg.dim < 1 || cfg.per_class_train < 1 || cfg.per_class_test < 1 ||
      cfg.spread < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "synth config values must be positive (spread >= 0)");
  }

  Rng rng(cfg.seed);
  std::vector<Vec> centers(cfg.classes);
  for (Vec& center : centers) {
    center.resize(cfg.dim);
    for (double& v : center) v = rng.normal();
    center = l2_normalize(center);
  }

  char buf[40];
  auto emit = [&](int per_class, Rng& r) {
    std::string out;
    for (int c = 0; c < cfg.classes; ++c) {
      for (int s = 0; s < per_class; ++s) {
        out += std::to_string(c);
        for (int d = 0; d < cfg.dim; ++d) {
          std::snprintf(buf, sizeof(buf), ",%.17g", centers[c][d] + cfg.spread * r.normal());
          out += buf;
        }
        out += "\n";
      }
    }
    return out;
  };

  Rng train_rng = rng.fork();
  Rng test_rng = rng.fork();
  write_text_file(train_path, emit(cfg.per_class_train, train_rng));
  write_text_file(test_path, emit(cfg.per_class_test, test_rng));
}

}  // namespace alice
