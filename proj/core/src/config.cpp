#include "alice/config.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace alice {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "config line " + std::to_string(line_no) + ": " + what);
}

bool parse_bool(const std::string& value, std::size_t line_no) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  bad_line(line_no, "expected on/off, got '" + value + "'");
}

long parse_int(const std::string& value, std::size_t line_no) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') bad_line(line_no, "expected integer, got '" + value + "'");
  return v;
}

double parse_double(const std::string& value, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') bad_line(line_no, "expected number, got '" + value + "'");
  return v;
}

std::vector<int> parse_int_list(const std::string& value, std::size_t line_no) {
  std::vector<int> out;
  if (trim(value).empty()) return out;
  std::istringstream cells(value);
  std::string cell;
  while (std::getline(cells, cell, ',')) {
    out.push_back(static_cast<int>(parse_int(trim(cell), line_no)));
  }
  return out;
}

std::string render_int_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

std::string render_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') bad_line(line_no, "unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (section != "dataset" && section != "protocol" && section != "train" &&
          section != "eval" && section != "synth" && section != "output") {
        bad_line(line_no, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) bad_line(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) bad_line(line_no, "key '" + key + "' outside any section");

    if (section == "dataset") {
      if (key == "format") cfg.format = parse_format(value);
      else if (key == "train") cfg.train_path = value;
      else if (key == "test") cfg.test_path = value;
      else bad_line(line_no, "unknown dataset key '" + key + "'");
    } else if (section == "protocol") {
      if (key == "base_classes") cfg.protocol.base_classes = static_cast<int>(parse_int(value, line_no));
      else if (key == "steps") cfg.protocol.steps = static_cast<int>(parse_int(value, line_no));
      else if (key == "way") cfg.protocol.way = static_cast<int>(parse_int(value, line_no));
      else if (key == "shot") cfg.protocol.shot = static_cast<int>(parse_int(value, line_no));
      else if (key == "seed") cfg.protocol.seed = static_cast<std::uint64_t>(parse_int(value, line_no));
      else if (key == "shuffle_classes") cfg.protocol.shuffle_classes = parse_bool(value, line_no);
      else bad_line(line_no, "unknown protocol key '" + key + "'");
    } else if (section == "train") {
      if (key == "epochs") cfg.train.epochs = static_cast<int>(parse_int(value, line_no));
      else if (key == "batch_size") cfg.train.batch_size = static_cast<int>(parse_int(value, line_no));
      else if (key == "learning_rate") cfg.train.learning_rate = parse_double(value, line_no);
      else if (key == "momentum") cfg.train.momentum = parse_double(value, line_no);
      else if (key == "scale") cfg.train.loss.scale = parse_double(value, line_no);
      else if (key == "margin") cfg.train.loss.margin = parse_double(value, line_no);
      else if (key == "loss") {
        if (value == "angular") cfg.train.loss_kind = LossKind::Angular;
        else if (value == "ce") cfg.train.loss_kind = LossKind::CrossEntropy;
        else bad_line(line_no, "loss must be angular or ce");
      } else if (key == "class_aug") cfg.train.class_aug = parse_bool(value, line_no);
      else if (key == "mix_fraction") cfg.train.mix_fraction = parse_double(value, line_no);
      else if (key == "two_view") cfg.train.two_view_aug = parse_bool(value, line_no);
      else if (key == "noise_sigma") cfg.train.view.noise_sigma = parse_double(value, line_no);
      else if (key == "mask_prob") cfg.train.view.mask_prob = parse_double(value, line_no);
      else if (key == "resized_crop") cfg.train.view.resized_crop = parse_bool(value, line_no);
      else if (key == "hflip") cfg.train.view.hflip = parse_bool(value, line_no);
      else if (key == "color_jitter") cfg.train.view.color_jitter = parse_bool(value, line_no);
      else if (key == "grayscale") cfg.train.view.grayscale = parse_bool(value, line_no);
      else if (key == "extractor_hidden") cfg.train.shape.extractor_hidden = parse_int_list(value, line_no);
      else if (key == "embedding_dim") cfg.train.shape.embedding_dim = static_cast<int>(parse_int(value, line_no));
      else if (key == "projection") cfg.train.use_projection = parse_bool(value, line_no);
      else if (key == "projection_hidden") cfg.train.shape.projection_hidden = static_cast<int>(parse_int(value, line_no));
      else if (key == "projection_dim") cfg.train.shape.projection_dim = static_cast<int>(parse_int(value, line_no));
      else if (key == "seed") cfg.train.seed = static_cast<std::uint64_t>(parse_int(value, line_no));
      else bad_line(line_no, "unknown train key '" + key + "'");
    } else if (section == "eval") {
      if (key == "balance") cfg.eval.balanced = parse_bool(value, line_no);
      else if (key == "k_balanced") cfg.eval.k_override = static_cast<int>(parse_int(value, line_no));
      else bad_line(line_no, "unknown eval key '" + key + "'");
    } else if (section == "synth") {
      if (key == "classes") cfg.synth.classes = static_cast<int>(parse_int(value, line_no));
      else if (key == "dim") cfg.synth.dim = static_cast<int>(parse_int(value, line_no));
      else if (key == "per_class_train") cfg.synth.per_class_train = static_cast<int>(parse_int(value, line_no));
      else if (key == "per_class_test") cfg.synth.per_class_test = static_cast<int>(parse_int(value, line_no));
      else if (key == "spread") cfg.synth.spread = parse_double(value, line_no);
      else if (key == "seed") cfg.synth.seed = static_cast<std::uint64_t>(parse_int(value, line_no));
      else bad_line(line_no, "unknown synth key '" + key + "'");
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = value;
      else bad_line(line_no, "unknown output key '" + key + "'");
    }
  }

  cfg.train.view.kind = cfg.format == DatasetFormat::Csv ? PayloadKind::Vector : PayloadKind::Image;
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(read_text_file(path));
}

std::string render_run_config(const RunConfig& cfg) {
  std::string out;
  out += "[dataset]\n";
  out += "format = " + std::string(cfg.format == DatasetFormat::Csv ? "csv" : "image") + "\n";
  out += "train = " + cfg.train_path + "\n";
  out += "test = " + cfg.test_path + "\n\n";

  out += "[protocol]\n";
  out += "base_classes = " + std::to_string(cfg.protocol.base_classes) + "\n";
  out += "steps = " + std::to_string(cfg.protocol.steps) + "\n";
  out += "way = " + std::to_string(cfg.protocol.way) + "\n";
  out += "shot = " + std::to_string(cfg.protocol.shot) + "\n";
  out += "seed = " + std::to_string(cfg.protocol.seed) + "\n";
  out += "shuffle_classes = " + std::string(cfg.protocol.shuffle_classes ? "on" : "off") + "\n\n";

  const TrainConfig& t = cfg.train;
  out += "[train]\n";
  out += "epochs = " + std::to_string(t.epochs) + "\n";
  out += "batch_size = " + std::to_string(t.batch_size) + "\n";
  out += "learning_rate = " + render_double(t.learning_rate) + "\n";
  out += "momentum = " + render_double(t.momentum) + "\n";
  out += "scale = " + render_double(t.loss.scale) + "\n";
  out += "margin = " + render_double(t.loss.margin) + "\n";
  out += "loss = " + std::string(t.loss_kind == LossKind::Angular ? "angular" : "ce") + "\n";
  out += "class_aug = " + std::string(t.class_aug ? "on" : "off") + "\n";
  out += "mix_fraction = " + render_double(t.mix_fraction) + "\n";
  out += "two_view = " + std::string(t.two_view_aug ? "on" : "off") + "\n";
  out += "noise_sigma = " + render_double(t.view.noise_sigma) + "\n";
  out += "mask_prob = " + render_double(t.view.mask_prob) + "\n";
  out += "resized_crop = " + std::string(t.view.resized_crop ? "on" : "off") + "\n";
  out += "hflip = " + std::string(t.view.hflip ? "on" : "off") + "\n";
  out += "color_jitter = " + std::string(t.view.color_jitter ? "on" : "off") + "\n";
  out += "grayscale = " + std::string(t.view.grayscale ? "on" : "off") + "\n";
  out += "extractor_hidden = " + render_int_list(t.shape.extractor_hidden) + "\n";
  out += "embedding_dim = " + std::to_string(t.shape.embedding_dim) + "\n";
  out += "projection = " + std::string(t.use_projection ? "on" : "off") + "\n";
  out += "projection_hidden = " + std::to_string(t.shape.projection_hidden) + "\n";
  out += "projection_dim = " + std::to_string(t.shape.projection_dim) + "\n";
  out += "seed = " + std::to_string(t.seed) + "\n\n";

  out += "[eval]\n";
  out += "balance = " + std::string(cfg.eval.balanced ? "on" : "off") + "\n";
  out += "k_balanced = " + std::to_string(cfg.eval.k_override) + "\n\n";

  out += "[synth]\n";
  out += "classes = " + std::to_string(cfg.synth.classes) + "\n";
  out += "dim = " + std::to_string(cfg.synth.dim) + "\n";
  out += "per_class_train = " + std::to_string(cfg.synth.per_class_train) + "\n";
  out += "per_class_test = " + std::to_string(cfg.synth.per_class_test) + "\n";
  out += "spread = " + render_double(cfg.synth.spread) + "\n";
  out += "seed = " + std::to_string(cfg.synth.seed) + "\n\n";

  out += "[output]\n";
  out += "dir = " + cfg.out_dir + "\n";
  return out;
}

}  // namespace alice
