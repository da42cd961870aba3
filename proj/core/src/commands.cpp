#include "alice/commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include "alice/checkpoint.hpp"
#include "alice/metrics.hpp"

namespace alice {

namespace fs = std::filesystem;

RunConfig apply_overrides(RunConfig cfg, const CommandOverrides& overrides) {
  if (overrides.seed) {
    cfg.train.seed = *overrides.seed;
    cfg.protocol.seed = *overrides.seed;
    cfg.synth.seed = *overrides.seed;
  }
  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  if (overrides.loss) cfg.train.loss_kind = *overrides.loss;
  if (overrides.class_aug) cfg.train.class_aug = *overrides.class_aug;
  if (overrides.balance) cfg.eval.balanced = *overrides.balance;
  return cfg;
}

namespace {

fs::path ensure_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create output dir " + cfg.out_dir);
  return dir;
}

void write_effective_config(const RunConfig& cfg, const fs::path& dir, const std::string& name) {
  write_text_file((dir / name).string(), render_run_config(cfg));
}

Dataset load_configured_dataset(const RunConfig& cfg) {
  if (cfg.train_path.empty() || cfg.test_path.empty()) {
    throw Error(ErrorCode::InvalidConfig, "dataset train/test paths are required");
  }
  return load_dataset(cfg.train_path, cfg.test_path, cfg.format);
}

std::string render_split_manifest(const std::vector<SessionSplit>& splits) {
  std::string out = "# class assignment\nclass,session\n";
  std::map<int, int> session_of;
  for (const SessionSplit& split : splits) {
    for (int label : split.train_labels) session_of[label] = split.index;
  }
  for (const auto& [label, session] : session_of) {
    out += std::to_string(label) + "," + std::to_string(session) + "\n";
  }
  out += "# incremental shots\nsession,class,sample_ids\n";
  char buf[32];
  for (const SessionSplit& split : splits) {
    if (split.index == 0) continue;
    std::map<int, std::vector<std::int64_t>> ids_by_class;
    for (const Sample& s : split.train) ids_by_class[s.label].push_back(s.id);
    for (auto& [label, ids] : ids_by_class) {
      std::sort(ids.begin(), ids.end());
      out += std::to_string(split.index) + "," + std::to_string(label) + ",";
      for (std::size_t i = 0; i < ids.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s%" PRId64, i ? " " : "", ids[i]);
        out += buf;
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace

void cmd_synth(const RunConfig& cfg) {
  const fs::path dir = ensure_out_dir(cfg);
  RunConfig effective = cfg;
  effective.train_path = (dir / "train.csv").string();
  effective.test_path = (dir / "test.csv").string();
  write_synth_dataset(cfg.synth, effective.train_path, effective.test_path);
  write_effective_config(effective, dir, "synth.config.ini");
}

void cmd_train(const RunConfig& cfg) {
  validate(cfg.train);
  const fs::path dir = ensure_out_dir(cfg);
  const Dataset dataset = load_configured_dataset(cfg);
  const std::vector<SessionSplit> splits = build_splits(dataset, cfg.protocol);

  // Session-0 data only; labels remapped densely in class-id order so the
  // training head sees {0..base-1} even under shuffled class assignment.
  std::map<int, int> dense;
  for (int label : splits[0].train_labels) {
    dense.emplace(label, static_cast<int>(dense.size()));
  }
  std::vector<Sample> base_data = splits[0].train;
  for (Sample& s : base_data) s.label = dense.at(s.label);

  const TrainResult result = train_base(base_data, cfg.train);
  save_checkpoint(result.params, (dir / "model.ckpt").string());

  std::string log = "epoch,loss\n";
  char buf[48];
  for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", e, result.epoch_loss[e]);
    log += buf;
  }
  write_text_file((dir / "train_log.csv").string(), log);
  write_effective_config(cfg, dir, "train.config.ini");
}

void cmd_eval(const RunConfig& cfg, const std::string& checkpoint_path) {
  const fs::path dir = ensure_out_dir(cfg);
  const Dataset dataset = load_configured_dataset(cfg);
  const ModelParams params = load_checkpoint(checkpoint_path);

  if (dataset.train.empty() ||
      static_cast<int>(dataset.train.front().payload.size()) != params.extractor.input_dim()) {
    throw Error(ErrorCode::CheckpointMismatch,
                "checkpoint expects input dim " + std::to_string(params.extractor.input_dim()) +
                    ", dataset provides " +
                    std::to_string(dataset.train.empty() ? 0 : dataset.train.front().payload.size()));
  }

  const std::vector<SessionSplit> splits = build_splits(dataset, cfg.protocol);
  PrototypeStore final_store;
  const std::vector<SessionResult> results =
      run_protocol(params.extractor, splits, cfg.protocol.shot, cfg.eval, &final_store);

  const std::set<int> base_classes(splits[0].train_labels.begin(), splits[0].train_labels.end());
  const MetricsReport report = build_report(results, base_classes);

  write_text_file((dir / "report.csv").string(), render_report_csv(report));
  write_text_file((dir / "confusion.txt").string(), render_confusion_text(report));
  write_text_file((dir / "prototypes.txt").string(), serialize_prototype_store(final_store));
  write_text_file((dir / "splits_manifest.csv").string(), render_split_manifest(splits));
  write_effective_config(cfg, dir, "eval.config.ini");
}

std::string cmd_report(const std::vector<std::string>& report_paths) {
  if (report_paths.empty()) throw Error(ErrorCode::EmptyInput, "no report paths given");
  std::vector<ParsedReport> parsed;
  std::vector<std::string> names;
  for (const std::string& path : report_paths) {
    parsed.push_back(parse_report_csv(read_text_file(path)));
    names.push_back(fs::path(path).parent_path().filename().string().empty()
                        ? path
                        : fs::path(path).parent_path().filename().string());
  }
  return render_comparison(parsed, names);
}

}  // namespace alice
