#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alice/config.hpp"

namespace alice {

/// Flag-level overrides layered on top of a config file.
struct CommandOverrides {
  std::optional<std::uint64_t> seed;  // applied to train, protocol and synth seeds
  std::optional<std::string> out_dir;
  std::optional<LossKind> loss;
  std::optional<bool> class_aug;
  std::optional<bool> balance;
};

RunConfig apply_overrides(RunConfig cfg, const CommandOverrides& overrides);

/// Writes <out>/train.csv, <out>/test.csv and the resolved config. Identical
/// configs produce byte-identical files.
void cmd_synth(const RunConfig& cfg);

/// Trains on session-0 data only and writes <out>/model.ckpt plus a
/// per-epoch loss log and the resolved config.
void cmd_train(const RunConfig& cfg);

/// Builds the session splits, runs the incremental protocol against the
/// checkpointed extractor and writes <out>/report.csv, <out>/confusion.txt,
/// <out>/prototypes.txt, <out>/splits_manifest.csv and the resolved config.
void cmd_eval(const RunConfig& cfg, const std::string& checkpoint_path);

/// Side-by-side comparison of previously written reports.
std::string cmd_report(const std::vector<std::string>& report_paths);

}  // namespace alice
