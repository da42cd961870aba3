#pragma once

#include <string>

#include "alice/dataset_io.hpp"
#include "alice/model.hpp"
#include "alice/protocol.hpp"

namespace alice {

/// Everything one experiment run needs, resolved from a sectioned key-value
/// config file (`[section]` headers, `key = value` lines, `#` comments).
/// The effective (defaults-resolved) config is written next to every output
/// so ablation runs stay diffable.
struct RunConfig {
  // [dataset]
  DatasetFormat format = DatasetFormat::Csv;
  std::string train_path;
  std::string test_path;

  // [protocol]
  ProtocolSpec protocol;

  // [train]
  TrainConfig train;

  // [eval]
  EvalOptions eval;

  // [synth]
  SynthConfig synth;

  // [output]
  std::string out_dir = "out";
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Deterministic rendering of the resolved config (fixed key order).
std::string render_run_config(const RunConfig& cfg);

}  // namespace alice
