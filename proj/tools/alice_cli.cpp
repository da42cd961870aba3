// Operator entry point: `alice synth|train|eval|report`.
//
// Every failure exits nonzero after printing a single machine-parsable line
// to stderr: `error: <Code>: <detail>`.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alice/commands.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> loss;
  std::optional<std::string> class_aug;
  std::optional<std::string> balance;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  // Accepted both as the positional argument and as --config.
  cmd->add_option("config,--config", flags.config_path, "run config file");
  cmd->add_option("--seed", flags.seed, "override train/protocol/synth seeds");
  cmd->add_option("--out", flags.out_dir, "override output directory");
  cmd->add_option("--loss", flags.loss, "loss selector: angular | ce")
      ->check(CLI::IsMember({"angular", "ce"}));
  cmd->add_option("--class-aug", flags.class_aug, "class augmentation: on | off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--balance", flags.balance, "balanced base prototypes: on | off")
      ->check(CLI::IsMember({"on", "off"}));
}

alice::RunConfig resolve_config(const CommonFlags& flags) {
  if (flags.config_path.empty()) {
    throw alice::Error(alice::ErrorCode::InvalidConfig, "a config file is required");
  }
  alice::CommandOverrides ov;
  ov.seed = flags.seed;
  ov.out_dir = flags.out_dir;
  if (flags.loss) {
    ov.loss = *flags.loss == "ce" ? alice::LossKind::CrossEntropy : alice::LossKind::Angular;
  }
  if (flags.class_aug) ov.class_aug = *flags.class_aug == "on";
  if (flags.balance) ov.balance = *flags.balance == "on";
  return alice::apply_overrides(alice::load_run_config(flags.config_path), ov);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"few-shot class-incremental learning toolkit"};
  app.require_subcommand(1);

  CommonFlags synth_flags, train_flags, eval_flags;
  std::string checkpoint_path;
  std::vector<std::string> report_paths;

  auto* synth = app.add_subcommand("synth", "generate a synthetic Gaussian-blob dataset");
  add_common(synth, synth_flags);

  auto* train = app.add_subcommand("train", "train the base-session embedding");
  add_common(train, train_flags);

  auto* eval = app.add_subcommand("eval", "run the incremental protocol and write reports");
  add_common(eval, eval_flags);
  eval->add_option("--checkpoint", checkpoint_path, "model checkpoint from `train`")->required();

  auto* report = app.add_subcommand("report", "compare previously written report.csv files");
  report->add_option("reports", report_paths, "report.csv paths")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      alice::cmd_synth(resolve_config(synth_flags));
    } else if (train->parsed()) {
      alice::cmd_train(resolve_config(train_flags));
    } else if (eval->parsed()) {
      alice::cmd_eval(resolve_config(eval_flags), checkpoint_path);
    } else if (report->parsed()) {
      std::cout << alice::cmd_report(report_paths);
    }
  } catch (const alice::Error& e) {
    std::cerr << "error: " << alice::code_name(e.code()) << ": " << e.detail() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
