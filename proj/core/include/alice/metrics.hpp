#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "alice/protocol.hpp"

namespace alice {

/// Macro (per-class mean) accuracy over the session's label space, as a
/// fraction. Every class in the space needs at least one test sample.
double average_accuracy(const SessionResult& result);

/// Harmonic mean 2*Ab*Ai/(Ab+Ai) of the macro accuracies of the base-class
/// group and the incremental-class group; 0 when either group scores 0.
/// Undefined for sessions without incremental classes.
double harmonic_accuracy(const SessionResult& result, const std::set<int>& base_classes);

/// First-session average minus last-session average (fractions in, fraction
/// out). Needs at least two sessions.
double performance_drop(const std::vector<double>& per_session_avg);

/// Counts matrix indexed by label_space order: entry (t, p) counts samples
/// with true label label_space[t] predicted as label_space[p].
std::vector<std::vector<long>> confusion_matrix(const SessionResult& result,
                                                const std::vector<int>& label_space);

struct SessionMetrics {
  int index = 0;
  double average = 0.0;
  double base = 0.0;
  std::optional<double> incremental;  // empty for the base session
  std::optional<double> harmonic;
  std::vector<int> label_space;
  std::vector<std::vector<long>> confusion;
};

struct MetricsReport {
  std::vector<SessionMetrics> sessions;
  std::optional<double> pd;  // absent for single-session runs
};

MetricsReport build_report(const std::vector<SessionResult>& results,
                           const std::set<int>& base_classes);

/// CSV with one row per session (percentages, one decimal) and a `pd` footer:
///   session,avg_acc,base_acc,incr_acc,harmonic_acc
/// Incremental columns are blank for session 0.
std::string render_report_csv(const MetricsReport& report);

/// Dense per-session confusion grids (tab-separated counts with a label
/// header row).
std::string render_confusion_text(const MetricsReport& report);

/// One parsed column of a report.csv, for side-by-side comparison.
struct ParsedReport {
  std::vector<int> sessions;
  std::vector<double> average;                  // percentages as printed
  std::vector<std::optional<double>> harmonic;  // blank -> nullopt
  std::optional<double> pd;
};

ParsedReport parse_report_csv(const std::string& text);

/// Side-by-side table of per-session average and harmonic accuracy plus PD
/// for several parsed reports. Session counts must agree.
std::string render_comparison(const std::vector<ParsedReport>& reports,
                              const std::vector<std::string>& names);

}  // namespace alice
