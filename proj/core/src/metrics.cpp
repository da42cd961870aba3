#include "alice/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace alice {

namespace {

// Per-class (correct, total) counts over the label space.
std::map<int, std::pair<long, long>> class_counts(const SessionResult& result) {
  std::map<int, std::pair<long, long>> counts;
  for (int label : result.label_space) counts[label] = {0, 0};
  for (const auto& [truth, pred] : result.pairs) {
    auto it = counts.find(truth);
    if (it == counts.end()) {
      throw Error(ErrorCode::UnknownLabel,
                  "true label " + std::to_string(truth) + " outside session label space");
    }
    it->second.second += 1;
    if (pred == truth) it->second.first += 1;
  }
  return counts;
}

double macro_accuracy(const std::map<int, std::pair<long, long>>& counts,
                      const std::vector<int>& classes) {
  double sum = 0.0;
  for (int label : classes) {
    const auto& [correct, total] = counts.at(label);
    if (total == 0) {
      throw Error(ErrorCode::MissingClass,
                  "class " + std::to_string(label) + " has no test samples");
    }
    sum += static_cast<double>(correct) / static_cast<double>(total);
  }
  return sum / static_cast<double>(classes.size());
}

std::string format_pct(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * fraction);
  return buf;
}

}  // namespace

double average_accuracy(const SessionResult& result) {
  if (result.label_space.empty()) {
    throw Error(ErrorCode::EmptyInput, "session has empty label space");
  }
  return macro_accuracy(class_counts(result), result.label_space);
}

double harmonic_accuracy(const SessionResult& result, const std::set<int>& base_classes) {
  std::vector<int> base, incremental;
  for (int label : result.label_space) {
    (base_classes.count(label) ? base : incremental).push_back(label);
  }
  if (incremental.empty()) {
    throw Error(ErrorCode::NoIncrementalClasses,
                "harmonic accuracy undefined without incremental classes");
  }
  if (base.empty()) {
    throw Error(ErrorCode::MissingClass, "session label space has no base classes");
  }
  const auto counts = class_counts(result);
  const double a_b = macro_accuracy(counts, base);
  const double a_i = macro_accuracy(counts, incremental);
  if (a_b + a_i == 0.0) return 0.0;
  return 2.0 * a_b * a_i / (a_b + a_i);
}

double performance_drop(const std::vector<double>& per_session_avg) {
  if (per_session_avg.size() < 2) {
    throw Error(ErrorCode::TooFewSessions, "performance drop needs >= 2 sessions");
  }
  return per_session_avg.front() - per_session_avg.back();
}

std::vector<std::vector<long>> confusion_matrix(const SessionResult& result,
                                                const std::vector<int>& label_space) {
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < label_space.size(); ++i) index[label_space[i]] = i;
  std::vector<std::vector<long>> counts(label_space.size(),
                                        std::vector<long>(label_space.size(), 0));
  for (const auto& [truth, pred] : result.pairs) {
    const auto t = index.find(truth);
    const auto p = index.find(pred);
    if (t == index.end() || p == index.end()) {
      throw Error(ErrorCode::UnknownLabel,
                  "pair (" + std::to_string(truth) + ", " + std::to_string(pred) +
                      ") outside the label space");
    }
    counts[t->second][p->second] += 1;
  }
  return counts;
}

MetricsReport build_report(const std::vector<SessionResult>& results,
                           const std::set<int>& base_classes) {
  MetricsReport report;
  std::vector<double> averages;
  for (const SessionResult& result : results) {
    SessionMetrics m;
    m.index = result.index;
    m.label_space = result.label_space;
    m.average = average_accuracy(result);
    m.confusion = confusion_matrix(result, result.label_space);

    std::vector<int> base, incremental;
    for (int label : result.label_space) {
      (base_classes.count(label) ? base : incremental).push_back(label);
    }
    const auto counts = class_counts(result);
    m.base = base.empty() ? 0.0 : macro_accuracy(counts, base);
    if (!incremental.empty()) {
      m.incremental = macro_accuracy(counts, incremental);
      m.harmonic = harmonic_accuracy(result, base_classes);
    }
    averages.push_back(m.average);
    report.sessions.push_back(std::move(m));
  }
  if (averages.size() >= 2) report.pd = performance_drop(averages);
  return report;
}

std::string render_report_csv(const MetricsReport& report) {
  std::string out = "session,avg_acc,base_acc,incr_acc,harmonic_acc\n";
  for (const SessionMetrics& m : report.sessions) {
    out += std::to_string(m.index) + "," + format_pct(m.average) + "," + format_pct(m.base) + ",";
    out += m.incremental ? format_pct(*m.incremental) : "";
    out += ",";
    out += m.harmonic ? format_pct(*m.harmonic) : "";
    out += "\n";
  }
  if (report.pd) out += "pd," + format_pct(*report.pd) + "\n";
  return out;
}

std::string render_confusion_text(const MetricsReport& report) {
  std::string out;
  for (const SessionMetrics& m : report.sessions) {
    out += "session " + std::to_string(m.index) + "\n";
    out += "true\\pred";
    for (int label : m.label_space) out += "\t" + std::to_string(label);
    out += "\n";
    for (std::size_t r = 0; r < m.confusion.size(); ++r) {
      out += std::to_string(m.label_space[r]);
      for (long c : m.confusion[r]) out += "\t" + std::to_string(c);
      out += "\n";
    }
    out += "\n";
  }
  return out;
}

ParsedReport parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "session,avg_acc,base_acc,incr_acc,harmonic_acc") {
    throw Error(ErrorCode::SchemaMismatch, "unrecognized report header");
  }
  ParsedReport parsed;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.front() == "pd") {
      if (cells.size() < 2) throw Error(ErrorCode::SchemaMismatch, "malformed pd footer");
      parsed.pd = std::stod(cells[1]);
      continue;
    }
    if (cells.size() != 5) throw Error(ErrorCode::SchemaMismatch, "malformed report row: " + line);
    parsed.sessions.push_back(std::stoi(cells[0]));
    parsed.average.push_back(std::stod(cells[1]));
    parsed.harmonic.push_back(cells[4].empty() ? std::optional<double>{}
                                               : std::optional<double>{std::stod(cells[4])});
  }
  if (parsed.sessions.empty()) throw Error(ErrorCode::SchemaMismatch, "report has no session rows");
  return parsed;
}

std::string render_comparison(const std::vector<ParsedReport>& reports,
                              const std::vector<std::string>& names) {
  if (reports.empty()) throw Error(ErrorCode::EmptyInput, "no reports to compare");
  const std::size_t sessions = reports.front().sessions.size();
  for (const ParsedReport& r : reports) {
    if (r.sessions.size() != sessions) {
      throw Error(ErrorCode::SchemaMismatch, "reports cover different session counts");
    }
  }

  std::ostringstream out;
  out << "session";
  for (const std::string& name : names) out << "\tavg[" << name << "]";
  for (const std::string& name : names) out << "\tharm[" << name << "]";
  out << "\n";
  char buf[32];
  for (std::size_t s = 0; s < sessions; ++s) {
    out << reports.front().sessions[s];
    for (const ParsedReport& r : reports) {
      std::snprintf(buf, sizeof(buf), "%.1f", r.average[s]);
      out << "\t" << buf;
    }
    for (const ParsedReport& r : reports) {
      if (r.harmonic[s]) {
        std::snprintf(buf, sizeof(buf), "%.1f", *r.harmonic[s]);
        out << "\t" << buf;
      } else {
        out << "\t-";
      }
    }
    out << "\n";
  }
  out << "pd";
  for (const ParsedReport& r : reports) {
    if (r.pd) {
      std::snprintf(buf, sizeof(buf), "%.1f", *r.pd);
      out << "\t" << buf;
    } else {
      out << "\t-";
    }
  }
  for (std::size_t i = 0; i < reports.size(); ++i) out << "\t-";
  out << "\n";
  return out.str();
}

}  // namespace alice
