#include "awopt/experiment/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "awopt/errors.hpp"

namespace awopt::experiment {

std::string to_string(Phase phase) {
  return phase == Phase::kOffline ? "offline" : "online";
}

std::optional<std::uint64_t> transitions_to_threshold(
    const std::vector<MetricsRecord>& records, double threshold) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::size_t window_start = i >= 2 ? i - 2 : 0;
    double sum = 0.0;
    for (std::size_t j = window_start; j <= i; ++j) sum += records[j].success_rate;
    const double smoothed = sum / static_cast<double>(i - window_start + 1);
    if (smoothed >= threshold) return records[i].transitions;
  }
  return std::nullopt;
}

void write_metrics_csv(const std::vector<MetricsRecord>& records,
                       const std::string& path, bool include_timing) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw UsageError("write_metrics_csv: cannot open " + path);
  out << "step,transitions,phase,success_rate,action_select_ms\n";
  char line[160];
  for (const MetricsRecord& r : records) {
    std::snprintf(line, sizeof(line), "%llu,%llu,%s,%.6f,%.4f\n",
                  static_cast<unsigned long long>(r.step),
                  static_cast<unsigned long long>(r.transitions),
                  to_string(r.phase).c_str(), r.success_rate,
                  include_timing ? r.action_select_ms : 0.0);
    out << line;
  }
  if (!out) throw UsageError("write_metrics_csv: write failed for " + path);
}

std::vector<MetricsRecord> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("read_metrics_csv: cannot open " + path);
  std::vector<MetricsRecord> records;
  std::string line;
  if (!std::getline(in, line)) throw UsageError("read_metrics_csv: empty file " + path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    MetricsRecord r;
    std::getline(ss, field, ',');
    r.step = std::stoull(field);
    std::getline(ss, field, ',');
    r.transitions = std::stoull(field);
    std::getline(ss, field, ',');
    if (field == "offline") r.phase = Phase::kOffline;
    else if (field == "online") r.phase = Phase::kOnline;
    else throw UsageError("read_metrics_csv: bad phase '" + field + "'");
    std::getline(ss, field, ',');
    r.success_rate = std::stod(field);
    std::getline(ss, field, ',');
    r.action_select_ms = std::stod(field);
    records.push_back(r);
  }
  return records;
}

}  // namespace awopt::experiment
