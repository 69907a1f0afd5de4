#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace awopt::experiment {

enum class Phase : std::uint8_t { kOffline = 0, kOnline = 1 };

std::string to_string(Phase phase);

struct MetricsRecord {
  std::uint64_t step = 0;         // cumulative gradient steps
  std::uint64_t transitions = 0;  // cumulative env transitions collected
  Phase phase = Phase::kOffline;
  double success_rate = 0.0;
  double action_select_ms = 0.0;

  bool operator==(const MetricsRecord&) const = default;
};

// First cumulative transition count at which the rolling mean (trailing
// window of 3 records) of the success rate reaches the threshold.
std::optional<std::uint64_t> transitions_to_threshold(
    const std::vector<MetricsRecord>& records, double threshold);

// CSV with columns step,transitions,phase,success_rate,action_select_ms.
// Unless include_timing is set the timing column is written as zero so that
// reruns with the same seed produce byte-identical files.
void write_metrics_csv(const std::vector<MetricsRecord>& records,
                       const std::string& path, bool include_timing);
std::vector<MetricsRecord> read_metrics_csv(const std::string& path);

}  // namespace awopt::experiment
