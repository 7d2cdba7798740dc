#pragma once

// Report serialization.
//
// Machine-readable form, one record per line, fields in a fixed order:
//
//   #nlab-report v1
//   config <key>=<value>                 (one line per RunConfig entry)
//   summary base=.. width=.. k=.. alignment=.. requested=.. horizon=.. truncated=0|1 discrepancy=..
//   row length=.. pattern=.. count=.. empirical=.. expected=.. deviation=..
//   curve horizon=.. discrepancy=..
//   verdict kind=.. heuristic=1 [pattern=.. horizon=.. deviation=.. tolerance=..]
//
// Floating-point values use the shortest decimal that round-trips.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlab/analyze.hpp"

namespace nlab {

/// Ordered key/value record of everything needed to re-run a command.
class RunConfig {
 public:
  void set(std::string key, std::string value);
  const std::string* get(std::string_view key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_double(double value);

std::string format_report(const RunConfig& config, const FrequencyReport& report,
                          const DiscrepancyCurve* curve = nullptr,
                          const NormalityVerdict* verdict = nullptr);

/// Human-readable table of the same content.
std::string format_report_table(const FrequencyReport& report,
                                const DiscrepancyCurve* curve = nullptr,
                                const NormalityVerdict* verdict = nullptr);

/// Reads back the config records of a machine-readable report.
RunConfig parse_report_config(std::string_view report_text);

}  // namespace nlab
