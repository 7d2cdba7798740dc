#include "nlab/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace nlab {

namespace {

std::string compact_pattern(const Alphabet& alphabet, std::span<const Digit> digits) {
  std::string s = Pattern(std::vector<Digit>(digits.begin(), digits.end())).to_string(alphabet);
  return s;
}

}  // namespace

void RunConfig::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

const std::string* RunConfig::get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

std::string format_report(const RunConfig& config, const FrequencyReport& report,
                          const DiscrepancyCurve* curve, const NormalityVerdict* verdict) {
  std::ostringstream out;
  out << "#nlab-report v1\n";
  for (const auto& [k, v] : config.entries()) out << "config " << k << '=' << v << '\n';
  out << "summary base=" << report.alphabet.base() << " width=" << report.alphabet.width()
      << " k=" << report.max_length << " alignment=" << report.alignment
      << " requested=" << report.requested_horizon << " horizon=" << report.horizon
      << " truncated=" << (report.truncated ? 1 : 0)
      << " discrepancy=" << format_double(report.discrepancy) << '\n';
  for (const auto& row : report.rows) {
    out << "row length=" << row.pattern.size()
        << " pattern=" << compact_pattern(report.alphabet, row.pattern) << " count=" << row.count
        << " empirical=" << format_double(row.empirical)
        << " expected=" << format_double(row.expected)
        << " deviation=" << format_double(row.deviation) << '\n';
  }
  if (curve) {
    for (const auto& p : *curve) {
      out << "curve horizon=" << p.horizon << " discrepancy=" << format_double(p.discrepancy)
          << '\n';
    }
  }
  if (verdict) {
    out << "verdict kind=" << to_string(verdict->kind) << " heuristic=1";
    if (verdict->witness) {
      const auto& w = *verdict->witness;
      out << " pattern=" << compact_pattern(report.alphabet, w.pattern) << " horizon=" << w.horizon
          << " deviation=" << format_double(w.deviation)
          << " tolerance=" << format_double(w.tolerance);
    }
    out << '\n';
  }
  return out.str();
}

std::string format_report_table(const FrequencyReport& report, const DiscrepancyCurve* curve,
                                const NormalityVerdict* verdict) {
  std::ostringstream out;
  char line[256];
  out << "alphabet " << report.alphabet.to_string() << ", patterns up to length "
      << report.max_length << ", N = " << report.horizon;
  if (report.truncated) out << " (truncated; requested " << report.requested_horizon << ")";
  out << '\n';
  std::snprintf(line, sizeof line, "%-24s %12s %12s %12s %12s\n", "pattern", "count",
                "empirical", "expected", "deviation");
  out << line;
  for (const auto& row : report.rows) {
    std::snprintf(line, sizeof line, "%-24s %12llu %12.6f %12.6f %+12.6f\n",
                  compact_pattern(report.alphabet, row.pattern).c_str(),
                  static_cast<unsigned long long>(row.count), row.empirical, row.expected,
                  row.deviation);
    out << line;
  }
  out << "discrepancy " << format_double(report.discrepancy) << '\n';
  if (curve && !curve->empty()) {
    out << "curve:";
    for (const auto& p : *curve) out << "  N=" << p.horizon << ":" << format_double(p.discrepancy);
    out << '\n';
  }
  if (verdict) {
    out << "verdict (heuristic): " << to_string(verdict->kind);
    if (verdict->witness) {
      out << " pattern " << compact_pattern(report.alphabet, verdict->witness->pattern)
          << " deviation " << format_double(verdict->witness->deviation) << " > tolerance "
          << format_double(verdict->witness->tolerance);
    }
    out << '\n';
  }
  return out.str();
}

RunConfig parse_report_config(std::string_view text) {
  RunConfig config;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.substr(0, 7) != "config ") continue;
    line.remove_prefix(7);
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::parse, "bad config record");
    config.set(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
  }
  return config;
}

}  // namespace nlab
