#pragma once

// Streaming string-frequency analysis against a Bernoulli target measure.
//
// Occurrences are counted by start position i in 1..N and overlap freely;
// the counter reads N+k-1 digits so that windows starting near N are
// complete. With that convention the counts of every length j <= k sum to
// exactly N.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlab/selectors.hpp"
#include "nlab/sequence.hpp"

namespace nlab {

struct CountOptions {
  /// Cap on b^k, the number of length-k window codes held densely.
  std::uint64_t max_table_entries = std::uint64_t{1} << 26;
  /// >1 materializes the prefix and counts chunks on worker threads.
  unsigned threads = 1;
};

/// Counts of length-k windows (row-major codes) starting at positions
/// 1..N of `digits`. Requires digits.size() >= N + k - 1.
std::vector<std::uint64_t> count_windows(std::span<const Digit> digits, std::uint64_t alphabet_size,
                                         unsigned k, std::uint64_t n);

/// Same counts, computed over consecutive chunks of `chunk` start positions,
/// each reading k-1 digits of overlap, on up to `threads` workers.
std::vector<std::uint64_t> count_windows_chunked(std::span<const Digit> digits,
                                                 std::uint64_t alphabet_size, unsigned k,
                                                 std::uint64_t n, std::uint64_t chunk,
                                                 unsigned threads);

/// Incremental length-k window counter over a digit stream.
class WindowCounter {
 public:
  WindowCounter(std::uint64_t alphabet_size, unsigned k);

  /// Feeds digits; a window is counted as soon as its last digit arrives.
  void push(std::span<const Digit> digits);

  std::uint64_t windows() const noexcept { return windows_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

 private:
  std::uint64_t alphabet_size_;
  unsigned k_;
  std::uint64_t modulus_;
  std::uint64_t code_ = 0;
  std::uint64_t seen_ = 0;
  std::uint64_t windows_ = 0;
  std::vector<std::uint64_t> counts_;
};

struct PatternRow {
  std::vector<Digit> pattern;
  std::uint64_t count = 0;
  double empirical = 0;
  double expected = 0;
  double deviation = 0;  // empirical - expected
};

struct FrequencyReport {
  Alphabet alphabet{2};
  unsigned max_length = 1;
  std::uint64_t requested_horizon = 0;
  std::uint64_t horizon = 0;  // N actually used
  bool truncated = false;
  std::string alignment = "unaligned";
  /// Ordered by length, then lexicographically.
  std::vector<PatternRow> rows;
  double discrepancy = 0;

  const PatternRow& row(std::span<const Digit> pattern) const;
};

/// Builds the report for every pattern of length 1..k from a table of
/// length-k window counts.
FrequencyReport make_report(const BernoulliMeasure& measure, unsigned k, std::uint64_t horizon,
                            const std::vector<std::uint64_t>& window_counts);

/// Counts every pattern of length 1..k over positions 1..N. A stream that
/// ends early yields a truncated report over the largest complete horizon.
FrequencyReport count_patterns(DigitSequence& seq, std::uint64_t n, unsigned k,
                               const BernoulliMeasure& measure, const CountOptions& options = {});

/// max |empirical - expected| over all rows.
double discrepancy(const FrequencyReport& report);

struct StarredCount {
  std::uint64_t count = 0;
  std::uint64_t horizon = 0;
  double frequency = 0;
};

/// Occurrences of a starred pattern at block positions 1..N of a block
/// stream (overlapping; stars match any digit).
StarredCount count_starred_aligned(DigitSequence& blocks, const StarredPattern& pattern,
                                   std::uint64_t n);

struct CurvePoint {
  std::uint64_t horizon;
  double discrepancy;
};
using DiscrepancyCurve = std::vector<CurvePoint>;

/// `points` horizons spaced geometrically from final/1000 to final.
std::vector<std::uint64_t> geometric_schedule(std::uint64_t final_horizon, unsigned points = 7);

struct VerdictOptions {
  /// Fixed tolerance for every pattern. When unset, a pattern of expected
  /// frequency p gets max(tau_floor, sigmas * sqrt(p (1-p) / N_final)).
  std::optional<double> tau;
  double sigmas = 4.0;
  double tau_floor = 0.005;
  /// A deviation still counts as a witness unless it shrank by at least
  /// this fraction between the mid-schedule and final checkpoints.
  double required_decrease = 0.25;
  CountOptions counting;
};

enum class VerdictKind { consistent_with_normal, non_normal_witness };

const char* to_string(VerdictKind kind) noexcept;

struct NormalityWitness {
  std::vector<Digit> pattern;
  std::uint64_t horizon = 0;
  double deviation = 0;
  double tolerance = 0;
};

/// Finite-horizon heuristic; no finite prefix decides normality.
struct NormalityVerdict {
  VerdictKind kind = VerdictKind::consistent_with_normal;
  std::optional<NormalityWitness> witness;
  DiscrepancyCurve curve;
  FrequencyReport final_report;
};

/// Evaluates the report at each checkpoint of `schedule` in one pass. A
/// pattern is a witness when its |deviation| exceeds its tolerance at the
/// final checkpoint and has not shrunk by `required_decrease` since the
/// mid-schedule checkpoint; the largest such deviation is reported.
NormalityVerdict normality_verdict(DigitSequence& seq, const BernoulliMeasure& measure, unsigned k,
                                   std::span<const std::uint64_t> schedule,
                                   const VerdictOptions& options = {});

struct WallCell {
  std::uint64_t offset;  // k in a_k, a_{k+l}, ...
  std::uint64_t step;    // l
  NormalityVerdict verdict;
};

/// Runs select + normality_verdict for every (offset, step) pair on a
/// shared digit buffer. Each selected stream is analyzed to horizon N.
std::vector<WallCell> wall_matrix(const Alphabet& alphabet,
                                  std::shared_ptr<const std::vector<Digit>> digits,
                                  const BernoulliMeasure& measure, unsigned k,
                                  std::span<const std::uint64_t> offsets,
                                  std::span<const std::uint64_t> steps, std::uint64_t n,
                                  const VerdictOptions& options = {});

struct Lemma1Result {
  NormalityVerdict digit_view;  // patterns of length <= k over digits
  NormalityVerdict block_view;  // single width-k blocks
  bool agree = false;
};

/// Checks a sequence against (mu, T) with patterns up to length k, and its
/// width-k block recoding against block_measure(mu, k) with single blocks.
/// The block view uses horizon floor(N/k) so both read the same digits.
Lemma1Result lemma1_crosscheck(const Alphabet& alphabet,
                               std::shared_ptr<const std::vector<Digit>> digits,
                               const BernoulliMeasure& measure, unsigned k, std::uint64_t n,
                               const VerdictOptions& options = {});

}  // namespace nlab
