#include "nlab/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace nlab {

namespace {

constexpr std::size_t kReadChunk = 1 << 16;

std::uint64_t table_size(std::uint64_t alphabet_size, unsigned k, std::uint64_t cap) {
  std::uint64_t size = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (size > cap / alphabet_size) {
      throw Error(ErrorCode::memory_budget,
                  "pattern table " + std::to_string(alphabet_size) + "^" + std::to_string(k) +
                      " exceeds the configured cap of " + std::to_string(cap) + " entries");
    }
    size *= alphabet_size;
  }
  return size;
}

void check_length(unsigned k) {
  if (k < 1) throw Error(ErrorCode::parameter, "pattern length k must be at least 1");
}

// Adds every complete length-k window of `digits` to `table`.
void add_windows(std::span<const Digit> digits, std::uint64_t alphabet_size, unsigned k,
                 std::uint64_t modulus, std::vector<std::uint64_t>& table) {
  std::uint64_t code = 0;
  std::size_t seen = 0;
  for (Digit d : digits) {
    code = (code * alphabet_size + d) % modulus;
    if (++seen >= k) ++table[code];
  }
}

// Absolute deviations of all rows of a report, in row order.
std::vector<double> abs_deviations(const FrequencyReport& r) {
  std::vector<double> out;
  out.reserve(r.rows.size());
  for (const auto& row : r.rows) out.push_back(std::abs(row.deviation));
  return out;
}

}  // namespace

const char* to_string(VerdictKind kind) noexcept {
  return kind == VerdictKind::consistent_with_normal ? "consistent-with-normal"
                                                     : "non-normal-witness";
}

// ---------------------------------------------------------------- counting

WindowCounter::WindowCounter(std::uint64_t alphabet_size, unsigned k)
    : alphabet_size_(alphabet_size), k_(k) {
  check_length(k);
  modulus_ = table_size(alphabet_size, k, ~std::uint64_t{0} / alphabet_size);
  counts_.assign(modulus_, 0);
}

void WindowCounter::push(std::span<const Digit> digits) {
  for (Digit d : digits) {
    code_ = (code_ * alphabet_size_ + d) % modulus_;
    if (++seen_ >= k_) {
      ++counts_[code_];
      ++windows_;
    }
  }
}

std::vector<std::uint64_t> count_windows(std::span<const Digit> digits, std::uint64_t alphabet_size,
                                         unsigned k, std::uint64_t n) {
  check_length(k);
  if (n > 0 && digits.size() < n + k - 1) {
    throw Error(ErrorCode::stream, "need " + std::to_string(n + k - 1) + " digits, have " +
                                       std::to_string(digits.size()));
  }
  WindowCounter counter(alphabet_size, k);
  if (n > 0) counter.push(digits.first(static_cast<std::size_t>(n + k - 1)));
  return counter.counts();
}

std::vector<std::uint64_t> count_windows_chunked(std::span<const Digit> digits,
                                                 std::uint64_t alphabet_size, unsigned k,
                                                 std::uint64_t n, std::uint64_t chunk,
                                                 unsigned threads) {
  check_length(k);
  if (chunk < 1) throw Error(ErrorCode::parameter, "chunk size must be positive");
  if (n > 0 && digits.size() < n + k - 1) {
    throw Error(ErrorCode::stream, "need " + std::to_string(n + k - 1) + " digits, have " +
                                       std::to_string(digits.size()));
  }
  // Chunk c covers start positions [c*chunk, min(n, (c+1)*chunk)) (0-based)
  // and reads k-1 digits past its end.
  const std::uint64_t chunks = (n + chunk - 1) / chunk;
  threads = std::max(1u, threads);
  const std::uint64_t entries = table_size(alphabet_size, k, ~std::uint64_t{0} / alphabet_size);
  std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(entries, 0));
  auto work = [&](unsigned t) {
    for (std::uint64_t c = t; c < chunks; c += threads) {
      const std::uint64_t begin = c * chunk;
      const std::uint64_t end = std::min(n, begin + chunk);
      add_windows(digits.subspan(static_cast<std::size_t>(begin),
                                 static_cast<std::size_t>(end - begin + k - 1)),
                  alphabet_size, k, entries, partial[t]);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  std::vector<std::uint64_t> total(entries, 0);
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < p.size(); ++i) total[i] += p[i];
  }
  return total;
}

// ----------------------------------------------------------------- reports

const PatternRow& FrequencyReport::row(std::span<const Digit> pattern) const {
  if (pattern.empty() || pattern.size() > max_length) {
    throw Error(ErrorCode::invalid_pattern, "pattern length outside report range");
  }
  const std::uint64_t a = alphabet.size();
  std::uint64_t offset = 0;
  std::uint64_t width = 1;
  for (std::size_t j = 1; j < pattern.size(); ++j) {
    width *= a;
    offset += width;
  }
  std::uint64_t code = 0;
  for (Digit d : pattern) {
    if (d >= a) throw Error(ErrorCode::invalid_pattern, "digit outside alphabet");
    code = code * a + d;
  }
  return rows.at(static_cast<std::size_t>(offset + code));
}

FrequencyReport make_report(const BernoulliMeasure& measure, unsigned k, std::uint64_t horizon,
                            const std::vector<std::uint64_t>& window_counts) {
  const std::uint64_t a = measure.alphabet().size();
  FrequencyReport report;
  report.alphabet = measure.alphabet();
  report.max_length = k;
  report.requested_horizon = horizon;
  report.horizon = horizon;

  // Marginalize the length-k table down to every shorter length.
  std::vector<std::vector<std::uint64_t>> counts(k + 1);
  counts[k] = window_counts;
  for (unsigned j = k; j-- > 1;) {
    counts[j].assign(counts[j + 1].size() / a, 0);
    for (std::size_t c = 0; c < counts[j + 1].size(); ++c) counts[j][c / a] += counts[j + 1][c];
  }
  std::vector<double> expected{1.0};
  const double n = static_cast<double>(horizon);
  for (unsigned j = 1; j <= k; ++j) {
    std::vector<double> next(expected.size() * a);
    for (std::size_t c = 0; c < next.size(); ++c) {
      next[c] = expected[c / a] * measure.weight(static_cast<Digit>(c % a));
    }
    expected = std::move(next);
    for (std::size_t c = 0; c < counts[j].size(); ++c) {
      PatternRow row;
      row.pattern.resize(j);
      std::uint64_t rest = c;
      for (unsigned i = j; i-- > 0;) {
        row.pattern[i] = static_cast<Digit>(rest % a);
        rest /= a;
      }
      row.count = counts[j][c];
      row.empirical = horizon ? static_cast<double>(row.count) / n : 0.0;
      row.expected = expected[c];
      row.deviation = row.empirical - row.expected;
      report.discrepancy = std::max(report.discrepancy, std::abs(row.deviation));
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

FrequencyReport count_patterns(DigitSequence& seq, std::uint64_t n, unsigned k,
                               const BernoulliMeasure& measure, const CountOptions& options) {
  check_length(k);
  if (n < 1) throw Error(ErrorCode::parameter, "horizon N must be at least 1");
  if (!(seq.alphabet() == measure.alphabet())) {
    throw Error(ErrorCode::measure_mismatch, "sequence over " + seq.alphabet().to_string() +
                                                 " analyzed with measure over " +
                                                 measure.alphabet().to_string());
  }
  const std::uint64_t a = seq.alphabet().size();
  table_size(a, k, options.max_table_entries);
  const std::uint64_t need = n + k - 1;

  std::vector<std::uint64_t> counts;
  std::uint64_t horizon = 0;
  if (options.threads > 1) {
    std::vector<Digit> digits = seq.take(static_cast<std::size_t>(need));
    horizon = digits.size() >= k ? digits.size() - k + 1 : 0;
    const std::uint64_t chunk = std::max<std::uint64_t>(k, (horizon + options.threads - 1) / options.threads);
    counts = count_windows_chunked(digits, a, k, horizon, chunk, options.threads);
  } else {
    WindowCounter counter(a, k);
    std::vector<Digit> buffer(kReadChunk);
    std::uint64_t read = 0;
    while (read < need) {
      const auto want = static_cast<std::size_t>(std::min<std::uint64_t>(need - read, kReadChunk));
      const std::size_t got = seq.read(std::span<Digit>(buffer.data(), want));
      counter.push(std::span<const Digit>(buffer.data(), got));
      read += got;
      if (got < want) break;
    }
    horizon = counter.windows();
    counts = counter.counts();
  }
  FrequencyReport report = make_report(measure, k, horizon, counts);
  report.requested_horizon = n;
  report.truncated = horizon < n;
  return report;
}

double discrepancy(const FrequencyReport& report) {
  double d = 0;
  for (const auto& row : report.rows) d = std::max(d, std::abs(row.deviation));
  return d;
}

StarredCount count_starred_aligned(DigitSequence& blocks, const StarredPattern& pattern,
                                   std::uint64_t n) {
  if (!(blocks.alphabet() == pattern.block_alphabet())) {
    throw Error(ErrorCode::width_mismatch, "starred pattern over " +
                                               pattern.block_alphabet().to_string() +
                                               " applied to stream over " +
                                               blocks.alphabet().to_string());
  }
  const std::size_t m = pattern.length();
  const std::uint64_t a = blocks.alphabet().size();
  std::vector<std::vector<char>> match(m, std::vector<char>(a));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::uint64_t c = 0; c < a; ++c) match[j][c] = pattern.matches(j, static_cast<Digit>(c));
  }
  std::vector<Digit> window = blocks.take(static_cast<std::size_t>(n + m - 1));
  StarredCount result;
  result.horizon = window.size() >= m ? std::min<std::uint64_t>(n, window.size() - m + 1) : 0;
  for (std::uint64_t i = 0; i < result.horizon; ++i) {
    bool hit = true;
    for (std::size_t j = 0; j < m && hit; ++j) hit = match[j][window[i + j]];
    result.count += hit;
  }
  result.frequency = result.horizon ? double(result.count) / double(result.horizon) : 0.0;
  return result;
}

// ---------------------------------------------------------------- verdicts

std::vector<std::uint64_t> geometric_schedule(std::uint64_t final_horizon, unsigned points) {
  if (final_horizon < 1) throw Error(ErrorCode::parameter, "final horizon must be positive");
  std::vector<std::uint64_t> out;
  if (points < 2) return {final_horizon};
  for (unsigned i = 0; i < points; ++i) {
    const double exponent = 3.0 * (1.0 - double(i) / double(points - 1));
    auto h = static_cast<std::uint64_t>(std::llround(double(final_horizon) / std::pow(10.0, exponent)));
    h = std::clamp<std::uint64_t>(h, 1, final_horizon);
    if (out.empty() || h > out.back()) out.push_back(h);
  }
  if (out.back() != final_horizon) out.push_back(final_horizon);
  return out;
}

NormalityVerdict normality_verdict(DigitSequence& seq, const BernoulliMeasure& measure, unsigned k,
                                   std::span<const std::uint64_t> schedule,
                                   const VerdictOptions& options) {
  if (schedule.empty()) throw Error(ErrorCode::parameter, "schedule must be nonempty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1 || (i && schedule[i] <= schedule[i - 1])) {
      throw Error(ErrorCode::parameter, "schedule must be strictly increasing and positive");
    }
  }
  check_length(k);
  if (!(seq.alphabet() == measure.alphabet())) {
    throw Error(ErrorCode::measure_mismatch, "sequence over " + seq.alphabet().to_string() +
                                                 " analyzed with measure over " +
                                                 measure.alphabet().to_string());
  }
  const std::uint64_t a = seq.alphabet().size();
  table_size(a, k, options.counting.max_table_entries);

  NormalityVerdict verdict;
  std::vector<std::vector<double>> deviations;
  WindowCounter counter(a, k);
  std::vector<Digit> buffer(kReadChunk);
  bool ended = false;
  std::uint64_t read = 0;
  for (std::uint64_t checkpoint : schedule) {
    while (!ended && counter.windows() < checkpoint) {
      // Digits still needed so that `checkpoint` windows are complete.
      const std::uint64_t need = checkpoint + k - 1 - read;
      const auto want = static_cast<std::size_t>(std::min<std::uint64_t>(need, kReadChunk));
      const std::size_t got = seq.read(std::span<Digit>(buffer.data(), want));
      counter.push(std::span<const Digit>(buffer.data(), got));
      read += got;
      if (got < want) ended = true;
    }
    const std::uint64_t horizon = std::min(counter.windows(), checkpoint);
    if (horizon == 0) break;
    FrequencyReport report = make_report(measure, k, horizon, counter.counts());
    report.requested_horizon = schedule.back();
    report.truncated = horizon < schedule.back();
    verdict.curve.push_back({horizon, report.discrepancy});
    deviations.push_back(abs_deviations(report));
    verdict.final_report = std::move(report);
    if (horizon < checkpoint) break;
  }
  if (deviations.empty()) {
    throw Error(ErrorCode::stream, "stream too short to analyze patterns of length " +
                                       std::to_string(k));
  }

  const auto& final_dev = deviations.back();
  const auto& mid_dev = deviations[(deviations.size() - 1) / 2];
  const double n_final = static_cast<double>(verdict.curve.back().horizon);
  const auto& rows = verdict.final_report.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double p = rows[i].expected;
    const double tol = options.tau ? *options.tau
                                   : std::max(options.tau_floor,
                                              options.sigmas * std::sqrt(p * (1 - p) / n_final));
    const bool exceeds = final_dev[i] > tol;
    const bool shrinking = final_dev[i] <= (1.0 - options.required_decrease) * mid_dev[i];
    if (exceeds && !shrinking && (!verdict.witness || final_dev[i] > std::abs(verdict.witness->deviation))) {
      verdict.witness = NormalityWitness{rows[i].pattern, verdict.curve.back().horizon,
                                         rows[i].deviation, tol};
    }
  }
  verdict.kind = verdict.witness ? VerdictKind::non_normal_witness
                                 : VerdictKind::consistent_with_normal;
  return verdict;
}

std::vector<WallCell> wall_matrix(const Alphabet& alphabet,
                                  std::shared_ptr<const std::vector<Digit>> digits,
                                  const BernoulliMeasure& measure, unsigned k,
                                  std::span<const std::uint64_t> offsets,
                                  std::span<const std::uint64_t> steps, std::uint64_t n,
                                  const VerdictOptions& options) {
  std::vector<WallCell> cells;
  const auto schedule = geometric_schedule(n);
  for (auto step : steps) {
    for (auto offset : offsets) {
      DigitSequence selected = select(DigitSequence::view(alphabet, digits),
                                      SelectionSequence::arithmetic(offset, step));
      cells.push_back({offset, step, normality_verdict(selected, measure, k, schedule, options)});
    }
  }
  return cells;
}

Lemma1Result lemma1_crosscheck(const Alphabet& alphabet,
                               std::shared_ptr<const std::vector<Digit>> digits,
                               const BernoulliMeasure& measure, unsigned k, std::uint64_t n,
                               const VerdictOptions& options) {
  if (k < 2) throw Error(ErrorCode::parameter, "lemma1 cross-check needs k >= 2");
  Lemma1Result result;
  {
    DigitSequence seq = DigitSequence::view(alphabet, digits);
    result.digit_view = normality_verdict(seq, measure, k, geometric_schedule(n), options);
  }
  {
    DigitSequence blocks = block_recode(DigitSequence::view(alphabet, digits), k);
    const BernoulliMeasure blocked = block_measure(measure, k);
    result.block_view =
        normality_verdict(blocks, blocked, 1, geometric_schedule(std::max<std::uint64_t>(1, n / k)),
                          options);
  }
  result.agree = result.digit_view.kind == result.block_view.kind;
  return result;
}

}  // namespace nlab
