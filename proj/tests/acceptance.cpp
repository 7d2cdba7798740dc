// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 3 7        run the listed criteria
//
// Exit status is 0 only if every selected criterion passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "nlab/analyze.hpp"
#include "nlab/generators.hpp"
#include "nlab/recipes.hpp"
#include "nlab/stream_file.hpp"
#include "oracles.hpp"

using namespace nlab;

namespace {

// Pinned thresholds.
constexpr double kStarredSeconds = 10.0;
constexpr double kRecipeSeconds = 60.0;
constexpr std::uint64_t kHorizon = 1'000'000;
constexpr double kLemma1Tau = 0.02;
constexpr int kPeriodicWords = 200;
constexpr std::uint64_t kMaxWordPeriod = 64;
constexpr std::uint64_t kThicknessCasesMin = 10'000;
constexpr int kChunkStreams = 100;
constexpr std::size_t kChunkStreamLength = 100'000;
constexpr std::size_t kDeterminismDigits = 200'000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string summarize(const RecipeResult& r) {
  std::ostringstream out;
  for (const auto& m : r.measurements) {
    if (!m.pass) out << " " << m.name << "=" << format_double(m.value) << "(" << m.bound << ")";
  }
  if (!r.hypothesis_met) out << " hypothesis-not-met:" << r.hypothesis_note;
  return out.str();
}

Outcome recipe_outcome(const RecipeResult& r, double secs) {
  Outcome o;
  o.pass = r.passed && secs < kRecipeSeconds;
  std::ostringstream d;
  d << r.measurements.size() << " measurements, " << secs << " s";
  if (!r.passed) d << "; failing:" << summarize(r);
  for (const auto& m : r.measurements) {
    if (m.name.find("zero_block.frequency") != std::string::npos ||
        m.name.find("deviation[0,1]") != std::string::npos ||
        m.name.find("digit0.frequency") != std::string::npos) {
      d << "; " << m.name << "=" << format_double(m.value);
    }
  }
  o.detail = d.str();
  return o;
}

// 1. Starred closed form equals enumeration, exactly.
Outcome starred_closed_form() {
  const auto t0 = Clock::now();
  std::size_t cases = 0;
  std::size_t mismatches = 0;
  for (unsigned b = 2; b <= 3; ++b) {
    for (unsigned K = 1; K <= 3; ++K) {
      const auto nu = theorem3_measure(b, K);
      for (unsigned m = 1; m <= 2; ++m) {
        for (const auto& p : oracle::all_starred(b, K, m)) {
          ++cases;
          mismatches += starred_measure_closed_form(p) != starred_measure_bruteforce(nu, p);
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < kStarredSeconds,
          std::to_string(cases) + " patterns, " + std::to_string(mismatches) + " mismatches, " +
              std::to_string(secs) + " s"};
}

// 2. Perturbed block measure sums to one; b=2, K=2 weights.
Outcome perturbed_measure() {
  std::size_t bad = 0;
  std::size_t measures = 0;
  for (unsigned b = 2; b <= 5; ++b) {
    for (unsigned K = 1; K <= 8; ++K) {
      const auto nu = theorem3_measure(b, K);
      Rational total = 0;
      for (const auto& w : nu.exact_weights()) total += w;
      bad += total != 1;
      ++measures;
    }
  }
  const auto nu = theorem3_measure(2, 2);
  const bool weights = nu.exact_weight(0) == Rational(1, 8) && nu.exact_weight(1) == Rational(3, 8) &&
                       nu.exact_weight(2) == Rational(3, 8) && nu.exact_weight(3) == Rational(1, 8);
  return {bad == 0 && weights, std::to_string(measures) + " measures, " + std::to_string(bad) +
                                   " bad sums, b=2 K=2 weights " + (weights ? "ok" : "wrong")};
}

Outcome theorem1() {
  const auto t0 = Clock::now();
  Theorem1Params p;  // b=2, N=10^6, duplicate of Champernowne, tau 0.02
  const auto r = verify_theorem1(p);
  return recipe_outcome(r, seconds_since(t0));
}

Outcome theorem3() {
  const auto t0 = Clock::now();
  Theorem3Params p;  // b=2, K=2, 10^6 blocks, periodic:m=2,r=1, seed 7
  const auto r = verify_theorem3(p);
  return recipe_outcome(r, seconds_since(t0));
}

Outcome proposition2() {
  const auto t0 = Clock::now();
  Proposition2Params p;  // periodic evens, b=2, N=10^6, 10^5-digit round trip
  const auto r = verify_proposition2(p);
  return recipe_outcome(r, seconds_since(t0));
}

Outcome theorem2() {
  const auto t0 = Clock::now();
  Theorem2Params p;  // t in {2,4,8,16}, b=2, N=10^6
  const auto r = verify_theorem2(p);
  return recipe_outcome(r, seconds_since(t0));
}

// 7. Digit view and block view agree on Champernowne (consistent) and on
//    its duplicate (non-normal), k = 2, 3.
Outcome lemma1() {
  const auto uniform = BernoulliMeasure::uniform(Alphabet(2));
  VerdictOptions options;
  options.tau = kLemma1Tau;
  auto plain = std::make_shared<const std::vector<Digit>>(champernowne(2).take(kHorizon + 8));
  auto doubled =
      std::make_shared<const std::vector<Digit>>(duplicate(champernowne(2), 2).take(kHorizon + 8));
  Outcome o;
  std::ostringstream d;
  for (unsigned k : {2u, 3u}) {
    const auto c = lemma1_crosscheck(Alphabet(2), plain, uniform, k, kHorizon, options);
    const auto x = lemma1_crosscheck(Alphabet(2), doubled, uniform, k, kHorizon, options);
    const bool c_ok = c.agree && c.digit_view.kind == VerdictKind::consistent_with_normal;
    const bool x_ok = x.agree && x.digit_view.kind == VerdictKind::non_normal_witness;
    o.pass = o.pass && c_ok && x_ok;
    d << "k=" << k << " champernowne digit=" << to_string(c.digit_view.kind)
      << " (disc " << format_double(c.digit_view.final_report.discrepancy) << ")"
      << " block=" << to_string(c.block_view.kind)
      << " (disc " << format_double(c.block_view.final_report.discrepancy) << ")"
      << "; duplicate digit=" << to_string(x.digit_view.kind)
      << " block=" << to_string(x.block_view.kind) << "; ";
  }
  o.detail = d.str();
  return o;
}

// 8. Periodic-word counts and thickness checks against exact oracles.
Outcome exact_oracles() {
  std::mt19937_64 rng(20240601);
  std::size_t word_mismatch = 0;
  for (int w = 0; w < kPeriodicWords; ++w) {
    const unsigned b = 2 + rng() % 3;
    const std::uint64_t period = 1 + rng() % kMaxWordPeriod;
    std::vector<Digit> word(period);
    for (auto& x : word) x = static_cast<Digit>(rng() % b);
    const unsigned k = 1 + rng() % 3;
    const std::uint64_t reps = 50 + rng() % 50;
    std::vector<Digit> digits;
    while (digits.size() < reps * period + k) digits.insert(digits.end(), word.begin(), word.end());
    auto seq = DigitSequence::from_digits(Alphabet(b), std::move(digits));
    const auto report =
        count_patterns(seq, reps * period, k, BernoulliMeasure::uniform(Alphabet(b)));
    for (const auto& row : report.rows) {
      word_mismatch += row.count != reps * oracle::cyclic_occurrences(word, row.pattern);
    }
  }

  std::uint64_t cases = 0;
  std::uint64_t thick_mismatch = 0;
  for (std::uint64_t m = 1; m <= 12; ++m) {
    // All residue sets for small periods, a fixed random sample beyond.
    std::vector<std::vector<std::uint64_t>> sets;
    if (m <= 6) {
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        std::vector<std::uint64_t> r;
        for (std::uint64_t x = 0; x < m; ++x) {
          if (mask >> x & 1) r.push_back(x + 1);
        }
        sets.push_back(r);
      }
    } else {
      for (int i = 0; i < 40; ++i) sets.push_back(oracle::random_residues(m, rng));
    }
    for (const auto& r : sets) {
      for (unsigned K = 1; K <= 12; ++K) {
        for (unsigned L = 1; L <= 4; ++L) {
          ++cases;
          thick_mismatch +=
              thickness_violation(PeriodicSet{m, r}, K, L) != oracle::thickness_scan(m, r, K, L);
        }
      }
    }
  }
  return {word_mismatch == 0 && thick_mismatch == 0 && cases >= kThicknessCasesMin,
          std::to_string(kPeriodicWords) + " words, " + std::to_string(word_mismatch) +
              " count mismatches; " + std::to_string(cases) + " thickness cases, " +
              std::to_string(thick_mismatch) + " mismatches"};
}

// 9. Chunked counting equals sequential counting.
Outcome chunked_counting() {
  std::mt19937_64 rng(77);
  int mismatches = 0;
  for (int s = 0; s < kChunkStreams; ++s) {
    const unsigned b = 2 + rng() % 3;
    const unsigned k = 1 + rng() % 4;
    std::vector<Digit> digits(kChunkStreamLength);
    for (auto& x : digits) x = static_cast<Digit>(rng() % b);
    const std::uint64_t n = digits.size() - k + 1;
    const std::uint64_t chunk = k + rng() % 20000;
    const unsigned threads = 1 + rng() % 4;
    mismatches += count_windows_chunked(digits, b, k, n, chunk, threads) !=
                  count_windows(digits, b, k, n);
  }
  return {mismatches == 0,
          std::to_string(kChunkStreams) + " streams, " + std::to_string(mismatches) + " mismatches"};
}

// 10. Every generator kind reproduces byte-identical stream files.
Outcome determinism() {
  const char* specs[] = {
      "champernowne b=2",
      "champernowne b=10",
      "iid b=2 seed=42",
      "iid b=3 measure=1/6|1/3|1/2 seed=9",
      "concat b=2 measure=1/3|2/3",
      "concat b=2 K=2 measure=thm3",
      "thm3 b=2 K=2 seed=7",
      "thm3 b=3 K=2 L=2 inner=concat",
      "duplicate r=2 inner.kind=champernowne inner.b=2",
      "fill_zero sel=periodic:m=2,r=2 inner.kind=iid inner.b=2 inner.seed=1",
      "fill_zero sel=(evper:pre=3|7;m=3,r=1) inner.kind=champernowne inner.b=12",
  };
  int different = 0;
  int count = 0;
  for (const char* text : specs) {
    std::string files[2];
    for (auto& f : files) {
      const auto spec = GeneratorSpec::parse(text);
      StreamFile file;
      file.header.base = spec.alphabet().base();
      file.header.set_field("gen", spec.to_string());
      DigitSequence seq = spec.instantiate();
      if (seq.alphabet().is_block()) seq = block_flatten(std::move(seq));
      file.digits = seq.take(kDeterminismDigits);
      std::ostringstream out;
      write_stream(out, file);
      f = out.str();
    }
    different += files[0] != files[1];
    ++count;
  }
  return {different == 0, std::to_string(count) + " generator specs, " +
                              std::to_string(different) + " differing outputs"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const Criterion criteria[] = {
      {1, "starred measure closed form vs enumeration", starred_closed_form},
      {2, "perturbed block measure weights", perturbed_measure},
      {3, "duplicated Champernowne: witness at step 1, normal along steps 2-4", theorem1},
      {4, "perturbed-measure point: aligned [0,0] frequency and thin selection", theorem3},
      {5, "zero-filled stream: digit-0 frequency and round trip", proposition2},
      {6, "density family selections and zero-filled bound", theorem2},
      {7, "digit view and block view verdicts agree", lemma1},
      {8, "periodic-word counts and thickness vs brute force", exact_oracles},
      {9, "chunked counting equals sequential", chunked_counting},
      {10, "generator determinism", determinism},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
