#pragma once

// Digit-sequence generators: normal points for a Bernoulli measure and the
// non-normal constructions built from them.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "nlab/selectors.hpp"
#include "nlab/sequence.hpp"

namespace nlab {

/// Concatenated base-b expansions of 1, 2, 3, ...
DigitSequence champernowne(unsigned base);

/// I.i.d. digits drawn from `measure`.
///
/// The engine is std::mt19937_64 seeded with `seed`. Each draw takes the top
/// 53 bits r of one engine output and returns the least digit d with
/// r < T_d, where T_d = floor(2^53 * (lambda_0 + ... + lambda_d)) is computed
/// exactly for exact measures. The last threshold is forced to 2^53, so
/// digit intervals are half-open and zero-weight digits are never drawn.
DigitSequence iid_sampled(const BernoulliMeasure& measure, std::uint64_t seed);

/// Deterministic concatenation in stages L = 1, 2, ...: every string s of
/// length L is emitted ceil(mu(C_s) * A^(growth*L)) times, A the alphabet
/// size. Within a stage the strings are emitted round-robin: pass p writes,
/// in lexicographic order, every string whose count exceeds p.
/// Requires an exact measure.
DigitSequence weighted_concat(const BernoulliMeasure& measure, unsigned growth = 2);

/// Repetition count of `string_code` (a length-L string over the measure's
/// alphabet, row-major) in stage L of weighted_concat.
std::uint64_t weighted_concat_count(const BernoulliMeasure& measure, unsigned growth,
                                    unsigned stage, std::uint64_t string_code);

/// Flattens a block stream drawn from theorem3_measure(b, K) to base-b
/// digits. `offset` L > 1 shifts the block grid by prefixing L-1 zeros.
/// Throws measure_mismatch if `inner_measure` is not theorem3_measure(b, K).
DigitSequence theorem3_point(unsigned base, unsigned width, DigitSequence inner,
                             const BernoulliMeasure& inner_measure, unsigned offset = 1);

/// Each digit repeated r >= 2 times.
DigitSequence duplicate(DigitSequence inner, unsigned repeat);

/// Position n carries the next inner digit when n is selected, else 0. A
/// finite inner stream ends the output at the first selected position it
/// cannot fill.
DigitSequence fill_zero(DigitSequence inner, const SelectionSequence& selection);

// ------------------------------------------------------------------ specs

/// Measure description used by the text specs:
///   "uniform", "thm3", "diagonal", or weights "1/3|2/3" / "0.3|0.7".
/// Decimal weights are read as exact rationals.
struct MeasureSpec {
  unsigned base = 2;
  unsigned width = 1;
  std::string text = "uniform";

  BernoulliMeasure build() const;
};

struct GeneratorSpec;

struct ChampernowneSpec {
  unsigned base = 10;
};

struct IidSpec {
  MeasureSpec measure;
  std::uint64_t seed = 0;
};

struct WeightedConcatSpec {
  MeasureSpec measure;
  unsigned growth = 2;
};

struct Theorem3Spec {
  unsigned base = 2;
  unsigned width = 2;
  unsigned offset = 1;
  std::shared_ptr<const GeneratorSpec> inner;  // iid or concat over thm3
};

struct DuplicateSpec {
  std::shared_ptr<const GeneratorSpec> inner;
  unsigned repeat = 2;
};

struct FillZeroSpec {
  std::shared_ptr<const GeneratorSpec> inner;
  SelectionSequence selection = SelectionSequence::periodic(2, {2});
};

/// Serializable description of a generator; the same spec always yields the
/// same digits.
///
/// Text form is whitespace- or ';'-separated key=value pairs, e.g.
///   kind=champernowne b=2
///   kind=iid b=2 measure=1/3|2/3 seed=42
///   kind=concat b=2 K=2 measure=thm3
///   kind=thm3 b=2 K=2 seed=7            (inner defaults to iid over thm3)
///   kind=duplicate r=2 inner.kind=champernowne inner.b=2
///   kind=fill_zero sel=periodic:m=2,r=2 inner.kind=iid inner.b=2 inner.seed=1
/// A leading bare word is taken as the kind.
struct GeneratorSpec {
  std::variant<ChampernowneSpec, IidSpec, WeightedConcatSpec, Theorem3Spec, DuplicateSpec,
               FillZeroSpec>
      kind;

  static GeneratorSpec parse(std::string_view text);

  /// Canonical ';'-separated text; parse(to_string()) round-trips.
  std::string to_string() const;

  /// Alphabet of the produced digits.
  Alphabet alphabet() const;

  /// Measure the stream is (empirically) normal for, when there is one.
  std::optional<BernoulliMeasure> target_measure() const;

  DigitSequence instantiate() const;
};

}  // namespace nlab
