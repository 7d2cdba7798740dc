#pragma once

// Digit alphabets, Bernoulli product measures, cylinder and starred patterns.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nlab/error.hpp"

namespace nlab {

using Digit = std::uint32_t;
using Rational = boost::multiprecision::cpp_rational;

/// Largest block alphabet we are willing to index densely.
inline constexpr std::uint64_t kMaxAlphabetSize = std::uint64_t{1} << 30;

/// Digits {0, ..., b-1}, or width-K blocks of them. A block digit is the
/// row-major base-b integer of its K components, first component most
/// significant.
class Alphabet {
 public:
  explicit Alphabet(unsigned base, unsigned width = 1);

  unsigned base() const noexcept { return base_; }
  unsigned width() const noexcept { return width_; }
  std::uint64_t size() const noexcept { return size_; }
  bool is_block() const noexcept { return width_ > 1; }

  bool contains(Digit d) const noexcept { return d < size_; }

  /// Same base, width multiplied by k.
  Alphabet widened(unsigned k) const;
  Alphabet digits() const { return Alphabet(base_); }

  Digit encode(std::span<const Digit> components) const;
  std::vector<Digit> decode(Digit block) const;
  void decode_into(Digit block, std::span<Digit> out) const;

  std::string to_string() const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  unsigned base_;
  unsigned width_;
  std::uint64_t size_;
};

/// A finite string [d_1, ..., d_k] over some alphabet, k >= 1.
class Pattern {
 public:
  explicit Pattern(std::vector<Digit> digits);

  std::span<const Digit> digits() const noexcept { return digits_; }
  std::size_t length() const noexcept { return digits_.size(); }
  Digit operator[](std::size_t i) const { return digits_[i]; }

  /// Throws invalid_pattern if some digit is outside `alphabet`.
  void check(const Alphabet& alphabet) const;

  std::string to_string(const Alphabet& alphabet) const;

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  std::vector<Digit> digits_;
};

/// Product measure on strings over `alphabet` given by digit weights.
///
/// Weights are held as doubles for the counting paths and, when the measure
/// was built from exact data, also as rationals. Exact measures sum to
/// exactly 1; float-only measures to within 1e-12.
class BernoulliMeasure {
 public:
  static BernoulliMeasure uniform(const Alphabet& alphabet);
  static BernoulliMeasure exact(const Alphabet& alphabet,
                                std::vector<Rational> weights);
  static BernoulliMeasure approximate(const Alphabet& alphabet,
                                      std::vector<double> weights);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  bool is_exact() const noexcept { return !exact_.empty(); }

  double weight(Digit d) const { return weights_.at(d); }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Throws unsupported_construction on a float-only measure.
  const Rational& exact_weight(Digit d) const;
  std::span<const Rational> exact_weights() const;

  /// Exact comparison when both sides are exact, otherwise within 1e-12.
  bool same_as(const BernoulliMeasure& other) const;

 private:
  BernoulliMeasure(Alphabet alphabet, std::vector<double> weights,
                   std::vector<Rational> exact);

  Alphabet alphabet_;
  std::vector<double> weights_;
  std::vector<Rational> exact_;
};

double cylinder_measure(const BernoulliMeasure& measure, const Pattern& pattern);
Rational cylinder_measure_exact(const BernoulliMeasure& measure,
                                const Pattern& pattern);

/// Measure on width-k blocks: the weight of block [d_1..d_k] is mu(C_[d_1..d_k]).
BernoulliMeasure block_measure(const BernoulliMeasure& measure, unsigned k);

/// Width-K block measure that perturbs the uniform weight b^-K by
/// -(-1)^(d_1+...+d_K) / (2 b^K) on blocks whose components are all 0 or 1.
/// Every starred string s has measure b^-n, n = number of concrete digits in s,
/// while the all-zero block has weight b^-K / 2.
BernoulliMeasure theorem3_measure(unsigned base, unsigned width);

/// Width-2 measure putting 1/b on each diagonal block [d, d] and 0 elsewhere;
/// the block-level view of a digit-duplicated normal sequence.
BernoulliMeasure diagonal_pair_measure(unsigned base);

/// A string of m width-K superdigits over D u {*} in which every superdigit
/// carries at least one star.
class StarredPattern {
 public:
  using Entry = std::optional<Digit>;  // nullopt is a star

  StarredPattern(unsigned base, unsigned width,
                 std::vector<std::vector<Entry>> superdigits);

  /// Accepts "[[0,*],[*,1]]" or the compact form "0*|*1" (bases <= 10 only).
  static StarredPattern parse(unsigned base, std::string_view text);

  unsigned base() const noexcept { return base_; }
  unsigned width() const noexcept { return width_; }
  std::size_t length() const noexcept { return entries_.size() / width_; }
  Alphabet block_alphabet() const { return Alphabet(base_, width_); }

  std::span<const Entry> superdigit(std::size_t i) const {
    return std::span<const Entry>(entries_).subspan(i * width_, width_);
  }

  /// Number of entries that are concrete digits rather than stars.
  unsigned concrete_count() const noexcept { return concrete_; }

  /// Whether block digit `block` is a completion of superdigit i.
  bool matches(std::size_t i, Digit block) const;

  std::string to_string() const;

 private:
  unsigned base_;
  unsigned width_;
  std::vector<Entry> entries_;
  unsigned concrete_ = 0;
};

/// b^-n with n the number of concrete digits of `pattern`; valid for the
/// measure theorem3_measure(pattern.base(), pattern.width()).
Rational starred_measure_closed_form(const StarredPattern& pattern);

/// Sum of cylinder measures over every completion of every star. Requires an
/// exact measure on the pattern's block alphabet.
Rational starred_measure_bruteforce(const BernoulliMeasure& measure,
                                    const StarredPattern& pattern);

/// Exact b^-n.
Rational inverse_power(unsigned base, unsigned exponent);

double to_double(const Rational& r);

/// Parses "3", "-2", "1/3" or a decimal such as "0.375" into an exact rational.
Rational parse_rational(std::string_view text);

}  // namespace nlab
