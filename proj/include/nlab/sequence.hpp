#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nlab/shiftspace.hpp"

namespace nlab {

/// Single-consumer producer of digits. `read` returns the number of digits
/// written; a short read means the source is exhausted.
class DigitSource {
 public:
  virtual ~DigitSource() = default;
  virtual std::size_t read(std::span<Digit> out) = 0;
};

/// A finite or unbounded digit stream over an alphabet.
///
/// Move-only and consumed as it is read. Concurrent analyses must build
/// their own instances (re-run the generator or view a shared buffer).
class DigitSequence {
 public:
  DigitSequence(Alphabet alphabet, std::unique_ptr<DigitSource> source,
                std::optional<std::uint64_t> known_length = std::nullopt);

  /// Materialized sequence; throws invalid_pattern on a digit outside the
  /// alphabet.
  static DigitSequence from_digits(Alphabet alphabet, std::vector<Digit> digits);

  /// Reads a shared buffer without copying. The buffer is not re-validated.
  static DigitSequence view(Alphabet alphabet,
                            std::shared_ptr<const std::vector<Digit>> digits);

  DigitSequence(DigitSequence&&) noexcept = default;
  DigitSequence& operator=(DigitSequence&&) noexcept = default;

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::optional<std::uint64_t> known_length() const noexcept { return known_length_; }
  std::uint64_t consumed() const noexcept { return consumed_; }

  /// Fills `out` completely unless the stream ends first.
  std::size_t read(std::span<Digit> out);

  /// Up to n further digits.
  std::vector<Digit> take(std::size_t n);

  /// Discards up to n digits, returning how many were skipped.
  std::uint64_t skip(std::uint64_t n);

 private:
  Alphabet alphabet_;
  std::unique_ptr<DigitSource> source_;
  std::optional<std::uint64_t> known_length_;
  std::uint64_t consumed_ = 0;
  bool exhausted_ = false;
};

struct RecodeTally {
  std::uint64_t blocks = 0;
  std::uint64_t dropped_digits = 0;  // trailing partial block
};

/// Groups consecutive runs of k digits into one block digit. A trailing
/// partial block is dropped; its size is recorded in `tally` once the
/// input is exhausted.
DigitSequence block_recode(DigitSequence seq, unsigned k,
                           std::shared_ptr<RecodeTally> tally = nullptr);

/// Inverse of block_recode: expands block digits back to base digits.
DigitSequence block_flatten(DigitSequence seq);

}  // namespace nlab
