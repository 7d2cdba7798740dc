#pragma once

// Increasing index sequences n_1 < n_2 < ... (1-based) and selection along them.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nlab/sequence.hpp"

namespace nlab {

/// k, k+l, k+2l, ...
struct ArithmeticProgression {
  std::uint64_t start = 1;
  std::uint64_t step = 1;
};

/// Union of residue classes: n is selected iff ((n-1) mod m) + 1 is in
/// `residues`. Residues are sorted, distinct and within {1, ..., m}.
struct PeriodicSet {
  std::uint64_t period = 1;
  std::vector<std::uint64_t> residues;

  bool contains(std::uint64_t n) const;
};

/// An explicit finite preperiod followed by the elements of `tail` that
/// exceed the last preperiod index.
struct EventuallyPeriodic {
  std::vector<std::uint64_t> preperiod;
  PeriodicSet tail;
};

/// A finite sorted list of indices.
struct ExplicitIndices {
  std::vector<std::uint64_t> indices;
};

class IndexCursor;

class SelectionSequence {
 public:
  using Spec = std::variant<ArithmeticProgression, PeriodicSet, EventuallyPeriodic,
                            ExplicitIndices>;

  /// Validates the spec; throws parameter on malformed input.
  explicit SelectionSequence(Spec spec);

  static SelectionSequence arithmetic(std::uint64_t start, std::uint64_t step);
  static SelectionSequence periodic(std::uint64_t period, std::vector<std::uint64_t> residues);

  /// Grammar: "ap:k=2,l=3", "periodic:m=6,r=1|2|4|5",
  /// "evper:pre=3|7;m=2,r=1", "explicit:1|4|9".
  static SelectionSequence parse(std::string_view text);
  std::string to_string() const;

  const Spec& spec() const noexcept { return spec_; }
  const PeriodicSet* as_periodic() const { return std::get_if<PeriodicSet>(&spec_); }

  IndexCursor cursor() const;

  /// |A n [1, n]|.
  std::uint64_t count_up_to(std::uint64_t n) const;

 private:
  Spec spec_;
};

/// Streams the indices of a selection in increasing order.
class IndexCursor {
 public:
  explicit IndexCursor(const SelectionSequence::Spec& spec);

  std::optional<std::uint64_t> next();

 private:
  SelectionSequence::Spec spec_;
  std::uint64_t emitted_ = 0;
  std::size_t residue_ = 0;
  std::uint64_t cycle_ = 0;
  bool in_tail_ = false;
};

/// (a_{n_1}, a_{n_2}, ...), consuming the input lazily. Ends when the
/// selection or the input runs out.
DigitSequence select(DigitSequence seq, const SelectionSequence& selection);

struct Density {
  Rational value;
  bool is_estimate = false;
  std::uint64_t horizon = 0;  // set for estimates only
};

/// Asymptotic lower density. Exact for the periodic kinds; for explicit
/// lists an estimate min |A n [1,N]|/N over N in [ceil(H/2), H], H the
/// largest listed index.
Density lower_density(const SelectionSequence& selection);

/// Least n >= 1 whose block {K(n-1)+L, ..., Kn+L-1} lies entirely inside
/// the periodic set, or nullopt if no block does.
std::optional<std::uint64_t> thickness_violation(const PeriodicSet& set, unsigned width,
                                                 unsigned offset = 1);

/// Same check for a general selection; only periodic sets are accepted.
std::optional<std::uint64_t> thickness_violation(const SelectionSequence& selection,
                                                 unsigned width, unsigned offset = 1);

/// PeriodicSet(t, {1, ..., t-1}) for each t, densities 1 - 1/t.
std::vector<SelectionSequence> density_family(std::span<const std::uint64_t> periods);

}  // namespace nlab
