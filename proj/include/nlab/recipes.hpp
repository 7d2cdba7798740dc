#pragma once

// End-to-end experiments behind `nlab verify`.
//
// thm1   digit-duplicated normal sequence: non-normal, yet every
//        progression with step >= 2 selects a normal-looking stream.
// prop2  zero-filled sequence along a selection of lower density < 1:
//        the selected stream is normal, the full stream is not.
// thm2   selections of density 1 - 1/t from a normal stream stay normal,
//        while the zero-filled counterpart shows the predicted excess of 0s.
// thm3   normal point of the perturbed block measure: aligned block
//        frequencies are off, but thin periodic selections look normal.

#include <cstdint>
#include <string>
#include <vector>

#include "nlab/report.hpp"
#include "nlab/selectors.hpp"

namespace nlab {

struct Measurement {
  std::string name;
  double value = 0;
  std::string bound;  // human-readable acceptance condition
  bool pass = true;
};

struct RecipeResult {
  std::string recipe;
  bool hypothesis_met = true;
  std::string hypothesis_note;
  bool passed = false;
  std::vector<Measurement> measurements;
  RunConfig config;
};

std::string format_recipe(const RecipeResult& result);

struct Theorem1Params {
  unsigned base = 2;
  std::uint64_t horizon = 1'000'000;
  std::string inner = "champernowne";  // or "iid"
  std::uint64_t seed = 1;
  unsigned pattern_length = 3;
  std::vector<std::uint64_t> offsets{1, 2, 3};
  std::vector<std::uint64_t> steps{2, 3, 4};
  double tau = 0.02;           // selected-stream discrepancy bound
  double witness_slack = 0.01; // |dev([0,1])| within 1/(2b^2) +- slack
};
RecipeResult verify_theorem1(const Theorem1Params& p);

struct Proposition2Params {
  unsigned base = 2;
  std::uint64_t horizon = 1'000'000;
  SelectionSequence selection = SelectionSequence::periodic(2, {2});
  std::uint64_t seed = 1;
  double frequency_slack = 0.005;
  std::uint64_t roundtrip_prefix = 100'000;
};
RecipeResult verify_proposition2(const Proposition2Params& p);

struct Theorem2Params {
  unsigned base = 2;
  std::uint64_t horizon = 1'000'000;
  std::vector<std::uint64_t> periods{2, 4, 8, 16};
  std::uint64_t seed = 1;
  unsigned pattern_length = 3;
  double tau = 0.02;
  double bound_slack = 0.01;
};
RecipeResult verify_theorem2(const Theorem2Params& p);

struct Theorem3Params {
  unsigned base = 2;
  unsigned width = 2;
  unsigned offset = 1;
  SelectionSequence selection = SelectionSequence::periodic(2, {1});
  std::uint64_t blocks = 1'000'000;
  std::uint64_t seed = 7;
  unsigned pattern_length = 3;
  double frequency_slack = 0.005;
  double tau = 0.01;
};
RecipeResult verify_theorem3(const Theorem3Params& p);

}  // namespace nlab
