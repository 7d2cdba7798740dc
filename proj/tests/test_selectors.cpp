#include <random>

#include "doctest.h"
#include "nlab/selectors.hpp"
#include "oracles.hpp"

using namespace nlab;

namespace {

std::vector<std::uint64_t> first_indices(const SelectionSequence& s, std::size_t n) {
  std::vector<std::uint64_t> out;
  auto c = s.cursor();
  while (out.size() < n) {
    auto i = c.next();
    if (!i) break;
    out.push_back(*i);
  }
  return out;
}

/// Membership straight from the definitions.
bool member(const SelectionSequence& s, std::uint64_t n) {
  return std::visit(
      [&](const auto& spec) -> bool {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, ArithmeticProgression>) {
          return n >= spec.start && (n - spec.start) % spec.step == 0;
        } else if constexpr (std::is_same_v<T, PeriodicSet>) {
          return oracle::in_periodic(spec.period, spec.residues, n);
        } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
          for (auto p : spec.preperiod) {
            if (p == n) return true;
          }
          const std::uint64_t last = spec.preperiod.empty() ? 0 : spec.preperiod.back();
          return n > last && oracle::in_periodic(spec.tail.period, spec.tail.residues, n);
        } else {
          return std::find(spec.indices.begin(), spec.indices.end(), n) != spec.indices.end();
        }
      },
      s.spec());
}

SelectionSequence random_selection(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0:
      return SelectionSequence::arithmetic(1 + rng() % 10, 1 + rng() % 100);
    case 1: {
      const std::uint64_t m = 1 + rng() % 12;
      return SelectionSequence::periodic(m, oracle::random_residues(m, rng));
    }
    case 2: {
      const std::uint64_t m = 1 + rng() % 6;
      std::vector<std::uint64_t> pre;
      for (std::uint64_t x = 1; x < 40; ++x) {
        if (rng() % 5 == 0) pre.push_back(x);
      }
      return SelectionSequence(EventuallyPeriodic{pre, {m, oracle::random_residues(m, rng)}});
    }
    default: {
      std::vector<std::uint64_t> idx;
      for (std::uint64_t x = 1; x < 500; ++x) {
        if (rng() % 3 == 0) idx.push_back(x);
      }
      if (idx.empty()) idx.push_back(1);
      return SelectionSequence(ExplicitIndices{idx});
    }
  }
}

}  // namespace

TEST_CASE("selection grammar") {
  CHECK(first_indices(SelectionSequence::parse("ap:k=2,l=3"), 4) ==
        std::vector<std::uint64_t>{2, 5, 8, 11});
  CHECK(first_indices(SelectionSequence::parse("periodic:m=6,r=1|2|4|5"), 6) ==
        std::vector<std::uint64_t>{1, 2, 4, 5, 7, 8});
  CHECK(first_indices(SelectionSequence::parse("evper:pre=3|7;m=2,r=1"), 5) ==
        std::vector<std::uint64_t>{3, 7, 9, 11, 13});
  CHECK(first_indices(SelectionSequence::parse("explicit:1|4|9"), 10) ==
        std::vector<std::uint64_t>{1, 4, 9});
  for (const char* t : {"ap:k=2,l=3", "periodic:m=6,r=1|2|4|5", "evper:pre=3|7;m=2,r=1",
                        "explicit:1|4|9"}) {
    CHECK(SelectionSequence::parse(t).to_string() == t);
  }
}

TEST_CASE("selection grammar errors carry positions") {
  struct Case {
    const char* text;
    std::size_t position;
  };
  const Case cases[] = {
      {"ap", 0},          {"bogus:k=1", 0},         {"ap:k=x,l=2", 5},
      {"ap:k=1,z=2", 7},  {"periodic:m=4", 9},      {"explicit:1|x", 11},
      {"ap:k=1,k=2", 7},  {"evper:m=2,r=1", 6},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    try {
      SelectionSequence::parse(c.text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == c.position);
    }
  }
  for (const char* bad : {"ap:k=0,l=1", "ap:k=1,l=0", "periodic:m=3,r=4", "periodic:m=3,r=2|1",
                          "explicit:3|2"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(SelectionSequence::parse(bad), Error);
  }
}

TEST_CASE("cursor, count_up_to and membership agree on random selections") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_selection(rng);
    CAPTURE(s.to_string());
    const auto idx = first_indices(s, 300);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t n = 1; expected.size() < 300 && n <= 40000; ++n) {
      if (member(s, n)) expected.push_back(n);
    }
    CHECK(idx == expected);
    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= 700; ++n) {
      count += member(s, n);
      if (n % 37 == 0) CHECK(s.count_up_to(n) == count);
    }
  }
}

TEST_CASE("select agrees with indexing on random selections") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_selection(rng);
    CAPTURE(s.to_string());
    std::vector<Digit> digits(5000);
    for (auto& d : digits) d = rng() % 3;
    std::vector<Digit> expected;
    for (std::uint64_t n = 1; n <= digits.size(); ++n) {
      if (member(s, n)) expected.push_back(digits[n - 1]);
    }
    auto got = select(DigitSequence::from_digits(Alphabet(3), digits), s).take(100000);
    CHECK(got == expected);
  }
}

TEST_CASE("sparse progressions select correctly from unbounded streams") {
  std::vector<Digit> digits(100000);
  for (std::size_t i = 0; i < digits.size(); ++i) digits[i] = (i * 7 + i / 3) % 5;
  auto buf = std::make_shared<const std::vector<Digit>>(digits);
  for (std::uint64_t step : {1, 2, 63, 64, 65, 1000, 4099}) {
    CAPTURE(step);
    auto got = select(DigitSequence::view(Alphabet(5), buf), SelectionSequence::arithmetic(3, step))
                   .take(1000000);
    std::vector<Digit> expected;
    for (std::uint64_t n = 3; n <= digits.size(); n += step) expected.push_back(digits[n - 1]);
    CHECK(got == expected);
  }
}

TEST_CASE("lower density") {
  CHECK(lower_density(SelectionSequence::parse("ap:k=5,l=4")).value == Rational(1, 4));
  CHECK(lower_density(SelectionSequence::parse("periodic:m=6,r=1|2|4|5")).value == Rational(2, 3));
  const auto ev = lower_density(SelectionSequence::parse("evper:pre=3|7;m=2,r=1"));
  CHECK(ev.value == Rational(1, 2));
  CHECK_FALSE(ev.is_estimate);

  // Explicit lists: min count/N over the upper half of the listed range.
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint64_t> idx;
    for (std::uint64_t x = 1; x <= 200; ++x) {
      if (rng() % 4 == 0) idx.push_back(x);
    }
    if (idx.empty()) continue;
    const SelectionSequence s(ExplicitIndices{idx});
    const auto d = lower_density(s);
    CHECK(d.is_estimate);
    const std::uint64_t h = idx.back();
    CHECK(d.horizon == h);
    Rational best = 2;
    for (std::uint64_t n = (h + 1) / 2; n <= h; ++n) {
      if (n == 0) continue;
      best = std::min(best, Rational(s.count_up_to(n), n));
    }
    CHECK(d.value == best);
  }
}

TEST_CASE("thickness check matches a direct scan") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint64_t m = 1 + rng() % 12;
    const unsigned K = 1 + rng() % 12;
    const unsigned L = 1 + rng() % 4;
    const auto residues = oracle::random_residues(m, rng);
    CHECK(thickness_violation(PeriodicSet{m, residues}, K, L) ==
          oracle::thickness_scan(m, residues, K, L));
  }
  CHECK_FALSE(thickness_violation(SelectionSequence::parse("periodic:m=2,r=1"), 2));
  CHECK(thickness_violation(SelectionSequence::parse("periodic:m=3,r=1|2"), 2) == 1u);
  CHECK(thickness_violation(SelectionSequence::parse("periodic:m=3,r=1|2"), 2, 2) == 2u);
  CHECK_THROWS_AS(thickness_violation(SelectionSequence::parse("ap:k=1,l=2"), 2), Error);
}

TEST_CASE("density family") {
  const std::vector<std::uint64_t> periods{2, 4, 8};
  const auto family = density_family(periods);
  REQUIRE(family.size() == 3);
  CHECK(family[1].to_string() == "periodic:m=4,r=1|2|3");
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(lower_density(family[i]).value == 1 - Rational(1, periods[i]));
  }
  const std::vector<std::uint64_t> bad{1};
  CHECK_THROWS_AS(density_family(bad), Error);
}
