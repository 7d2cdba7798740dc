#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "nlab/generators.hpp"
#include "oracles.hpp"

using namespace nlab;

namespace {

std::string as_text(const std::vector<Digit>& d) {
  std::string s;
  for (Digit x : d) s += static_cast<char>('0' + x);
  return s;
}

/// Concatenated base-b expansions of 1, 2, ...
std::vector<Digit> champernowne_prefix(unsigned b, std::size_t n) {
  std::vector<Digit> out;
  for (std::uint64_t k = 1; out.size() < n; ++k) {
    std::vector<Digit> rev;
    for (std::uint64_t x = k; x; x /= b) rev.push_back(static_cast<Digit>(x % b));
    out.insert(out.end(), rev.rbegin(), rev.rend());
  }
  out.resize(n);
  return out;
}

/// Inverse-CDF sampling with 53-bit draws and exact thresholds.
std::vector<Digit> iid_reference(const BernoulliMeasure& m, std::uint64_t seed, std::size_t n) {
  std::vector<std::uint64_t> thresholds;
  Rational cdf = 0;
  const Rational scale = Rational(boost::multiprecision::cpp_int(1) << 53);
  for (Digit d = 0; d < m.alphabet().size(); ++d) {
    cdf += m.exact_weight(d);
    const Rational t = cdf * scale;
    thresholds.push_back(static_cast<std::uint64_t>(numerator(t) / denominator(t)));
  }
  thresholds.back() = std::uint64_t{1} << 53;
  std::mt19937_64 eng(seed);
  std::vector<Digit> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t r = eng() >> 11;
    Digit d = 0;
    while (!(r < thresholds[d])) ++d;
    out.push_back(d);
  }
  return out;
}

/// Stage-by-stage round-robin emission with counts ceil(mu(s) * A^(g L)).
std::vector<Digit> concat_reference(const BernoulliMeasure& m, unsigned growth, std::size_t n) {
  const std::uint64_t a = m.alphabet().size();
  std::vector<Digit> out;
  for (unsigned stage = 1; out.size() < n; ++stage) {
    const auto strings = oracle::all_strings(a, stage);
    std::vector<std::uint64_t> counts;
    std::uint64_t most = 0;
    for (const auto& s : strings) {
      Rational w = cylinder_measure_exact(m, Pattern(s));
      for (unsigned i = 0; i < growth * stage; ++i) w *= a;
      boost::multiprecision::cpp_int q = numerator(w) / denominator(w);
      if (q * denominator(w) != numerator(w)) ++q;
      counts.push_back(static_cast<std::uint64_t>(q));
      most = std::max(most, counts.back());
    }
    for (std::uint64_t pass = 0; pass < most && out.size() < n; ++pass) {
      for (std::size_t i = 0; i < strings.size(); ++i) {
        if (counts[i] > pass) out.insert(out.end(), strings[i].begin(), strings[i].end());
      }
    }
  }
  out.resize(n);
  return out;
}

}  // namespace

TEST_CASE("champernowne prefixes") {
  CHECK(as_text(champernowne(2).take(16)) == "1101110010111011");
  CHECK(as_text(champernowne(10).take(15)) == "123456789101112");
  for (unsigned b = 2; b <= 7; ++b) CHECK(champernowne(b).take(5000) == champernowne_prefix(b, 5000));
  auto wide = champernowne(16).take(40);
  CHECK(wide == champernowne_prefix(16, 40));
}

TEST_CASE("iid sampling follows the documented inverse-CDF draw") {
  const auto uniform = BernoulliMeasure::uniform(Alphabet(2));
  CHECK(iid_sampled(uniform, 42).take(4096) == iid_reference(uniform, 42, 4096));
  const auto skew = BernoulliMeasure::exact(Alphabet(3), {Rational(1, 3), 0, Rational(2, 3)});
  const auto digits = iid_sampled(skew, 9).take(20000);
  CHECK(digits == iid_reference(skew, 9, 20000));
  CHECK(std::count(digits.begin(), digits.end(), 1u) == 0);
  const auto nu = theorem3_measure(2, 2);
  CHECK(iid_sampled(nu, 7).take(4096) == iid_reference(nu, 7, 4096));
}

TEST_CASE("iid sampling is deterministic per seed and differs across seeds") {
  const auto m = BernoulliMeasure::uniform(Alphabet(5));
  CHECK(iid_sampled(m, 3).take(1000) == iid_sampled(m, 3).take(1000));
  CHECK(iid_sampled(m, 3).take(1000) != iid_sampled(m, 4).take(1000));
}

TEST_CASE("iid sampling over a float-only measure stays in range") {
  const auto m = BernoulliMeasure::approximate(Alphabet(2), {0.3, 0.7});
  auto d = iid_sampled(m, 1).take(100000);
  const double f0 = std::count(d.begin(), d.end(), 0u) / 100000.0;
  CHECK(std::abs(f0 - 0.3) < 0.01);
}

TEST_CASE("weighted concatenation: stage layout and counts") {
  const auto uniform = BernoulliMeasure::uniform(Alphabet(2));
  // Stage 1: "0" and "1" twice each, round-robin; stage 2: 00 01 10 11 four times.
  CHECK(as_text(weighted_concat(uniform).take(4 + 32)) ==
        "0101" + std::string("00011011") + "00011011" + "00011011" + "00011011");

  const auto skew = BernoulliMeasure::exact(Alphabet(2), {Rational(1, 3), Rational(2, 3)});
  CHECK(weighted_concat_count(skew, 2, 1, 0) == 2);
  CHECK(weighted_concat_count(skew, 2, 1, 1) == 3);
  CHECK(as_text(weighted_concat(skew).take(5)) == "01011");

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    const unsigned b = 2 + rng() % 2;
    std::vector<std::uint64_t> raw(b);
    std::uint64_t total = 0;
    for (auto& w : raw) total += (w = 1 + rng() % 5);
    std::vector<Rational> w;
    for (auto r : raw) w.emplace_back(r, total);
    const auto m = BernoulliMeasure::exact(Alphabet(b), w);
    const unsigned growth = 1 + rng() % 2;
    CHECK(weighted_concat(m, growth).take(30000) == concat_reference(m, growth, 30000));
  }
  CHECK(weighted_concat(theorem3_measure(2, 2)).take(20000) ==
        concat_reference(theorem3_measure(2, 2), 2, 20000));
}

TEST_CASE("weighted concatenation rejects float-only measures") {
  const auto m = BernoulliMeasure::approximate(Alphabet(2), {0.5, 0.5});
  try {
    weighted_concat(m);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported_construction);
  }
}

TEST_CASE("perturbed-measure point flattens blocks and shifts the grid") {
  const auto nu = theorem3_measure(2, 2);
  auto blocks = DigitSequence::from_digits(Alphabet(2, 2), {0, 3, 1, 2});
  CHECK(as_text(theorem3_point(2, 2, std::move(blocks), nu).take(100)) == "00110110");
  auto shifted = DigitSequence::from_digits(Alphabet(2, 2), {3, 3});
  CHECK(as_text(theorem3_point(2, 2, std::move(shifted), nu, 3).take(100)) == "001111");

  try {
    theorem3_point(2, 2, iid_sampled(nu, 1), BernoulliMeasure::uniform(Alphabet(2, 2)));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::measure_mismatch);
  }
  try {
    theorem3_point(2, 3, iid_sampled(nu, 1), nu);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::measure_mismatch);
  }
}

TEST_CASE("duplicate and fill_zero") {
  auto d = duplicate(DigitSequence::from_digits(Alphabet(3), {1, 2, 0}), 3);
  CHECK(d.known_length() == 9);
  CHECK(as_text(d.take(100)) == "111222000");
  try {
    duplicate(champernowne(2), 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parameter);
  }
  auto f = fill_zero(DigitSequence::from_digits(Alphabet(10), {7, 8, 9}),
                     SelectionSequence::parse("periodic:m=3,r=2"));
  // The output ends at the first selected position the inner stream cannot fill.
  CHECK(as_text(f.take(100)) == "0700800900");
}

TEST_CASE("fill_zero then select along the same set returns the inner stream") {
  std::mt19937_64 rng(23);
  const auto m = BernoulliMeasure::uniform(Alphabet(3));
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t period = 1 + rng() % 9;
    const auto sel = SelectionSequence::periodic(period, oracle::random_residues(period, rng));
    const std::uint64_t seed = rng();
    auto back = select(fill_zero(iid_sampled(m, seed), sel), sel).take(2000);
    CHECK(back == iid_sampled(m, seed).take(2000));
  }
}

TEST_CASE("generator spec text round-trips and instantiates") {
  const char* texts[] = {
      "champernowne b=2",
      "kind=iid b=3 measure=1/6|1/3|1/2 seed=42",
      "iid seed=42 uniform b=2",
      "concat b=2 K=2 measure=thm3",
      "kind=thm3 b=2 K=2 seed=7",
      "thm3 b=3 K=2 L=2 inner=concat",
      "kind=duplicate r=2 inner.kind=champernowne inner.b=2",
      "kind=fill_zero sel=periodic:m=2,r=2 inner.kind=iid inner.b=2 inner.seed=1",
      "duplicate;r=3;inner.kind=fill_zero;inner.sel=ap:k=1,l=3;inner.inner.kind=champernowne;"
      "inner.inner.b=10",
      "fill_zero sel=(evper:pre=3|7;m=3,r=1) inner.kind=champernowne inner.b=12",
      "duplicate r=2 inner.kind=fill_zero inner.sel=(evper:pre=2;m=2,r=2) inner.inner.kind=champernowne",
  };
  for (const char* t : texts) {
    CAPTURE(t);
    const auto spec = GeneratorSpec::parse(t);
    const auto again = GeneratorSpec::parse(spec.to_string());
    CHECK(again.to_string() == spec.to_string());
    CHECK(spec.instantiate().take(3000) == again.instantiate().take(3000));
    CHECK(spec.instantiate().alphabet() == spec.alphabet());
  }
  CHECK(GeneratorSpec::parse("champernowne b=2").instantiate().take(16) ==
        champernowne(2).take(16));
  const auto thm3 = GeneratorSpec::parse("thm3 b=2 K=2 seed=7");
  CHECK(thm3.instantiate().take(1000) ==
        theorem3_point(2, 2, iid_sampled(theorem3_measure(2, 2), 7), theorem3_measure(2, 2))
            .take(1000));
  CHECK(thm3.target_measure()->same_as(theorem3_measure(2, 2)));
}

TEST_CASE("generator spec errors carry positions") {
  struct Case {
    const char* text;
    std::size_t position;
  };
  const Case cases[] = {
      {"champernowne b=2 b=3", 17},
      {"champernowne b=x", 13},
      {"iid b=2 foo=1", 8},
      {"nosuch b=2", 0},
      {"iid b=2 measure=1/2|1/x", 20},
      {"iid b=2 1/2|1/x", 12},
      {"fill_zero sel=ap:k=1,q=2 inner.kind=champernowne", 21},
      {"duplicate r=1 inner.kind=champernowne", 10},
      {"fill_zero sel=(evper:pre=1;m=2,r=1 inner.kind=champernowne", 14},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    try {
      GeneratorSpec::parse(c.text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == c.position);
    }
  }
}
