#include <random>
#include <sstream>

#include "doctest.h"
#include "nlab/generators.hpp"
#include "nlab/report.hpp"
#include "nlab/stream_file.hpp"

using namespace nlab;

namespace {

std::string serialize(const StreamFile& f) {
  std::ostringstream out;
  write_stream(out, f);
  return out.str();
}

StreamFile parse(const std::string& text) {
  std::istringstream in(text);
  return read_stream(in);
}

}  // namespace

TEST_CASE("stream header format") {
  StreamHeader h;
  h.base = 2;
  h.count = 16;
  h.set_field("gen", "kind=champernowne;b=2");
  CHECK(format_header(h) == "#nlab v1 b=2 n=16 gen=kind=champernowne;b=2");
  const auto back = parse_header(format_header(h));
  CHECK(back.base == 2);
  CHECK(back.count == 16u);
  CHECK(*back.field("gen") == "kind=champernowne;b=2");
  h.count.reset();
  CHECK(format_header(h).find("n=unbounded-prefix") != std::string::npos);
  CHECK_FALSE(parse_header("#nlab v1 b=3 n=unbounded-prefix").count);
  CHECK_THROWS_AS(h.set_field("x", "a b"), Error);
  for (const char* bad : {"nlab v1 b=2 n=1", "#nlab v2 b=2 n=1", "#nlab v1 n=1", "#nlab v1 b=2",
                          "#nlab v1 b=1 n=0", "#nlab v1 b=2 n=x", "#nlab v1 b=2 n=1 junk"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_header(bad), Error);
  }
}

TEST_CASE("stream files round-trip for small and large bases") {
  std::mt19937_64 rng(10);
  for (unsigned b : {2u, 7u, 10u, 11u, 16u, 1000u}) {
    StreamFile f;
    f.header.base = b;
    f.header.set_field("gen", "test");
    for (int i = 0; i < 1000; ++i) f.digits.push_back(static_cast<Digit>(rng() % b));
    const std::string text = serialize(f);
    const auto back = parse(text);
    CHECK(back.digits == f.digits);
    CHECK(back.header.base == b);
    CHECK(serialize(back) == text);
  }
  CHECK(serialize(parse("#nlab v1 b=2 n=4\n0110\n")) == "#nlab v1 b=2 n=4\n0110\n");
}

TEST_CASE("stream payload validation") {
  CHECK_THROWS_AS(parse("#nlab v1 b=2 n=3\n012\n"), Error);
  CHECK_THROWS_AS(parse("#nlab v1 b=2 n=5\n0101\n"), Error);
  CHECK_THROWS_AS(parse("#nlab v1 b=12 n=2\n3 12\n"), Error);
  CHECK_THROWS_AS(parse("#nlab v1 b=12 n=2\n3 x\n"), Error);
  CHECK_THROWS_AS(parse(""), Error);
  CHECK(parse("#nlab v1 b=2 n=unbounded-prefix\n01\n10\n").digits.size() == 4);
  StreamFile f;
  f.header.base = 2;
  f.digits = {0, 2};
  std::ostringstream out;
  CHECK_THROWS_AS(write_stream(out, f), Error);
}

TEST_CASE("generated files reproduce the generator prefix") {
  for (const char* t : {"champernowne b=3", "iid b=2 seed=5", "thm3 b=2 K=2 seed=7",
                        "concat b=12 measure=uniform"}) {
    const auto spec = GeneratorSpec::parse(t);
    StreamFile f;
    f.header.base = spec.alphabet().base();
    f.header.set_field("gen", spec.to_string());
    f.digits = spec.instantiate().take(5000);
    const auto back = parse(serialize(f));
    CHECK(back.digits == spec.instantiate().take(5000));
    CHECK(GeneratorSpec::parse(*back.header.field("gen")).to_string() == spec.to_string());
  }
}

TEST_CASE("report records") {
  auto seq = DigitSequence::from_digits(Alphabet(2), {0, 0, 0, 1});
  const auto report = count_patterns(seq, 3, 2, BernoulliMeasure::uniform(Alphabet(2)));
  RunConfig config;
  config.set("command", "analyze");
  config.set("k", "2");
  config.set("k", "2");
  const std::string text = format_report(config, report);
  CHECK(text ==
        "#nlab-report v1\n"
        "config command=analyze\n"
        "config k=2\n"
        "summary base=2 width=1 k=2 alignment=unaligned requested=3 horizon=3 truncated=0 "
        "discrepancy=0.5\n"
        "row length=1 pattern=[0] count=3 empirical=1 expected=0.5 deviation=0.5\n"
        "row length=1 pattern=[1] count=0 empirical=0 expected=0.5 deviation=-0.5\n"
        "row length=2 pattern=[0,0] count=2 empirical=0.6666666666666666 expected=0.25 "
        "deviation=0.41666666666666663\n"
        "row length=2 pattern=[0,1] count=1 empirical=0.3333333333333333 expected=0.25 "
        "deviation=0.08333333333333331\n"
        "row length=2 pattern=[1,0] count=0 empirical=0 expected=0.25 deviation=-0.25\n"
        "row length=2 pattern=[1,1] count=0 empirical=0 expected=0.25 deviation=-0.25\n");
  const auto cfg = parse_report_config(text);
  CHECK(cfg.entries() == config.entries());
  CHECK(format_report_table(report).find("[0,1]") != std::string::npos);
}
