// nlab: generate, select, analyze and verify digit streams.
//
//   nlab gen champernowne b=2 -n 16 -o out.txt
//   nlab select -i out.txt -s ap:k=1,l=2 -o sel.txt
//   nlab analyze -i sel.txt -k 3 --measure uniform -o report.txt
//   nlab verify thm1 b=2 N=10^6
//
// Exit codes: 0 success or recipe passed, 1 recipe failed, 2 usage,
// input or hypothesis error.

#include <charconv>
#include <deque>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlab/analyze.hpp"
#include "nlab/generators.hpp"
#include "nlab/recipes.hpp"
#include "nlab/report.hpp"
#include "nlab/stream_file.hpp"

namespace {

using namespace nlab;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

/// "1000000", "10^6", "1e6", "3*10^5".
std::uint64_t parse_count(const std::string& text) {
  auto fail = [&]() -> std::uint64_t {
    throw Error(ErrorCode::parse, "bad count '" + text + "'");
  };
  std::uint64_t factor = 1;
  std::string rest = text;
  if (auto star = rest.find('*'); star != std::string::npos) {
    factor = parse_count(rest.substr(0, star));
    rest = rest.substr(star + 1);
  }
  auto number = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty()) fail();
    return v;
  };
  std::uint64_t value = 0;
  auto caret = rest.find('^');
  auto e = rest.find_first_of("eE");
  if (caret != std::string::npos || e != std::string::npos) {
    const bool is_caret = caret != std::string::npos;
    const std::uint64_t base = number(std::string_view(rest).substr(0, is_caret ? caret : e));
    const std::uint64_t exp = number(std::string_view(rest).substr((is_caret ? caret : e) + 1));
    const std::uint64_t mul = is_caret ? base : 10;
    value = is_caret ? 1 : base;
    for (std::uint64_t i = 0; i < exp; ++i) {
      if (value > UINT64_MAX / (mul ? mul : 1)) fail();
      value *= mul;
    }
  } else {
    value = number(rest);
  }
  return factor * value;
}

double parse_real(const std::string& text) {
  return to_double(parse_rational(text));
}

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find_first_of(",|", pos);
    if (end == std::string::npos) end = text.size();
    out.push_back(parse_count(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  return out;
}

/// key=value tokens of `verify`, consumed one by one so leftovers can be
/// reported.
class Params {
 public:
  explicit Params(const std::vector<std::string>& tokens) {
    for (const auto& t : tokens) {
      auto eq = t.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorCode::parse, "expected key=value, got '" + t + "'");
      }
      if (!values_.emplace(t.substr(0, eq), t.substr(eq + 1)).second) {
        throw Error(ErrorCode::parse, "duplicate parameter '" + t.substr(0, eq) + "'");
      }
    }
  }

  const std::string* take(std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      auto it = values_.find(k);
      if (it != values_.end()) {
        taken_.push_back(it->second);
        values_.erase(it);
        return &taken_.back();
      }
    }
    return nullptr;
  }

  template <class T, class F>
  void read(std::initializer_list<const char*> keys, T& target, F convert) {
    if (auto v = take(keys)) target = static_cast<T>(convert(*v));
  }

  void finish() const {
    if (!values_.empty()) {
      throw Error(ErrorCode::parse, "unknown parameter '" + values_.begin()->first + "'");
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::deque<std::string> taken_;
};

/// delta=p/q is shorthand for periodic:m=q,r=(q-p+1)|...|q.
SelectionSequence selection_for_density(const std::string& text) {
  const Rational delta = parse_rational(text);
  if (delta <= 0 || delta > 1) throw Error(ErrorCode::parameter, "delta must lie in (0, 1]");
  const auto p = static_cast<std::uint64_t>(numerator(delta));
  const auto q = static_cast<std::uint64_t>(denominator(delta));
  std::vector<std::uint64_t> residues;
  for (std::uint64_t r = q - p + 1; r <= q; ++r) residues.push_back(r);
  return SelectionSequence::periodic(q, residues);
}

RecipeResult run_recipe(const std::string& recipe, const std::vector<std::string>& tokens) {
  Params params(tokens);
  auto count = [](const std::string& s) { return parse_count(s); };
  auto real = [](const std::string& s) { return parse_real(s); };
  auto list = [](const std::string& s) { return parse_list(s); };
  auto sel = [](const std::string& s) { return SelectionSequence::parse(s); };
  auto text = [](const std::string& s) { return s; };
  if (recipe == "thm1") {
    Theorem1Params p;
    params.read({"b"}, p.base, count);
    params.read({"N"}, p.horizon, count);
    params.read({"inner"}, p.inner, text);
    params.read({"seed"}, p.seed, count);
    params.read({"k"}, p.pattern_length, count);
    params.read({"offsets"}, p.offsets, list);
    params.read({"steps"}, p.steps, list);
    params.read({"tau"}, p.tau, real);
    params.read({"slack"}, p.witness_slack, real);
    params.finish();
    return verify_theorem1(p);
  }
  if (recipe == "prop2") {
    Proposition2Params p;
    params.read({"b"}, p.base, count);
    params.read({"N"}, p.horizon, count);
    if (auto d = params.take({"delta"})) p.selection = selection_for_density(*d);
    if (auto s = params.take({"sel"})) p.selection = sel(*s);
    params.read({"seed"}, p.seed, count);
    params.read({"slack"}, p.frequency_slack, real);
    params.read({"prefix"}, p.roundtrip_prefix, count);
    params.finish();
    return verify_proposition2(p);
  }
  if (recipe == "thm2") {
    Theorem2Params p;
    params.read({"b"}, p.base, count);
    params.read({"N"}, p.horizon, count);
    params.read({"periods", "t"}, p.periods, list);
    params.read({"seed"}, p.seed, count);
    params.read({"k"}, p.pattern_length, count);
    params.read({"tau"}, p.tau, real);
    params.read({"slack"}, p.bound_slack, real);
    params.finish();
    return verify_theorem2(p);
  }
  if (recipe == "thm3") {
    Theorem3Params p;
    params.read({"b"}, p.base, count);
    params.read({"K"}, p.width, count);
    params.read({"L"}, p.offset, count);
    if (auto s = params.take({"sel"})) p.selection = sel(*s);
    params.read({"blocks", "N"}, p.blocks, count);
    params.read({"seed"}, p.seed, count);
    params.read({"k"}, p.pattern_length, count);
    params.read({"slack"}, p.frequency_slack, real);
    params.read({"tau"}, p.tau, real);
    params.finish();
    return verify_theorem3(p);
  }
  throw Error(ErrorCode::parse, "unknown recipe '" + recipe + "' (thm1, prop2, thm2, thm3)");
}

std::vector<std::uint64_t> parse_schedule(const std::string& text, std::uint64_t horizon) {
  if (text.rfind("geometric", 0) == 0) {
    unsigned points = 7;
    if (text.size() > 9) {
      if (text[9] != ':') throw Error(ErrorCode::parse, "schedule: expected geometric[:points]");
      points = static_cast<unsigned>(parse_count(text.substr(10)));
    }
    return geometric_schedule(horizon, points);
  }
  auto list = parse_list(text);
  for (std::size_t i = 1; i < list.size(); ++i) {
    if (list[i] <= list[i - 1]) throw Error(ErrorCode::parse, "schedule must increase");
  }
  if (list.back() > horizon) {
    throw Error(ErrorCode::parameter, "schedule exceeds the available horizon " +
                                          std::to_string(horizon));
  }
  return list;
}

std::string provenance(const StreamHeader& header) {
  std::string s;
  for (const char* key : {"gen", "sel"}) {
    if (auto v = header.field(key)) s += std::string(s.empty() ? "" : ";") + key + ":" + *v;
  }
  return s;
}

struct GenOptions {
  std::vector<std::string> spec;
  std::string count;
  std::string out = "-";
};

int cmd_gen(const GenOptions& o) {
  std::string text;
  std::string count = o.count;
  for (const auto& token : o.spec) {
    if (token.rfind("N=", 0) == 0) {
      if (!count.empty()) throw Error(ErrorCode::parse, "digit count given twice");
      count = token.substr(2);
      continue;
    }
    text += (text.empty() ? "" : " ") + token;
  }
  if (count.empty()) throw Error(ErrorCode::parse, "gen needs a digit count (-n or N=)");
  const std::uint64_t n = parse_count(count);
  const GeneratorSpec spec = GeneratorSpec::parse(text);
  StreamFile file;
  file.header.base = spec.alphabet().base();
  file.header.set_field("gen", spec.to_string());
  // Stream files hold base-b digits; block generators are written flattened.
  DigitSequence seq = spec.instantiate();
  if (seq.alphabet().is_block()) seq = block_flatten(std::move(seq));
  file.digits = seq.take(static_cast<std::size_t>(n));
  if (file.digits.size() != n) {
    throw Error(ErrorCode::stream, "generator ended after " + std::to_string(file.digits.size()) +
                                       " digits");
  }
  write_stream_file(o.out, file);
  return 0;
}

struct SelectOptions {
  std::string in = "-";
  std::string selection;
  std::string out = "-";
};

int cmd_select(const SelectOptions& o) {
  const SelectionSequence sel = SelectionSequence::parse(o.selection);
  StreamFile input = read_stream_file(o.in);
  const Alphabet alphabet(input.header.base);
  const std::uint64_t available = input.digits.size();
  auto buffer = std::make_shared<const std::vector<Digit>>(std::move(input.digits));
  StreamFile out;
  out.header = input.header;
  const std::string* previous = input.header.field("sel");
  out.header.set_field("sel", previous ? *previous + ">" + sel.to_string() : sel.to_string());
  out.digits = select(DigitSequence::view(alphabet, buffer), sel).take(buffer->size());

  // Finite index lists can point past the input; report how many did.
  if (const auto* list = std::get_if<ExplicitIndices>(&sel.spec())) {
    std::uint64_t beyond = 0;
    for (auto i : list->indices) beyond += i > available;
    if (beyond) {
      std::cerr << "warning: " << beyond << " selection indices exceed the " << available
                << " input digits; output truncated\n";
    }
  } else if (const auto* ev = std::get_if<EventuallyPeriodic>(&sel.spec())) {
    std::uint64_t beyond = 0;
    for (auto i : ev->preperiod) beyond += i > available;
    if (beyond) {
      std::cerr << "warning: " << beyond << " selection indices exceed the " << available
                << " input digits; output truncated\n";
    }
  }
  write_stream_file(o.out, out);
  return 0;
}

struct AnalyzeOptions {
  std::string in = "-";
  std::string out = "-";
  std::string table;
  unsigned k = 3;
  std::string measure = "uniform";
  unsigned block = 1;
  std::uint64_t skip = 0;
  unsigned expected_base = 0;
  std::string horizon;
  std::string schedule = "geometric:7";
  std::string tau;
  unsigned threads = 1;
};

int cmd_analyze(const AnalyzeOptions& o) {
  StreamFile input = read_stream_file(o.in);
  const unsigned base = input.header.base;
  if (o.expected_base && o.expected_base != base) {
    throw Error(ErrorCode::measure_mismatch, "stream has base " + std::to_string(base) +
                                                 ", measure expects base " +
                                                 std::to_string(o.expected_base));
  }
  if (o.block == 0) throw Error(ErrorCode::parameter, "block width must be at least 1");
  const BernoulliMeasure measure = MeasureSpec{base, o.block, o.measure}.build();

  auto buffer = std::make_shared<const std::vector<Digit>>(std::move(input.digits));
  DigitSequence seq = DigitSequence::view(Alphabet(base), buffer);
  seq.skip(o.skip);
  const std::uint64_t digits = buffer->size() > o.skip ? buffer->size() - o.skip : 0;
  const std::uint64_t symbols = digits / o.block;
  if (o.block > 1) seq = block_recode(std::move(seq), o.block);
  if (symbols < o.k) throw Error(ErrorCode::stream, "stream is shorter than the pattern length");

  const std::uint64_t available = symbols - o.k + 1;
  const std::uint64_t n = o.horizon.empty() ? available : parse_count(o.horizon);
  if (n == 0) throw Error(ErrorCode::parameter, "horizon must be positive");
  const auto schedule = parse_schedule(o.schedule, std::min(n, available));

  VerdictOptions options;
  if (!o.tau.empty()) options.tau = parse_real(o.tau);
  options.counting.threads = o.threads;
  NormalityVerdict verdict = normality_verdict(seq, measure, o.k, schedule, options);
  verdict.final_report.requested_horizon = n;
  verdict.final_report.truncated = n > verdict.final_report.horizon;
  if (o.block > 1) verdict.final_report.alignment = "aligned";

  RunConfig config;
  config.set("command", "analyze");
  if (auto p = provenance(input.header); !p.empty()) config.set("source", p);
  config.set("b", std::to_string(base));
  config.set("k", std::to_string(o.k));
  config.set("measure", o.measure);
  config.set("block", std::to_string(o.block));
  config.set("skip", std::to_string(o.skip));
  config.set("N", std::to_string(n));
  config.set("schedule", o.schedule);
  config.set("tau", o.tau.empty() ? "auto" : o.tau);

  const std::string records =
      format_report(config, verdict.final_report, &verdict.curve, &verdict);
  write_text_file(o.out, records);
  const std::string table = format_report_table(verdict.final_report, &verdict.curve, &verdict);
  if (!o.table.empty()) {
    write_text_file(o.table, table);
  } else if (o.out != "-") {
    std::cout << table;
  }
  return 0;
}

struct VerifyOptions {
  std::string recipe;
  std::vector<std::string> params;
  std::string out = "-";
};

int cmd_verify(const VerifyOptions& o) {
  const RecipeResult result = run_recipe(o.recipe, o.params);
  write_text_file(o.out, format_recipe(result));
  if (!result.hypothesis_met) return kExitUsage;
  return result.passed ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digit-stream generation, selection and normality analysis"};
  app.set_config("--config", "", "INI/TOML file with option defaults");
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Write the first N digits of a generator");
  g->add_option("spec", gen.spec, "Generator spec, e.g. 'champernowne b=2'")->required();
  g->add_option("-n,--count", gen.count, "Number of digits (also accepted as N=...)");
  g->add_option("-o,--out", gen.out, "Output file, '-' for stdout")->capture_default_str();

  SelectOptions sel;
  auto* s = app.add_subcommand("select", "Select digits along an index sequence");
  s->add_option("-i,--in", sel.in, "Input stream, '-' for stdin")->capture_default_str();
  s->add_option("-s,--selection", sel.selection,
                "ap:k=2,l=3 | periodic:m=6,r=1|2 | evper:pre=3|7;m=2,r=1 | explicit:1|4|9")
      ->required();
  s->add_option("-o,--out", sel.out, "Output file, '-' for stdout")->capture_default_str();

  AnalyzeOptions an;
  auto* a = app.add_subcommand("analyze", "Pattern frequencies, discrepancy curve and verdict");
  a->add_option("-i,--in", an.in, "Input stream, '-' for stdin")->capture_default_str();
  a->add_option("-o,--out", an.out, "Machine-readable report, '-' for stdout")
      ->capture_default_str();
  a->add_option("--table", an.table, "Also write the human-readable table here");
  a->add_option("-k,--length", an.k, "Maximum pattern length")->capture_default_str();
  a->add_option("-m,--measure", an.measure, "uniform | thm3 | diagonal | w0|w1|...")
      ->capture_default_str();
  a->add_option("-K,--block", an.block, "Analyze width-K aligned blocks")->capture_default_str();
  a->add_option("--skip", an.skip, "Digits to drop before the block grid")->capture_default_str();
  a->add_option("-b,--base", an.expected_base, "Expected base; error if the stream differs");
  a->add_option("-N,--horizon", an.horizon, "Number of start positions (default: all)");
  a->add_option("--schedule", an.schedule, "geometric[:points] or a list N1,N2,...")
      ->capture_default_str();
  a->add_option("--tau", an.tau, "Fixed verdict tolerance (default: per-pattern)");
  a->add_option("--threads", an.threads, "Counting threads")->capture_default_str();

  VerifyOptions ver;
  auto* v = app.add_subcommand("verify", "Run an end-to-end recipe: thm1, prop2, thm2, thm3");
  v->add_option("recipe", ver.recipe, "thm1 | prop2 | thm2 | thm3")->required();
  v->add_option("params", ver.params, "key=value parameters, e.g. b=2 N=10^6");
  v->add_option("-o,--out", ver.out, "Result file, '-' for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_select(sel);
    if (*a) return cmd_analyze(an);
    if (*v) return cmd_verify(ver);
  } catch (const Error& e) {
    std::cerr << "nlab: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "nlab: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
