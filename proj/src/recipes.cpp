#include "nlab/recipes.hpp"

#include <cmath>
#include <sstream>

#include "nlab/generators.hpp"

namespace nlab {

namespace {

std::string fmt(double v) { return format_double(v); }

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void add(RecipeResult& r, std::string name, double value, std::string bound, bool pass) {
  r.measurements.push_back({std::move(name), value, std::move(bound), pass});
}

void finish(RecipeResult& r) {
  r.passed = r.hypothesis_met;
  for (const auto& m : r.measurements) r.passed = r.passed && m.pass;
}

std::shared_ptr<const std::vector<Digit>> materialize(DigitSequence seq, std::uint64_t n) {
  return std::make_shared<const std::vector<Digit>>(seq.take(static_cast<std::size_t>(n)));
}

}  // namespace

std::string format_recipe(const RecipeResult& result) {
  std::ostringstream out;
  out << "#nlab-verify v1\n";
  for (const auto& [k, v] : result.config.entries()) out << "config " << k << '=' << v << '\n';
  for (const auto& m : result.measurements) {
    out << "measure name=" << m.name << " value=" << fmt(m.value) << " bound=" << m.bound
        << " status=" << (m.pass ? "pass" : "fail") << '\n';
  }
  if (!result.hypothesis_met) out << "hypothesis status=not-met note=" << result.hypothesis_note << '\n';
  out << "result recipe=" << result.recipe << " status="
      << (!result.hypothesis_met ? "hypothesis-not-met" : result.passed ? "pass" : "fail") << '\n';
  return out.str();
}

RecipeResult verify_theorem1(const Theorem1Params& p) {
  RecipeResult r;
  r.recipe = "thm1";
  r.config.set("recipe", "thm1");
  r.config.set("b", std::to_string(p.base));
  r.config.set("N", std::to_string(p.horizon));
  r.config.set("inner", p.inner);
  if (p.inner == "iid") r.config.set("seed", std::to_string(p.seed));
  r.config.set("k", std::to_string(p.pattern_length));
  r.config.set("offsets", join(p.offsets));
  r.config.set("steps", join(p.steps));
  r.config.set("tau", fmt(p.tau));

  const Alphabet digits(p.base);
  const auto uniform = BernoulliMeasure::uniform(digits);
  DigitSequence inner = p.inner == "iid" ? iid_sampled(uniform, p.seed) : champernowne(p.base);
  if (p.inner != "iid" && p.inner != "champernowne") {
    throw Error(ErrorCode::parameter, "thm1 inner must be champernowne or iid");
  }
  std::uint64_t max_offset = 1, max_step = 1;
  for (auto o : p.offsets) max_offset = std::max(max_offset, o);
  for (auto s : p.steps) max_step = std::max(max_step, s);
  const std::uint64_t need = max_offset + max_step * (p.horizon + p.pattern_length);
  auto buffer = materialize(duplicate(std::move(inner), 2), need);

  VerdictOptions options;
  options.tau = p.tau;

  // Step 1: the duplicated sequence itself.
  const std::vector<std::uint64_t> one{1};
  auto full = wall_matrix(digits, buffer, uniform, 2, one, one, p.horizon, options);
  const auto& fv = full.front().verdict;
  const double dev01 = fv.final_report.row(std::vector<Digit>{0, 1}).deviation;
  const double predicted = 1.0 / (2.0 * p.base * p.base);
  add(r, "step1.deviation[0,1]", dev01,
      "|abs(dev)-" + fmt(predicted) + "|<=" + fmt(p.witness_slack),
      std::abs(std::abs(dev01) - predicted) <= p.witness_slack);
  add(r, "step1.non_normal_witness", fv.kind == VerdictKind::non_normal_witness ? 1 : 0, "==1",
      fv.kind == VerdictKind::non_normal_witness);

  auto grid = wall_matrix(digits, buffer, uniform, p.pattern_length, p.offsets, p.steps,
                          p.horizon, options);
  for (const auto& cell : grid) {
    const double d = cell.verdict.final_report.discrepancy;
    add(r, "k=" + std::to_string(cell.offset) + ",l=" + std::to_string(cell.step) + ".discrepancy",
        d, "<" + fmt(p.tau), d < p.tau);
  }
  finish(r);
  return r;
}

RecipeResult verify_proposition2(const Proposition2Params& p) {
  RecipeResult r;
  r.recipe = "prop2";
  r.config.set("recipe", "prop2");
  r.config.set("b", std::to_string(p.base));
  r.config.set("N", std::to_string(p.horizon));
  r.config.set("sel", p.selection.to_string());
  r.config.set("seed", std::to_string(p.seed));

  const Density density = lower_density(p.selection);
  if (density.is_estimate || density.value >= 1) {
    r.hypothesis_met = false;
    r.hypothesis_note = "selection-must-have-exact-lower-density-below-1";
    finish(r);
    return r;
  }
  const Alphabet digits(p.base);
  const auto uniform = BernoulliMeasure::uniform(digits);
  const double delta = to_double(density.value);

  DigitSequence filled = fill_zero(iid_sampled(uniform, p.seed), p.selection);
  FrequencyReport report = count_patterns(filled, p.horizon, 1, uniform);
  const double f0 = report.row(std::vector<Digit>{0}).empirical;
  const double predicted = (1.0 - delta) + delta / p.base;
  add(r, "digit0.frequency", f0, fmt(predicted) + "+-" + fmt(p.frequency_slack),
      std::abs(f0 - predicted) <= p.frequency_slack);

  auto selected = select(fill_zero(iid_sampled(uniform, p.seed), p.selection), p.selection)
                      .take(static_cast<std::size_t>(p.roundtrip_prefix));
  auto original = iid_sampled(uniform, p.seed).take(static_cast<std::size_t>(p.roundtrip_prefix));
  add(r, "roundtrip.prefix", double(p.roundtrip_prefix), "bit-identical", selected == original);
  finish(r);
  return r;
}

RecipeResult verify_theorem2(const Theorem2Params& p) {
  RecipeResult r;
  r.recipe = "thm2";
  r.config.set("recipe", "thm2");
  r.config.set("b", std::to_string(p.base));
  r.config.set("N", std::to_string(p.horizon));
  r.config.set("periods", join(p.periods));
  r.config.set("seed", std::to_string(p.seed));
  r.config.set("k", std::to_string(p.pattern_length));
  r.config.set("tau", fmt(p.tau));

  const Alphabet digits(p.base);
  const auto uniform = BernoulliMeasure::uniform(digits);
  // Density >= 1/2 selections need at most 2N + k digits of the source.
  auto buffer = materialize(iid_sampled(uniform, p.seed), 2 * (p.horizon + p.pattern_length));
  {
    DigitSequence full = DigitSequence::view(digits, buffer);
    const double d = count_patterns(full, p.horizon, p.pattern_length, uniform).discrepancy;
    add(r, "full.discrepancy", d, "<" + fmt(p.tau), d < p.tau);
  }
  const auto family = density_family(p.periods);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const std::string t = std::to_string(p.periods[i]);
    DigitSequence selected = select(DigitSequence::view(digits, buffer), family[i]);
    const double d = count_patterns(selected, p.horizon, p.pattern_length, uniform).discrepancy;
    add(r, "t=" + t + ".selected.discrepancy", d, "<" + fmt(p.tau), d < p.tau);

    // Zero-filled counterpart: normal along the selection, yet the full
    // stream carries (1 - delta)(1 - 1/b) extra mass on digit 0.
    const double delta = to_double(lower_density(family[i]).value);
    DigitSequence filled = fill_zero(DigitSequence::view(digits, buffer), family[i]);
    const double dev0 = count_patterns(filled, p.horizon, 1, uniform)
                            .row(std::vector<Digit>{0})
                            .deviation;
    const double bound = (1.0 - delta) * (1.0 - 1.0 / p.base) / 2.0;
    add(r, "t=" + t + ".filled.deviation[0]", dev0, ">=" + fmt(bound) + "-" + fmt(p.bound_slack),
        dev0 >= bound - p.bound_slack);
  }
  finish(r);
  return r;
}

RecipeResult verify_theorem3(const Theorem3Params& p) {
  RecipeResult r;
  r.recipe = "thm3";
  r.config.set("recipe", "thm3");
  r.config.set("b", std::to_string(p.base));
  r.config.set("K", std::to_string(p.width));
  r.config.set("L", std::to_string(p.offset));
  r.config.set("sel", p.selection.to_string());
  r.config.set("blocks", std::to_string(p.blocks));
  r.config.set("seed", std::to_string(p.seed));
  r.config.set("k", std::to_string(p.pattern_length));
  r.config.set("tau", fmt(p.tau));

  if (!p.selection.as_periodic()) {
    r.hypothesis_met = false;
    r.hypothesis_note = "selection-must-be-periodic";
    finish(r);
    return r;
  }
  if (auto n = thickness_violation(p.selection, p.width, p.offset)) {
    r.hypothesis_met = false;
    r.hypothesis_note = "block-" + std::to_string(*n) + "-lies-inside-the-selection";
    finish(r);
    return r;
  }
  const auto nu = theorem3_measure(p.base, p.width);
  const std::uint64_t total = p.offset - 1 + p.blocks * p.width;
  auto buffer = materialize(
      theorem3_point(p.base, p.width, iid_sampled(nu, p.seed), nu, p.offset), total);
  const Alphabet digits(p.base);

  // Aligned block [0..0] frequency on the grid starting at position L.
  {
    DigitSequence seq = DigitSequence::view(digits, buffer);
    seq.skip(p.offset - 1);
    DigitSequence blocks = block_recode(std::move(seq), p.width);
    auto report = count_patterns(blocks, p.blocks, 1, BernoulliMeasure::uniform(nu.alphabet()));
    const double f = report.row(std::vector<Digit>{0}).empirical;
    const double predicted = 0.5 * to_double(inverse_power(p.base, p.width));
    const double uniform_value = to_double(inverse_power(p.base, p.width));
    add(r, "aligned.zero_block.frequency", f, fmt(predicted) + "+-" + fmt(p.frequency_slack),
        std::abs(f - predicted) <= p.frequency_slack);
    add(r, "aligned.zero_block.gap_to_uniform", std::abs(f - uniform_value),
        ">" + fmt(p.frequency_slack), std::abs(f - uniform_value) > p.frequency_slack);
  }
  {
    const auto uniform = BernoulliMeasure::uniform(digits);
    DigitSequence selected = select(DigitSequence::view(digits, buffer), p.selection);
    const std::uint64_t available = p.selection.count_up_to(buffer->size());
    const std::uint64_t horizon =
        available >= p.pattern_length ? available - p.pattern_length + 1 : 1;
    const double d = count_patterns(selected, horizon, p.pattern_length, uniform).discrepancy;
    add(r, "selected.discrepancy", d, "<" + fmt(p.tau), d < p.tau);
  }
  finish(r);
  return r;
}

}  // namespace nlab
