#include "nlab/generators.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <random>

namespace nlab {

namespace {

using boost::multiprecision::cpp_int;

class ChampernowneSource final : public DigitSource {
 public:
  explicit ChampernowneSource(unsigned base) : base_(base) { load(); }

  std::size_t read(std::span<Digit> out) override {
    std::size_t produced = 0;
    while (produced < out.size()) {
      if (next_ == digits_.size()) {
        ++number_;
        load();
      }
      const std::size_t n = std::min(out.size() - produced, digits_.size() - next_);
      std::copy_n(digits_.begin() + static_cast<std::ptrdiff_t>(next_), n,
                  out.begin() + static_cast<std::ptrdiff_t>(produced));
      next_ += n;
      produced += n;
    }
    return produced;
  }

 private:
  void load() {
    digits_.clear();
    for (std::uint64_t v = number_; v; v /= base_) digits_.push_back(static_cast<Digit>(v % base_));
    std::reverse(digits_.begin(), digits_.end());
    next_ = 0;
  }

  unsigned base_;
  std::uint64_t number_ = 1;
  std::vector<Digit> digits_;
  std::size_t next_ = 0;
};

class IidSource final : public DigitSource {
 public:
  IidSource(const BernoulliMeasure& measure, std::uint64_t seed) : engine_(seed) {
    constexpr std::uint64_t kScale = std::uint64_t{1} << 53;
    const auto n = measure.alphabet().size();
    thresholds_.resize(n);
    if (measure.is_exact()) {
      Rational cdf = 0;
      for (std::uint64_t d = 0; d < n; ++d) {
        cdf += measure.exact_weight(static_cast<Digit>(d));
        cpp_int t = (boost::multiprecision::numerator(cdf) << 53) /
                    boost::multiprecision::denominator(cdf);
        thresholds_[d] = t.convert_to<std::uint64_t>();
      }
    } else {
      long double cdf = 0;
      for (std::uint64_t d = 0; d < n; ++d) {
        cdf += measure.weight(static_cast<Digit>(d));
        thresholds_[d] = static_cast<std::uint64_t>(std::min<long double>(cdf, 1.0L) * kScale);
      }
    }
    thresholds_.back() = kScale;
  }

  std::size_t read(std::span<Digit> out) override {
    for (Digit& d : out) {
      const std::uint64_t r = engine_() >> 11;
      d = static_cast<Digit>(std::upper_bound(thresholds_.begin(), thresholds_.end(), r) -
                             thresholds_.begin());
    }
    return out.size();
  }

 private:
  std::mt19937_64 engine_;
  std::vector<std::uint64_t> thresholds_;
};

std::uint64_t ceil_to_u64(const Rational& q) {
  cpp_int num = boost::multiprecision::numerator(q);
  cpp_int den = boost::multiprecision::denominator(q);
  cpp_int c = (num + den - 1) / den;
  if (c > cpp_int(std::uint64_t{1} << 62)) {
    throw Error(ErrorCode::unsupported_construction, "weighted_concat stage too large");
  }
  return c.convert_to<std::uint64_t>();
}

class WeightedConcatSource final : public DigitSource {
 public:
  WeightedConcatSource(BernoulliMeasure measure, unsigned growth)
      : measure_(std::move(measure)), growth_(growth), size_(measure_.alphabet().size()) {
    start_stage();
  }

  std::size_t read(std::span<Digit> out) override {
    std::size_t produced = 0;
    while (produced < out.size()) {
      if (next_ == string_.size()) advance();
      const std::size_t n = std::min(out.size() - produced, string_.size() - next_);
      std::copy_n(string_.begin() + static_cast<std::ptrdiff_t>(next_), n,
                  out.begin() + static_cast<std::ptrdiff_t>(produced));
      next_ += n;
      produced += n;
    }
    return produced;
  }

 private:
  void start_stage() {
    ++stage_;
    // Exact prefix weights of all length-L strings, row-major.
    std::vector<Rational> next(weights_.empty() ? size_ : weights_.size() * size_);
    if (weights_.empty()) {
      for (std::uint64_t d = 0; d < size_; ++d) next[d] = measure_.exact_weight(static_cast<Digit>(d));
    } else {
      for (std::uint64_t c = 0; c < next.size(); ++c) {
        next[c] = weights_[c / size_] * measure_.exact_weight(static_cast<Digit>(c % size_));
      }
    }
    weights_ = std::move(next);
    cpp_int scale = 1;
    for (unsigned i = 0; i < growth_ * stage_; ++i) scale *= size_;
    counts_.resize(weights_.size());
    active_.clear();
    for (std::uint64_t c = 0; c < weights_.size(); ++c) {
      counts_[c] = ceil_to_u64(weights_[c] * Rational(scale));
      if (counts_[c] > 0) active_.push_back(c);
    }
    pass_ = 0;
    index_ = 0;
    load(active_.front());
  }

  void advance() {
    if (++index_ == active_.size()) {
      ++pass_;
      std::erase_if(active_, [&](std::uint64_t c) { return counts_[c] <= pass_; });
      index_ = 0;
      if (active_.empty()) {
        start_stage();
        return;
      }
    }
    load(active_[index_]);
  }

  void load(std::uint64_t code) {
    string_.assign(stage_, 0);
    for (std::size_t i = stage_; i-- > 0;) {
      string_[i] = static_cast<Digit>(code % size_);
      code /= size_;
    }
    next_ = 0;
  }

  BernoulliMeasure measure_;
  unsigned growth_;
  std::uint64_t size_;
  unsigned stage_ = 0;
  std::vector<Rational> weights_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> active_;
  std::uint64_t pass_ = 0;
  std::size_t index_ = 0;
  std::vector<Digit> string_;
  std::size_t next_ = 0;
};

class PrefixZerosSource final : public DigitSource {
 public:
  PrefixZerosSource(std::uint64_t zeros, DigitSequence inner)
      : zeros_(zeros), inner_(std::move(inner)) {}

  std::size_t read(std::span<Digit> out) override {
    const auto z = static_cast<std::size_t>(std::min<std::uint64_t>(zeros_, out.size()));
    std::fill_n(out.begin(), z, Digit{0});
    zeros_ -= z;
    return z + inner_.read(out.subspan(z));
  }

 private:
  std::uint64_t zeros_;
  DigitSequence inner_;
};

class RepeatSource final : public DigitSource {
 public:
  RepeatSource(DigitSequence inner, unsigned repeat) : inner_(std::move(inner)), repeat_(repeat) {}

  std::size_t read(std::span<Digit> out) override {
    std::size_t produced = 0;
    while (produced < out.size()) {
      if (left_ == 0) {
        if (inner_.read(std::span<Digit>(&current_, 1)) == 0) break;
        left_ = repeat_;
      }
      const std::size_t n = std::min<std::size_t>(out.size() - produced, left_);
      std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(produced), n, current_);
      produced += n;
      left_ -= static_cast<unsigned>(n);
    }
    return produced;
  }

 private:
  DigitSequence inner_;
  unsigned repeat_;
  Digit current_ = 0;
  unsigned left_ = 0;
};

class FillZeroSource final : public DigitSource {
 public:
  FillZeroSource(DigitSequence inner, IndexCursor cursor)
      : inner_(std::move(inner)), cursor_(std::move(cursor)), pending_(cursor_.next()) {}

  std::size_t read(std::span<Digit> out) override {
    std::size_t produced = 0;
    while (produced < out.size()) {
      if (pending_ && *pending_ == position_) {
        if (inner_.read(out.subspan(produced, 1)) == 0) break;
        pending_ = cursor_.next();
      } else {
        out[produced] = 0;
      }
      ++produced;
      ++position_;
    }
    return produced;
  }

 private:
  DigitSequence inner_;
  IndexCursor cursor_;
  std::optional<std::uint64_t> pending_;
  std::uint64_t position_ = 1;
};

// ------------------------------------------------------------- spec text

struct Field {
  std::string value;
  std::size_t position;        // start of the token
  std::size_t value_position;  // start of the value
};
using Fields = std::map<std::string, Field>;

Fields tokenize(std::string_view text) {
  Fields fields;
  std::size_t pos = 0;
  bool first = true;
  auto is_sep = [](char c) { return c == ';' || std::isspace(static_cast<unsigned char>(c)); };
  while (pos < text.size()) {
    while (pos < text.size() && is_sep(text[pos])) ++pos;
    if (pos >= text.size()) break;
    const std::size_t start = pos;
    bool grouped = false;
    while (pos < text.size() && !is_sep(text[pos])) {
      // "key=(...)" keeps separators inside the parentheses.
      if (text[pos] == '(' && pos > start && text[pos - 1] == '=') {
        const auto close = text.find(')', pos);
        if (close == std::string_view::npos) throw ParseError(pos, "unclosed '('");
        grouped = true;
        pos = close + 1;
        continue;
      }
      ++pos;
    }
    auto token = text.substr(start, pos - start);
    auto eq = token.find('=');
    std::string key;
    std::string value;
    std::size_t value_start = start;
    if (eq == std::string_view::npos) {
      // A bare word names the kind when it comes first, the measure otherwise.
      key = first ? "kind" : "measure";
      value = std::string(token);
    } else {
      if (eq == 0) throw ParseError(start, "empty key");
      key = std::string(token.substr(0, eq));
      value = std::string(token.substr(eq + 1));
      value_start = start + eq + 1;
      if (grouped && value.size() >= 2 && value.front() == '(' && value.back() == ')') {
        value = value.substr(1, value.size() - 2);
        ++value_start;
      }
    }
    if (fields.count(key)) throw ParseError(start, "duplicate key '" + key + "'");
    fields[key] = Field{value, start, value_start};
    first = false;
  }
  return fields;
}

unsigned to_unsigned(const Field& f, const std::string& key) {
  unsigned v = 0;
  auto [end, ec] = std::from_chars(f.value.data(), f.value.data() + f.value.size(), v);
  if (ec != std::errc() || end != f.value.data() + f.value.size() || f.value.empty()) {
    throw ParseError(f.position, key + " must be a nonnegative integer");
  }
  return v;
}

std::uint64_t to_u64(const Field& f, const std::string& key) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(f.value.data(), f.value.data() + f.value.size(), v);
  if (ec != std::errc() || end != f.value.data() + f.value.size() || f.value.empty()) {
    throw ParseError(f.position, key + " must be a nonnegative integer");
  }
  return v;
}

GeneratorSpec from_fields(const Fields& all, std::size_t origin);

void allow_only(const Fields& f, std::initializer_list<const char*> keys, bool inner) {
  for (const auto& [k, v] : f) {
    if (k.rfind("inner.", 0) == 0) {
      if (!inner) throw ParseError(v.position, "this kind takes no inner generator");
      continue;
    }
    bool ok = false;
    for (const char* allowed : keys) ok = ok || k == allowed;
    if (!ok) throw ParseError(v.position, "unknown key '" + k + "'");
  }
}

std::shared_ptr<const GeneratorSpec> inner_from(const Fields& f, std::size_t origin) {
  Fields inner;
  for (const auto& [k, v] : f) {
    if (k.rfind("inner.", 0) == 0) inner[k.substr(6)] = v;
  }
  if (inner.empty()) return nullptr;
  if (!inner.count("kind")) throw ParseError(origin, "inner generator needs inner.kind");
  return std::make_shared<const GeneratorSpec>(from_fields(inner, origin));
}

MeasureSpec measure_from(const Fields& f) {
  MeasureSpec m;
  if (f.count("b")) m.base = to_unsigned(f.at("b"), "b");
  if (f.count("K")) m.width = to_unsigned(f.at("K"), "K");
  if (f.count("measure")) m.text = f.at("measure").value;
  try {
    (void)m.build();
  } catch (const ParseError& e) {
    // Positions inside the measure text become positions in the spec.
    throw ParseError(f.at("measure").value_position + e.position(), e.detail());
  } catch (const Error& e) {
    const std::size_t at = f.count("measure") ? f.at("measure").position : 0;
    throw ParseError(at, e.what());
  }
  return m;
}

void check_thm3_inner(const Theorem3Spec& t) {
  auto measure = t.inner->target_measure();
  if (!measure || !measure->same_as(theorem3_measure(t.base, t.width))) {
    throw Error(ErrorCode::measure_mismatch,
                "thm3 inner generator must sample theorem3_measure(b=" + std::to_string(t.base) +
                    ", K=" + std::to_string(t.width) + ")");
  }
}

GeneratorSpec from_fields(const Fields& f, std::size_t origin) {
  if (!f.count("kind")) throw ParseError(origin, "missing kind");
  const Field& kind = f.at("kind");
  GeneratorSpec spec;
  if (kind.value == "champernowne") {
    allow_only(f, {"kind", "b"}, false);
    ChampernowneSpec c;
    if (f.count("b")) c.base = to_unsigned(f.at("b"), "b");
    if (c.base < 2) throw ParseError(f.at("b").position, "b must be at least 2");
    spec.kind = c;
  } else if (kind.value == "iid") {
    allow_only(f, {"kind", "b", "K", "measure", "seed"}, false);
    IidSpec s;
    s.measure = measure_from(f);
    if (f.count("seed")) s.seed = to_u64(f.at("seed"), "seed");
    spec.kind = s;
  } else if (kind.value == "concat" || kind.value == "weighted_concat") {
    allow_only(f, {"kind", "b", "K", "measure", "growth"}, false);
    WeightedConcatSpec s;
    s.measure = measure_from(f);
    if (f.count("growth")) s.growth = to_unsigned(f.at("growth"), "growth");
    if (s.growth < 1) throw ParseError(f.at("growth").position, "growth must be at least 1");
    spec.kind = s;
  } else if (kind.value == "thm3") {
    allow_only(f, {"kind", "b", "K", "L", "seed", "inner"}, true);
    Theorem3Spec t;
    if (f.count("b")) t.base = to_unsigned(f.at("b"), "b");
    if (f.count("K")) t.width = to_unsigned(f.at("K"), "K");
    if (f.count("L")) t.offset = to_unsigned(f.at("L"), "L");
    if (t.base < 2 || t.width < 1 || t.offset < 1) {
      throw ParseError(kind.position, "thm3 needs b >= 2, K >= 1, L >= 1");
    }
    t.inner = inner_from(f, origin);
    if (t.inner && (f.count("inner") || f.count("seed"))) {
      throw ParseError(f.count("seed") ? f.at("seed").position : f.at("inner").position,
                       "give either inner.* keys or inner=/seed=, not both");
    }
    if (!t.inner) {
      MeasureSpec m{t.base, t.width, "thm3"};
      const std::string shorthand = f.count("inner") ? f.at("inner").value : "iid";
      if (shorthand == "iid") {
        IidSpec s{m, f.count("seed") ? to_u64(f.at("seed"), "seed") : 0};
        t.inner = std::make_shared<const GeneratorSpec>(GeneratorSpec{s});
      } else if (shorthand == "concat") {
        if (f.count("seed")) throw ParseError(f.at("seed").position, "concat takes no seed");
        t.inner = std::make_shared<const GeneratorSpec>(GeneratorSpec{WeightedConcatSpec{m, 2}});
      } else {
        throw ParseError(f.at("inner").position, "inner must be iid or concat");
      }
    }
    try {
      check_thm3_inner(t);
    } catch (const Error& e) {
      throw ParseError(kind.position, e.what());
    }
    spec.kind = t;
  } else if (kind.value == "duplicate") {
    allow_only(f, {"kind", "r"}, true);
    DuplicateSpec d;
    if (f.count("r")) d.repeat = to_unsigned(f.at("r"), "r");
    if (d.repeat < 2) throw ParseError(f.count("r") ? f.at("r").position : 0, "r must be at least 2");
    d.inner = inner_from(f, origin);
    if (!d.inner) throw ParseError(kind.position, "duplicate needs inner.kind=...");
    spec.kind = d;
  } else if (kind.value == "fill_zero") {
    allow_only(f, {"kind", "sel"}, true);
    FillZeroSpec z;
    if (!f.count("sel")) throw ParseError(kind.position, "fill_zero needs sel=");
    try {
      z.selection = SelectionSequence::parse(f.at("sel").value);
    } catch (const ParseError& e) {
      throw ParseError(f.at("sel").value_position + e.position(), e.detail());
    }
    z.inner = inner_from(f, origin);
    if (!z.inner) throw ParseError(kind.position, "fill_zero needs inner.kind=...");
    spec.kind = z;
  } else {
    throw ParseError(kind.position, "unknown generator kind '" + kind.value + "'");
  }
  return spec;
}

std::string measure_text(const MeasureSpec& m) {
  std::string s = "b=" + std::to_string(m.base);
  if (m.width != 1) s += ";K=" + std::to_string(m.width);
  return s + ";measure=" + m.text;
}

std::string prefixed(const std::string& canonical, const std::string& prefix) {
  std::string out;
  std::size_t start = 0;
  while (start <= canonical.size()) {
    auto end = start;
    while (end < canonical.size() && canonical[end] != ';') {
      if (canonical[end] == '(') end = canonical.find(')', end);
      ++end;
    }
    if (!out.empty()) out += ';';
    out += prefix + canonical.substr(start, end - start);
    start = end + 1;
  }
  return out;
}

}  // namespace

DigitSequence champernowne(unsigned base) {
  Alphabet alphabet(base);
  return DigitSequence(alphabet, std::make_unique<ChampernowneSource>(base));
}

DigitSequence iid_sampled(const BernoulliMeasure& measure, std::uint64_t seed) {
  return DigitSequence(measure.alphabet(), std::make_unique<IidSource>(measure, seed));
}

DigitSequence weighted_concat(const BernoulliMeasure& measure, unsigned growth) {
  if (!measure.is_exact()) {
    throw Error(ErrorCode::unsupported_construction,
                "weighted_concat needs exact rational weights");
  }
  if (growth < 1) throw Error(ErrorCode::parameter, "growth must be at least 1");
  return DigitSequence(measure.alphabet(),
                       std::make_unique<WeightedConcatSource>(measure, growth));
}

std::uint64_t weighted_concat_count(const BernoulliMeasure& measure, unsigned growth,
                                    unsigned stage, std::uint64_t string_code) {
  const std::uint64_t size = measure.alphabet().size();
  Rational w = 1;
  for (unsigned i = 0; i < stage; ++i) {
    w *= measure.exact_weight(static_cast<Digit>(string_code % size));
    string_code /= size;
  }
  cpp_int scale = 1;
  for (unsigned i = 0; i < growth * stage; ++i) scale *= size;
  return ceil_to_u64(w * Rational(scale));
}

DigitSequence theorem3_point(unsigned base, unsigned width, DigitSequence inner,
                             const BernoulliMeasure& inner_measure, unsigned offset) {
  Alphabet blocks(base, width);
  if (!(inner.alphabet() == blocks)) {
    throw Error(ErrorCode::measure_mismatch, "inner stream is over " +
                                                 inner.alphabet().to_string() + ", expected " +
                                                 blocks.to_string());
  }
  if (!inner_measure.same_as(theorem3_measure(base, width))) {
    throw Error(ErrorCode::measure_mismatch, "inner measure is not theorem3_measure(b=" +
                                                 std::to_string(base) +
                                                 ", K=" + std::to_string(width) + ")");
  }
  if (offset < 1) throw Error(ErrorCode::parameter, "offset L must be at least 1");
  DigitSequence flat = block_flatten(std::move(inner));
  if (offset == 1) return flat;
  Alphabet digits(base);
  return DigitSequence(digits, std::make_unique<PrefixZerosSource>(offset - 1, std::move(flat)));
}

DigitSequence duplicate(DigitSequence inner, unsigned repeat) {
  if (repeat < 2) {
    throw Error(ErrorCode::parameter, "duplicate needs r >= 2, got " + std::to_string(repeat));
  }
  Alphabet alphabet = inner.alphabet();
  std::optional<std::uint64_t> len;
  if (inner.known_length()) len = *inner.known_length() * repeat;
  return DigitSequence(alphabet, std::make_unique<RepeatSource>(std::move(inner), repeat), len);
}

DigitSequence fill_zero(DigitSequence inner, const SelectionSequence& selection) {
  Alphabet alphabet = inner.alphabet();
  return DigitSequence(alphabet,
                       std::make_unique<FillZeroSource>(std::move(inner), selection.cursor()));
}

// ------------------------------------------------------------------ specs

BernoulliMeasure MeasureSpec::build() const {
  Alphabet alphabet(base, width);
  if (text == "uniform") return BernoulliMeasure::uniform(alphabet);
  if (text == "thm3") return theorem3_measure(base, width);
  if (text == "diagonal") {
    if (width != 2) throw Error(ErrorCode::parameter, "diagonal measure needs K=2");
    return diagonal_pair_measure(base);
  }
  std::vector<Rational> weights;
  std::size_t start = 0;
  for (;;) {
    auto bar = text.find('|', start);
    auto item = std::string_view(text).substr(
        start, bar == std::string::npos ? std::string::npos : bar - start);
    try {
      weights.push_back(parse_rational(item));
    } catch (const Error& e) {
      throw ParseError(start, e.what());
    }
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return BernoulliMeasure::exact(alphabet, std::move(weights));
}

GeneratorSpec GeneratorSpec::parse(std::string_view text) { return from_fields(tokenize(text), 0); }

std::string GeneratorSpec::to_string() const {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ChampernowneSpec>) {
          return "kind=champernowne;b=" + std::to_string(s.base);
        } else if constexpr (std::is_same_v<T, IidSpec>) {
          return "kind=iid;" + measure_text(s.measure) + ";seed=" + std::to_string(s.seed);
        } else if constexpr (std::is_same_v<T, WeightedConcatSpec>) {
          return "kind=concat;" + measure_text(s.measure) + ";growth=" + std::to_string(s.growth);
        } else if constexpr (std::is_same_v<T, Theorem3Spec>) {
          return "kind=thm3;b=" + std::to_string(s.base) + ";K=" + std::to_string(s.width) +
                 ";L=" + std::to_string(s.offset) + ";" +
                 prefixed(s.inner->to_string(), "inner.");
        } else if constexpr (std::is_same_v<T, DuplicateSpec>) {
          return "kind=duplicate;r=" + std::to_string(s.repeat) + ";" +
                 prefixed(s.inner->to_string(), "inner.");
        } else {
          std::string sel = s.selection.to_string();
          if (sel.find(';') != std::string::npos) sel = "(" + sel + ")";
          return "kind=fill_zero;sel=" + sel + ";" +
                 prefixed(s.inner->to_string(), "inner.");
        }
      },
      kind);
}

Alphabet GeneratorSpec::alphabet() const {
  return std::visit(
      [](const auto& s) -> Alphabet {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ChampernowneSpec>) {
          return Alphabet(s.base);
        } else if constexpr (std::is_same_v<T, IidSpec> || std::is_same_v<T, WeightedConcatSpec>) {
          return Alphabet(s.measure.base, s.measure.width);
        } else if constexpr (std::is_same_v<T, Theorem3Spec>) {
          return Alphabet(s.base);
        } else {
          return s.inner->alphabet();
        }
      },
      kind);
}

std::optional<BernoulliMeasure> GeneratorSpec::target_measure() const {
  if (auto* c = std::get_if<ChampernowneSpec>(&kind)) {
    return BernoulliMeasure::uniform(Alphabet(c->base));
  }
  if (auto* s = std::get_if<IidSpec>(&kind)) return s->measure.build();
  if (auto* s = std::get_if<WeightedConcatSpec>(&kind)) return s->measure.build();
  return std::nullopt;
}

DigitSequence GeneratorSpec::instantiate() const {
  return std::visit(
      [](const auto& s) -> DigitSequence {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ChampernowneSpec>) {
          return champernowne(s.base);
        } else if constexpr (std::is_same_v<T, IidSpec>) {
          return iid_sampled(s.measure.build(), s.seed);
        } else if constexpr (std::is_same_v<T, WeightedConcatSpec>) {
          return weighted_concat(s.measure.build(), s.growth);
        } else if constexpr (std::is_same_v<T, Theorem3Spec>) {
          check_thm3_inner(s);
          return theorem3_point(s.base, s.width, s.inner->instantiate(),
                                *s.inner->target_measure(), s.offset);
        } else if constexpr (std::is_same_v<T, DuplicateSpec>) {
          return duplicate(s.inner->instantiate(), s.repeat);
        } else {
          return fill_zero(s.inner->instantiate(), s.selection);
        }
      },
      kind);
}

}  // namespace nlab
