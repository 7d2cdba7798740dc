#include "nlab/shiftspace.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace nlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_alphabet: return "invalid-alphabet";
    case ErrorCode::invalid_measure: return "invalid-measure";
    case ErrorCode::invalid_pattern: return "invalid-pattern";
    case ErrorCode::invalid_starred_pattern: return "invalid-starred-pattern";
    case ErrorCode::width_mismatch: return "width-mismatch";
    case ErrorCode::measure_mismatch: return "measure-mismatch";
    case ErrorCode::parameter: return "parameter";
    case ErrorCode::unsupported_construction: return "unsupported-construction";
    case ErrorCode::parse: return "parse";
    case ErrorCode::memory_budget: return "memory-budget";
    case ErrorCode::stream: return "stream";
    case ErrorCode::io: return "io";
    case ErrorCode::hypothesis: return "hypothesis-not-met";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(unsigned base, unsigned width) : base_(base), width_(width) {
  if (base < 2) {
    throw Error(ErrorCode::invalid_alphabet,
                "alphabet base must be at least 2, got " + std::to_string(base));
  }
  if (width < 1) {
    throw Error(ErrorCode::invalid_alphabet, "block width must be at least 1");
  }
  size_ = 1;
  for (unsigned i = 0; i < width; ++i) {
    size_ *= base;
    if (size_ > kMaxAlphabetSize) {
      throw Error(ErrorCode::invalid_alphabet,
                  "block alphabet " + std::to_string(base) + "^" +
                      std::to_string(width) + " is too large");
    }
  }
}

Alphabet Alphabet::widened(unsigned k) const {
  if (k < 1) throw Error(ErrorCode::parameter, "block width must be at least 1");
  return Alphabet(base_, width_ * k);
}

Digit Alphabet::encode(std::span<const Digit> components) const {
  if (components.size() != width_) {
    throw Error(ErrorCode::width_mismatch, "expected " + std::to_string(width_) +
                                               " components, got " +
                                               std::to_string(components.size()));
  }
  std::uint64_t code = 0;
  for (Digit c : components) {
    if (c >= base_) {
      throw Error(ErrorCode::invalid_pattern,
                  "digit " + std::to_string(c) + " outside base " + std::to_string(base_));
    }
    code = code * base_ + c;
  }
  return static_cast<Digit>(code);
}

void Alphabet::decode_into(Digit block, std::span<Digit> out) const {
  for (std::size_t i = width_; i-- > 0;) {
    out[i] = block % base_;
    block /= base_;
  }
}

std::vector<Digit> Alphabet::decode(Digit block) const {
  std::vector<Digit> out(width_);
  decode_into(block, out);
  return out;
}

std::string Alphabet::to_string() const {
  std::string s = "b=" + std::to_string(base_);
  if (width_ > 1) s += " K=" + std::to_string(width_);
  return s;
}

// ----------------------------------------------------------------- Pattern

Pattern::Pattern(std::vector<Digit> digits) : digits_(std::move(digits)) {
  if (digits_.empty()) throw Error(ErrorCode::invalid_pattern, "pattern must be nonempty");
}

void Pattern::check(const Alphabet& alphabet) const {
  for (Digit d : digits_) {
    if (!alphabet.contains(d)) {
      throw Error(ErrorCode::invalid_pattern, "digit " + std::to_string(d) +
                                                  " is outside alphabet " +
                                                  alphabet.to_string());
    }
  }
}

std::string Pattern::to_string(const Alphabet& alphabet) const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) out << ',';
    if (alphabet.is_block()) {
      out << '[';
      auto parts = alphabet.decode(digits_[i]);
      for (std::size_t j = 0; j < parts.size(); ++j) out << (j ? "," : "") << parts[j];
      out << ']';
    } else {
      out << digits_[i];
    }
  }
  out << ']';
  return out.str();
}

// ------------------------------------------------------------ rationals

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational inverse_power(unsigned base, unsigned exponent) {
  boost::multiprecision::cpp_int den = 1;
  for (unsigned i = 0; i < exponent; ++i) den *= base;
  return Rational(1) / Rational(den);
}

Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw Error(ErrorCode::parse, "not a rational number: '" + std::string(text) + "'");
  };
  if (text.empty()) return fail();
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  using boost::multiprecision::cpp_int;
  auto to_int = [](std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return cpp_int(std::string(s));
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) return fail();
    cpp_int d = to_int(den);
    if (d == 0) throw Error(ErrorCode::parse, "zero denominator in '" + std::string(text) + "'");
    return Rational(to_int(num), d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (whole == "-" || whole == "+") whole = {};
    if (!whole.empty() && !is_int(whole)) return fail();
    if (frac.empty() && whole.empty()) return fail();
    for (char c : frac) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
    }
    cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    cpp_int w = whole.empty() ? cpp_int(0) : to_int(whole);
    if (w < 0) w = -w;
    cpp_int f = frac.empty() ? cpp_int(0) : cpp_int(std::string(frac));
    Rational value = Rational(w) + Rational(f, scale);
    return negative ? Rational(-value) : value;
  }
  if (!is_int(text)) return fail();
  return Rational(to_int(text));
}

// -------------------------------------------------------- BernoulliMeasure

BernoulliMeasure::BernoulliMeasure(Alphabet alphabet, std::vector<double> weights,
                                   std::vector<Rational> exact)
    : alphabet_(alphabet), weights_(std::move(weights)), exact_(std::move(exact)) {}

BernoulliMeasure BernoulliMeasure::uniform(const Alphabet& alphabet) {
  Rational w = Rational(1) / Rational(alphabet.size());
  return BernoulliMeasure(alphabet,
                          std::vector<double>(alphabet.size(), 1.0 / double(alphabet.size())),
                          std::vector<Rational>(alphabet.size(), w));
}

BernoulliMeasure BernoulliMeasure::exact(const Alphabet& alphabet,
                                         std::vector<Rational> weights) {
  if (weights.size() != alphabet.size()) {
    throw Error(ErrorCode::invalid_measure,
                "expected " + std::to_string(alphabet.size()) + " weights, got " +
                    std::to_string(weights.size()));
  }
  Rational total = 0;
  std::vector<double> approx;
  approx.reserve(weights.size());
  for (const auto& w : weights) {
    if (w < 0) throw Error(ErrorCode::invalid_measure, "negative weight");
    total += w;
    approx.push_back(to_double(w));
  }
  if (total != 1) {
    throw Error(ErrorCode::invalid_measure, "weights sum to " + total.str() + ", not 1");
  }
  return BernoulliMeasure(alphabet, std::move(approx), std::move(weights));
}

BernoulliMeasure BernoulliMeasure::approximate(const Alphabet& alphabet,
                                               std::vector<double> weights) {
  if (weights.size() != alphabet.size()) {
    throw Error(ErrorCode::invalid_measure,
                "expected " + std::to_string(alphabet.size()) + " weights, got " +
                    std::to_string(weights.size()));
  }
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) throw Error(ErrorCode::invalid_measure, "negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::invalid_measure, "weights do not sum to 1");
  }
  return BernoulliMeasure(alphabet, std::move(weights), {});
}

const Rational& BernoulliMeasure::exact_weight(Digit d) const {
  if (!is_exact()) {
    throw Error(ErrorCode::unsupported_construction, "measure has no exact weights");
  }
  return exact_.at(d);
}

std::span<const Rational> BernoulliMeasure::exact_weights() const {
  if (!is_exact()) {
    throw Error(ErrorCode::unsupported_construction, "measure has no exact weights");
  }
  return exact_;
}

bool BernoulliMeasure::same_as(const BernoulliMeasure& other) const {
  if (!(alphabet_ == other.alphabet_)) return false;
  if (is_exact() && other.is_exact()) return exact_ == other.exact_;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (std::abs(weights_[i] - other.weights_[i]) > 1e-12) return false;
  }
  return true;
}

double cylinder_measure(const BernoulliMeasure& measure, const Pattern& pattern) {
  pattern.check(measure.alphabet());
  double p = 1.0;
  for (Digit d : pattern.digits()) p *= measure.weight(d);
  return p;
}

Rational cylinder_measure_exact(const BernoulliMeasure& measure, const Pattern& pattern) {
  pattern.check(measure.alphabet());
  Rational p = 1;
  for (Digit d : pattern.digits()) p *= measure.exact_weight(d);
  return p;
}

BernoulliMeasure block_measure(const BernoulliMeasure& measure, unsigned k) {
  const Alphabet& inner = measure.alphabet();
  Alphabet outer = inner.widened(k);
  const std::uint64_t n = outer.size();
  // Block code c = c_1 * A^(k-1) + ... + c_k in the inner alphabet's digits,
  // which coincides with the row-major base-b code of the flattened block.
  if (measure.is_exact()) {
    std::vector<Rational> w(n);
    for (std::uint64_t c = 0; c < n; ++c) {
      Rational p = 1;
      std::uint64_t rest = c;
      for (unsigned i = 0; i < k; ++i) {
        p *= measure.exact_weight(static_cast<Digit>(rest % inner.size()));
        rest /= inner.size();
      }
      w[c] = p;
    }
    return BernoulliMeasure::exact(outer, std::move(w));
  }
  std::vector<double> w(n);
  for (std::uint64_t c = 0; c < n; ++c) {
    double p = 1;
    std::uint64_t rest = c;
    for (unsigned i = 0; i < k; ++i) {
      p *= measure.weight(static_cast<Digit>(rest % inner.size()));
      rest /= inner.size();
    }
    w[c] = p;
  }
  // Renormalize accumulated rounding so the sum check holds.
  double total = 0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return BernoulliMeasure::approximate(outer, std::move(w));
}

BernoulliMeasure theorem3_measure(unsigned base, unsigned width) {
  Alphabet blocks(base, width);
  const Rational unit = inverse_power(base, width);
  const Rational half = unit / 2;
  std::vector<Rational> w(blocks.size(), unit);
  std::vector<Digit> parts(width);
  for (std::uint64_t c = 0; c < blocks.size(); ++c) {
    blocks.decode_into(static_cast<Digit>(c), parts);
    bool binary = true;
    unsigned sum = 0;
    for (Digit d : parts) {
      if (d > 1) {
        binary = false;
        break;
      }
      sum += d;
    }
    if (binary) w[c] = (sum % 2 == 0) ? Rational(unit - half) : Rational(unit + half);
  }
  return BernoulliMeasure::exact(blocks, std::move(w));
}

BernoulliMeasure diagonal_pair_measure(unsigned base) {
  Alphabet blocks(base, 2);
  std::vector<Rational> w(blocks.size(), Rational(0));
  for (Digit d = 0; d < base; ++d) w[d * base + d] = Rational(1, base);
  return BernoulliMeasure::exact(blocks, std::move(w));
}

// ---------------------------------------------------------- StarredPattern

StarredPattern::StarredPattern(unsigned base, unsigned width,
                               std::vector<std::vector<Entry>> superdigits)
    : base_(base), width_(width) {
  Alphabet(base, width);  // validates base and width
  if (superdigits.empty()) {
    throw Error(ErrorCode::invalid_starred_pattern, "starred pattern must be nonempty");
  }
  for (std::size_t i = 0; i < superdigits.size(); ++i) {
    const auto& sd = superdigits[i];
    if (sd.size() != width) {
      throw Error(ErrorCode::width_mismatch,
                  "superdigit " + std::to_string(i + 1) + " has " + std::to_string(sd.size()) +
                      " entries, expected " + std::to_string(width));
    }
    bool has_star = false;
    for (const Entry& e : sd) {
      if (!e) {
        has_star = true;
      } else if (*e >= base) {
        throw Error(ErrorCode::invalid_starred_pattern,
                    "digit " + std::to_string(*e) + " outside base " + std::to_string(base));
      } else {
        ++concrete_;
      }
      entries_.push_back(e);
    }
    if (!has_star) {
      throw Error(ErrorCode::invalid_starred_pattern,
                  "superdigit " + std::to_string(i + 1) + " has no star");
    }
  }
}

StarredPattern StarredPattern::parse(unsigned base, std::string_view text) {
  std::vector<std::vector<Entry>> sds;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto entry_at = [&](std::size_t& p) -> Entry {
    if (text[p] == '*') {
      ++p;
      return std::nullopt;
    }
    Digit value = 0;
    auto [end, ec] = std::from_chars(text.data() + p, text.data() + text.size(), value);
    if (ec != std::errc()) throw ParseError(p, "expected digit or '*'");
    p = static_cast<std::size_t>(end - text.data());
    return value;
  };
  skip_ws();
  if (pos < text.size() && text[pos] == '[') {
    ++pos;
    for (;;) {
      skip_ws();
      if (pos >= text.size() || text[pos] != '[') throw ParseError(pos, "expected '['");
      ++pos;
      std::vector<Entry> sd;
      for (;;) {
        skip_ws();
        if (pos >= text.size()) throw ParseError(pos, "unterminated superdigit");
        sd.push_back(entry_at(pos));
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == ']') {
          ++pos;
          break;
        }
        throw ParseError(pos, "expected ',' or ']'");
      }
      sds.push_back(std::move(sd));
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == ']') {
        ++pos;
        break;
      }
      throw ParseError(pos, "expected ',' or ']'");
    }
    skip_ws();
    if (pos != text.size()) throw ParseError(pos, "trailing characters");
  } else {
    if (base > 10) throw ParseError(pos, "compact starred form needs base <= 10");
    std::vector<Entry> sd;
    for (; pos < text.size(); ++pos) {
      char c = text[pos];
      if (c == '|') {
        sds.push_back(std::move(sd));
        sd.clear();
      } else if (c == '*') {
        sd.push_back(std::nullopt);
      } else if (c >= '0' && c <= '9') {
        sd.push_back(static_cast<Digit>(c - '0'));
      } else {
        throw ParseError(pos, "expected digit, '*' or '|'");
      }
    }
    sds.push_back(std::move(sd));
  }
  if (sds.empty() || sds.front().empty()) throw ParseError(0, "empty starred pattern");
  const auto width = static_cast<unsigned>(sds.front().size());
  return StarredPattern(base, width, std::move(sds));
}

bool StarredPattern::matches(std::size_t i, Digit block) const {
  auto sd = superdigit(i);
  for (std::size_t j = width_; j-- > 0;) {
    Digit component = block % base_;
    block /= base_;
    if (sd[j] && *sd[j] != component) return false;
  }
  return true;
}

std::string StarredPattern::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < length(); ++i) {
    if (i) s += ',';
    s += '[';
    auto sd = superdigit(i);
    for (std::size_t j = 0; j < sd.size(); ++j) {
      if (j) s += ',';
      s += sd[j] ? std::to_string(*sd[j]) : std::string("*");
    }
    s += ']';
  }
  return s + "]";
}

Rational starred_measure_closed_form(const StarredPattern& pattern) {
  return inverse_power(pattern.base(), pattern.concrete_count());
}

Rational starred_measure_bruteforce(const BernoulliMeasure& measure,
                                    const StarredPattern& pattern) {
  if (!(measure.alphabet() == pattern.block_alphabet())) {
    throw Error(ErrorCode::width_mismatch,
                "starred pattern over " + pattern.block_alphabet().to_string() +
                    " used with measure over " + measure.alphabet().to_string());
  }
  const std::size_t m = pattern.length();
  const std::uint64_t blocks = measure.alphabet().size();
  // Completions of each superdigit, then the sum over the product set of
  // full strings, each evaluated as a cylinder.
  std::vector<std::vector<Digit>> completions(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::uint64_t c = 0; c < blocks; ++c) {
      if (pattern.matches(i, static_cast<Digit>(c))) completions[i].push_back(static_cast<Digit>(c));
    }
  }
  Rational total = 0;
  std::vector<std::size_t> odometer(m, 0);
  std::vector<Digit> word(m);
  for (;;) {
    for (std::size_t i = 0; i < m; ++i) word[i] = completions[i][odometer[i]];
    total += cylinder_measure_exact(measure, Pattern(word));
    std::size_t i = m;
    while (i-- > 0) {
      if (++odometer[i] < completions[i].size()) break;
      odometer[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

}  // namespace nlab
