#include "nlab/selectors.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>

namespace nlab {

namespace {

void check_periodic(const PeriodicSet& p) {
  if (p.period < 1) throw Error(ErrorCode::parameter, "period must be at least 1");
  if (p.residues.empty()) throw Error(ErrorCode::parameter, "residue set must be nonempty");
  for (std::size_t i = 0; i < p.residues.size(); ++i) {
    const auto r = p.residues[i];
    if (r < 1 || r > p.period) {
      throw Error(ErrorCode::parameter, "residue " + std::to_string(r) + " outside {1.." +
                                            std::to_string(p.period) + "}");
    }
    if (i && r <= p.residues[i - 1]) {
      throw Error(ErrorCode::parameter, "residues must be strictly increasing");
    }
  }
}

void check_increasing(const std::vector<std::uint64_t>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 1) throw Error(ErrorCode::parameter, std::string(what) + " indices are 1-based");
    if (i && v[i] <= v[i - 1]) {
      throw Error(ErrorCode::parameter, std::string(what) + " indices must be strictly increasing");
    }
  }
}

std::uint64_t periodic_count(const PeriodicSet& p, std::uint64_t n) {
  const std::uint64_t full = n / p.period;
  const std::uint64_t rem = n % p.period;
  const auto partial = static_cast<std::uint64_t>(
      std::upper_bound(p.residues.begin(), p.residues.end(), rem) - p.residues.begin());
  return full * p.residues.size() + partial;
}

// Grammar helpers. Positions are offsets into the full selection text.
struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
};

std::uint64_t parse_uint(std::string_view s, std::size_t at) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    throw ParseError(at, "expected a nonnegative integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::uint64_t> parse_list(std::string_view s, std::size_t at) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  for (;;) {
    auto bar = s.find('|', start);
    auto item = s.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
    out.push_back(parse_uint(item, at + start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return out;
}

// Splits "k=2,l=3" into a key -> (value, offset) map.
std::map<std::string, std::pair<std::string_view, std::size_t>> parse_fields(
    std::string_view s, std::size_t at, char sep) {
  std::map<std::string, std::pair<std::string_view, std::size_t>> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(sep, start);
    if (end == std::string_view::npos) end = s.size();
    auto item = s.substr(start, end - start);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError(at + start, "expected key=value");
    }
    std::string key(item.substr(0, eq));
    if (out.count(key)) throw ParseError(at + start, "duplicate key '" + key + "'");
    out[key] = {item.substr(eq + 1), at + start + eq + 1};
    start = end + 1;
  }
  return out;
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += '|';
    s += std::to_string(v[i]);
  }
  return s;
}

PeriodicSet periodic_from_fields(
    const std::map<std::string, std::pair<std::string_view, std::size_t>>& f, std::size_t at) {
  if (!f.count("m") || !f.count("r")) throw ParseError(at, "periodic selection needs m= and r=");
  for (const auto& [k, v] : f) {
    if (k != "m" && k != "r") throw ParseError(v.second - k.size() - 1, "unknown key '" + k + "'");
  }
  PeriodicSet p;
  p.period = parse_uint(f.at("m").first, f.at("m").second);
  p.residues = parse_list(f.at("r").first, f.at("r").second);
  return p;
}

class SelectSource final : public DigitSource {
 public:
  SelectSource(DigitSequence inner, IndexCursor cursor)
      : inner_(std::move(inner)), cursor_(std::move(cursor)) {}

  std::size_t read(std::span<Digit> out) override {
    std::size_t produced = 0;
    while (produced < out.size() && !done_) {
      auto n = cursor_.next();
      if (!n) {
        done_ = true;
        break;
      }
      // Position of the next unread input digit is consumed()+1.
      const std::uint64_t gap = *n - inner_.consumed() - 1;
      if (gap && inner_.skip(gap) < gap) {
        done_ = true;
        break;
      }
      if (inner_.read(out.subspan(produced, 1)) == 0) {
        done_ = true;
        break;
      }
      ++produced;
    }
    return produced;
  }

 private:
  DigitSequence inner_;
  IndexCursor cursor_;
  bool done_ = false;
};

// Reads the input in chunks; cheaper than per-digit reads for dense selections.
class BufferedSelectSource final : public DigitSource {
 public:
  BufferedSelectSource(DigitSequence inner, IndexCursor cursor)
      : inner_(std::move(inner)), cursor_(std::move(cursor)) {}

  std::size_t read(std::span<Digit> out) override {
    std::size_t produced = 0;
    while (produced < out.size() && !done_) {
      if (!pending_) {
        pending_ = cursor_.next();
        if (!pending_) {
          done_ = true;
          break;
        }
      }
      const std::uint64_t want = *pending_;  // 1-based
      if (want > base_ + buffer_.size()) {
        // Skip whole chunks before refilling.
        const std::uint64_t end = base_ + buffer_.size();
        const std::uint64_t gap = want - 1 - end;
        base_ = end;
        buffer_.clear();
        if (gap) {
          const auto skipped = inner_.skip(gap);
          base_ += skipped;
          if (skipped < gap) {
            done_ = true;
            break;
          }
        }
        buffer_.resize(kChunk);
        buffer_.resize(inner_.read(buffer_));
        if (buffer_.empty()) {
          done_ = true;
          break;
        }
        continue;
      }
      out[produced++] = buffer_[static_cast<std::size_t>(want - 1 - base_)];
      pending_.reset();
    }
    return produced;
  }

 private:
  static constexpr std::size_t kChunk = 1 << 14;
  DigitSequence inner_;
  IndexCursor cursor_;
  std::vector<Digit> buffer_;
  std::uint64_t base_ = 0;  // number of input digits before buffer_[0]
  std::optional<std::uint64_t> pending_;
  bool done_ = false;
};

}  // namespace

bool PeriodicSet::contains(std::uint64_t n) const {
  if (n < 1) return false;
  const std::uint64_t r = (n - 1) % period + 1;
  return std::binary_search(residues.begin(), residues.end(), r);
}

SelectionSequence::SelectionSequence(Spec spec) : spec_(std::move(spec)) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ArithmeticProgression>) {
          if (s.start < 1) throw Error(ErrorCode::parameter, "progression start must be >= 1");
          if (s.step < 1) throw Error(ErrorCode::parameter, "progression step must be >= 1");
        } else if constexpr (std::is_same_v<T, PeriodicSet>) {
          check_periodic(s);
        } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
          check_increasing(s.preperiod, "preperiod");
          check_periodic(s.tail);
        } else {
          check_increasing(s.indices, "explicit");
        }
      },
      spec_);
}

SelectionSequence SelectionSequence::arithmetic(std::uint64_t start, std::uint64_t step) {
  return SelectionSequence(ArithmeticProgression{start, step});
}

SelectionSequence SelectionSequence::periodic(std::uint64_t period,
                                              std::vector<std::uint64_t> residues) {
  return SelectionSequence(PeriodicSet{period, std::move(residues)});
}

SelectionSequence SelectionSequence::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError(0, "expected '<kind>:'");
  const auto kind = text.substr(0, colon);
  const std::size_t at = colon + 1;
  const auto body = text.substr(at);
  if (body.empty()) throw ParseError(at, "empty selection body");
  auto wrap = [](auto&& make) {
    try {
      return make();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(0, e.what());
    }
  };
  if (kind == "ap") {
    auto f = parse_fields(body, at, ',');
    for (const auto& [k, v] : f) {
      if (k != "k" && k != "l") throw ParseError(v.second - k.size() - 1, "unknown key '" + k + "'");
    }
    ArithmeticProgression ap;
    if (f.count("k")) ap.start = parse_uint(f.at("k").first, f.at("k").second);
    if (f.count("l")) ap.step = parse_uint(f.at("l").first, f.at("l").second);
    return wrap([&] { return SelectionSequence(ap); });
  }
  if (kind == "periodic") {
    auto p = periodic_from_fields(parse_fields(body, at, ','), at);
    return wrap([&] { return SelectionSequence(p); });
  }
  if (kind == "evper") {
    const auto semi = body.find(';');
    if (semi == std::string_view::npos) throw ParseError(at, "expected 'pre=...;m=...,r=...'");
    auto pre = body.substr(0, semi);
    if (pre.substr(0, 4) != "pre=") throw ParseError(at, "expected 'pre='");
    EventuallyPeriodic ep;
    ep.preperiod = parse_list(pre.substr(4), at + 4);
    ep.tail = periodic_from_fields(parse_fields(body.substr(semi + 1), at + semi + 1, ','),
                                   at + semi + 1);
    return wrap([&] { return SelectionSequence(ep); });
  }
  if (kind == "explicit") {
    ExplicitIndices e{parse_list(body, at)};
    return wrap([&] { return SelectionSequence(e); });
  }
  throw ParseError(0, "unknown selection kind '" + std::string(kind) + "'");
}

std::string SelectionSequence::to_string() const {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ArithmeticProgression>) {
          return "ap:k=" + std::to_string(s.start) + ",l=" + std::to_string(s.step);
        } else if constexpr (std::is_same_v<T, PeriodicSet>) {
          return "periodic:m=" + std::to_string(s.period) + ",r=" + join(s.residues);
        } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
          return "evper:pre=" + join(s.preperiod) + ";m=" + std::to_string(s.tail.period) +
                 ",r=" + join(s.tail.residues);
        } else {
          return "explicit:" + join(s.indices);
        }
      },
      spec_);
}

IndexCursor SelectionSequence::cursor() const { return IndexCursor(spec_); }

std::uint64_t SelectionSequence::count_up_to(std::uint64_t n) const {
  return std::visit(
      [n](const auto& s) -> std::uint64_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ArithmeticProgression>) {
          return n < s.start ? 0 : (n - s.start) / s.step + 1;
        } else if constexpr (std::is_same_v<T, PeriodicSet>) {
          return periodic_count(s, n);
        } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
          const auto pre = static_cast<std::uint64_t>(
              std::upper_bound(s.preperiod.begin(), s.preperiod.end(), n) - s.preperiod.begin());
          const std::uint64_t last = s.preperiod.empty() ? 0 : s.preperiod.back();
          const std::uint64_t tail = n > last ? periodic_count(s.tail, n) - periodic_count(s.tail, last) : 0;
          return pre + tail;
        } else {
          return static_cast<std::uint64_t>(
              std::upper_bound(s.indices.begin(), s.indices.end(), n) - s.indices.begin());
        }
      },
      spec_);
}

IndexCursor::IndexCursor(const SelectionSequence::Spec& spec) : spec_(spec) {}

std::optional<std::uint64_t> IndexCursor::next() {
  auto next_periodic = [this](const PeriodicSet& p) {
    const std::uint64_t n = cycle_ * p.period + p.residues[residue_];
    if (++residue_ == p.residues.size()) {
      residue_ = 0;
      ++cycle_;
    }
    return n;
  };
  if (auto* ap = std::get_if<ArithmeticProgression>(&spec_)) {
    return ap->start + ap->step * emitted_++;
  }
  if (auto* p = std::get_if<PeriodicSet>(&spec_)) {
    ++emitted_;
    return next_periodic(*p);
  }
  if (auto* ep = std::get_if<EventuallyPeriodic>(&spec_)) {
    if (!in_tail_ && emitted_ < ep->preperiod.size()) return ep->preperiod[emitted_++];
    if (!in_tail_) {
      in_tail_ = true;
      const std::uint64_t last = ep->preperiod.empty() ? 0 : ep->preperiod.back();
      cycle_ = last / ep->tail.period;
      residue_ = 0;
      while (cycle_ * ep->tail.period + ep->tail.residues[residue_] <= last) {
        if (++residue_ == ep->tail.residues.size()) {
          residue_ = 0;
          ++cycle_;
        }
      }
    }
    ++emitted_;
    return next_periodic(ep->tail);
  }
  const auto& ex = std::get<ExplicitIndices>(spec_);
  if (emitted_ >= ex.indices.size()) return std::nullopt;
  return ex.indices[emitted_++];
}

DigitSequence select(DigitSequence seq, const SelectionSequence& selection) {
  Alphabet alphabet = seq.alphabet();
  std::optional<std::uint64_t> len;
  if (seq.known_length()) len = selection.count_up_to(*seq.known_length());
  // Sparse progressions skip more than they read; dense selections read in chunks.
  bool sparse = false;
  if (auto* ap = std::get_if<ArithmeticProgression>(&selection.spec())) sparse = ap->step > 64;
  if (sparse) {
    return DigitSequence(alphabet, std::make_unique<SelectSource>(std::move(seq), selection.cursor()),
                         len);
  }
  return DigitSequence(
      alphabet, std::make_unique<BufferedSelectSource>(std::move(seq), selection.cursor()), len);
}

Density lower_density(const SelectionSequence& selection) {
  return std::visit(
      [&](const auto& s) -> Density {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ArithmeticProgression>) {
          return {Rational(1, s.step)};
        } else if constexpr (std::is_same_v<T, PeriodicSet>) {
          return {Rational(s.residues.size(), s.period)};
        } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
          return {Rational(s.tail.residues.size(), s.tail.period)};
        } else {
          if (s.indices.empty()) return {Rational(0), true, 0};
          const std::uint64_t horizon = s.indices.back();
          const std::uint64_t from = (horizon + 1) / 2;
          // count/N is minimized just before each element and at the window
          // start, so only those N need checking.
          Rational best(selection.count_up_to(from), from);
          for (auto idx : s.indices) {
            if (idx <= from) continue;
            const std::uint64_t n = idx - 1;
            if (n >= from) best = std::min(best, Rational(selection.count_up_to(n), n));
          }
          best = std::min(best, Rational(s.indices.size(), horizon));
          return {best, true, horizon};
        }
      },
      selection.spec());
}

std::optional<std::uint64_t> thickness_violation(const PeriodicSet& set, unsigned width,
                                                 unsigned offset) {
  if (width < 1 || offset < 1) {
    throw Error(ErrorCode::parameter, "thickness check needs K >= 1 and L >= 1");
  }
  check_periodic(set);
  // Block n starts at K(n-1)+L; its residue mod m repeats with period
  // m / gcd(m, K) in n, so every block start up to lcm(m, K) + L is covered.
  const std::uint64_t blocks = set.period / std::gcd<std::uint64_t>(set.period, width);
  for (std::uint64_t n = 1; n <= blocks; ++n) {
    const std::uint64_t first = width * (n - 1) + offset;
    bool inside = true;
    for (std::uint64_t i = first; i < first + width; ++i) {
      if (!set.contains(i)) {
        inside = false;
        break;
      }
    }
    if (inside) return n;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> thickness_violation(const SelectionSequence& selection,
                                                 unsigned width, unsigned offset) {
  const auto* p = selection.as_periodic();
  if (!p) {
    throw Error(ErrorCode::parameter,
                "thickness check applies to periodic selections only, got " + selection.to_string());
  }
  return thickness_violation(*p, width, offset);
}

std::vector<SelectionSequence> density_family(std::span<const std::uint64_t> periods) {
  std::vector<SelectionSequence> out;
  for (auto t : periods) {
    if (t < 2) throw Error(ErrorCode::parameter, "density family needs t >= 2");
    std::vector<std::uint64_t> r(t - 1);
    std::iota(r.begin(), r.end(), 1);
    out.push_back(SelectionSequence::periodic(t, std::move(r)));
  }
  return out;
}

}  // namespace nlab
