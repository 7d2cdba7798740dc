#include "nlab/sequence.hpp"

#include <algorithm>

namespace nlab {

namespace {

class BufferSource final : public DigitSource {
 public:
  explicit BufferSource(std::shared_ptr<const std::vector<Digit>> digits)
      : digits_(std::move(digits)) {}

  std::size_t read(std::span<Digit> out) override {
    const std::size_t n = std::min(out.size(), digits_->size() - pos_);
    std::copy_n(digits_->begin() + static_cast<std::ptrdiff_t>(pos_), n, out.begin());
    pos_ += n;
    return n;
  }

 private:
  std::shared_ptr<const std::vector<Digit>> digits_;
  std::size_t pos_ = 0;
};

class RecodeSource final : public DigitSource {
 public:
  RecodeSource(DigitSequence inner, unsigned k, std::shared_ptr<RecodeTally> tally)
      : inner_(std::move(inner)), k_(k), tally_(std::move(tally)),
        inner_size_(inner_.alphabet().size()) {}

  std::size_t read(std::span<Digit> out) override {
    std::size_t produced = 0;
    while (produced < out.size() && !done_) {
      const std::size_t want = std::min<std::size_t>(out.size() - produced, kChunk);
      buffer_.resize(want * k_);
      const std::size_t got = inner_.read(buffer_);
      const std::size_t whole = got / k_;
      for (std::size_t b = 0; b < whole; ++b) {
        std::uint64_t code = 0;
        for (unsigned j = 0; j < k_; ++j) code = code * inner_size_ + buffer_[b * k_ + j];
        out[produced++] = static_cast<Digit>(code);
      }
      if (tally_) tally_->blocks += whole;
      if (got < buffer_.size()) {
        done_ = true;
        if (tally_) tally_->dropped_digits = got % k_;
      }
    }
    return produced;
  }

 private:
  static constexpr std::size_t kChunk = 1 << 14;
  DigitSequence inner_;
  unsigned k_;
  std::shared_ptr<RecodeTally> tally_;
  std::uint64_t inner_size_;
  std::vector<Digit> buffer_;
  bool done_ = false;
};

class FlattenSource final : public DigitSource {
 public:
  explicit FlattenSource(DigitSequence inner)
      : inner_(std::move(inner)), blocks_(inner_.alphabet()),
        pending_(blocks_.width()) {}

  std::size_t read(std::span<Digit> out) override {
    std::size_t produced = 0;
    while (produced < out.size()) {
      if (next_ == pending_.size()) {
        Digit block;
        if (inner_.read(std::span<Digit>(&block, 1)) == 0) break;
        blocks_.decode_into(block, pending_);
        next_ = 0;
      }
      const std::size_t n = std::min(out.size() - produced, pending_.size() - next_);
      std::copy_n(pending_.begin() + static_cast<std::ptrdiff_t>(next_), n,
                  out.begin() + static_cast<std::ptrdiff_t>(produced));
      next_ += n;
      produced += n;
    }
    return produced;
  }

 private:
  DigitSequence inner_;
  Alphabet blocks_;
  std::vector<Digit> pending_;
  std::size_t next_ = pending_.size();
};

}  // namespace

DigitSequence::DigitSequence(Alphabet alphabet, std::unique_ptr<DigitSource> source,
                             std::optional<std::uint64_t> known_length)
    : alphabet_(alphabet), source_(std::move(source)), known_length_(known_length) {}

DigitSequence DigitSequence::from_digits(Alphabet alphabet, std::vector<Digit> digits) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (!alphabet.contains(digits[i])) {
      throw Error(ErrorCode::invalid_pattern,
                  "digit " + std::to_string(digits[i]) + " at position " +
                      std::to_string(i + 1) + " is outside alphabet " + alphabet.to_string());
    }
  }
  return view(alphabet, std::make_shared<const std::vector<Digit>>(std::move(digits)));
}

DigitSequence DigitSequence::view(Alphabet alphabet,
                                  std::shared_ptr<const std::vector<Digit>> digits) {
  const auto n = static_cast<std::uint64_t>(digits->size());
  return DigitSequence(alphabet, std::make_unique<BufferSource>(std::move(digits)), n);
}

std::size_t DigitSequence::read(std::span<Digit> out) {
  std::size_t filled = 0;
  while (filled < out.size() && !exhausted_) {
    const std::size_t got = source_->read(out.subspan(filled));
    if (got == 0) exhausted_ = true;
    filled += got;
  }
  consumed_ += filled;
  return filled;
}

std::vector<Digit> DigitSequence::take(std::size_t n) {
  std::vector<Digit> out(n);
  out.resize(read(out));
  return out;
}

std::uint64_t DigitSequence::skip(std::uint64_t n) {
  std::vector<Digit> scratch(static_cast<std::size_t>(std::min<std::uint64_t>(n, 1 << 14)));
  std::uint64_t skipped = 0;
  while (skipped < n) {
    const auto want = static_cast<std::size_t>(std::min<std::uint64_t>(n - skipped, scratch.size()));
    const std::size_t got = read(std::span<Digit>(scratch.data(), want));
    skipped += got;
    if (got < want) break;
  }
  return skipped;
}

DigitSequence block_recode(DigitSequence seq, unsigned k, std::shared_ptr<RecodeTally> tally) {
  if (k < 1) throw Error(ErrorCode::parameter, "block width must be at least 1");
  Alphabet out = seq.alphabet().widened(k);
  std::optional<std::uint64_t> len;
  if (seq.known_length()) len = *seq.known_length() / k;
  return DigitSequence(out, std::make_unique<RecodeSource>(std::move(seq), k, std::move(tally)),
                       len);
}

DigitSequence block_flatten(DigitSequence seq) {
  Alphabet out = seq.alphabet().digits();
  std::optional<std::uint64_t> len;
  if (seq.known_length()) len = *seq.known_length() * seq.alphabet().width();
  return DigitSequence(out, std::make_unique<FlattenSource>(std::move(seq)), len);
}

}  // namespace nlab
