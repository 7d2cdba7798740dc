#pragma once

#include <stdexcept>
#include <string>

namespace nlab {

enum class ErrorCode {
  invalid_alphabet,
  invalid_measure,
  invalid_pattern,
  invalid_starred_pattern,
  width_mismatch,
  measure_mismatch,
  parameter,
  unsupported_construction,
  parse,
  memory_budget,
  stream,
  io,
  hypothesis,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the text grammars; `position` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorCode::parse,
              message + " (at position " + std::to_string(position) + ")"),
        position_(position),
        detail_(message) {}

  std::size_t position() const noexcept { return position_; }
  /// The message without the position suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t position_;
  std::string detail_;
};

}  // namespace nlab
