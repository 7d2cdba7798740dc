#pragma once

// On-disk digit streams.
//
//   #nlab v1 b=<b> n=<n> [key=value ...]
//   <payload>
//
// For b <= 10 the payload is one ASCII character per digit; for b > 10 it is
// whitespace-separated decimal integers. n may be "unbounded-prefix", in which
// case the payload is read to end of file. Extra header fields (gen=, sel=,
// src=) carry provenance and must not contain spaces.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlab/shiftspace.hpp"

namespace nlab {

struct StreamHeader {
  unsigned version = 1;
  unsigned base = 2;
  std::optional<std::uint64_t> count;
  std::vector<std::pair<std::string, std::string>> fields;

  const std::string* field(std::string_view key) const;
  void set_field(std::string key, std::string value);
};

struct StreamFile {
  StreamHeader header;
  std::vector<Digit> digits;
};

std::string format_header(const StreamHeader& header);
StreamHeader parse_header(std::string_view line);

void write_stream(std::ostream& out, const StreamFile& file);
StreamFile read_stream(std::istream& in);

/// "-" reads stdin.
StreamFile read_stream_file(const std::string& path);

/// "-" writes stdout; otherwise writes a temporary sibling and renames it.
void write_stream_file(const std::string& path, const StreamFile& file);

/// Atomic (temp + rename) write of a whole text file; "-" writes stdout.
void write_text_file(const std::string& path, std::string_view content);

}  // namespace nlab
