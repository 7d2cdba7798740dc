#include "nlab/stream_file.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace nlab {

namespace {

std::uint64_t header_number(std::string_view value, std::string_view key) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || end != value.data() + value.size() || value.empty()) {
    throw Error(ErrorCode::stream, "bad header value " + std::string(key) + "=" + std::string(value));
  }
  return v;
}

}  // namespace

const std::string* StreamHeader::field(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return &v;
  }
  return nullptr;
}

void StreamHeader::set_field(std::string key, std::string value) {
  if (value.find_first_of(" \t\n") != std::string::npos) {
    throw Error(ErrorCode::parameter, "header field " + key + " must not contain whitespace");
  }
  for (auto& [k, v] : fields) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  fields.emplace_back(std::move(key), std::move(value));
}

std::string format_header(const StreamHeader& header) {
  std::string line = "#nlab v" + std::to_string(header.version) + " b=" +
                     std::to_string(header.base) + " n=" +
                     (header.count ? std::to_string(*header.count) : std::string("unbounded-prefix"));
  for (const auto& [k, v] : header.fields) line += " " + k + "=" + v;
  return line;
}

StreamHeader parse_header(std::string_view line) {
  if (line.substr(0, 6) != "#nlab ") throw Error(ErrorCode::stream, "missing '#nlab' header");
  StreamHeader h;
  bool have_base = false;
  bool have_count = false;
  std::size_t pos = 6;
  bool first = true;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size()) break;
    auto end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    auto token = line.substr(pos, end - pos);
    pos = end;
    if (first) {
      first = false;
      if (token != "v1") throw Error(ErrorCode::stream, "unsupported format version '" + std::string(token) + "'");
      continue;
    }
    auto eq = token.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::stream, "bad header token '" + std::string(token) + "'");
    auto key = token.substr(0, eq);
    auto value = token.substr(eq + 1);
    if (key == "b") {
      h.base = static_cast<unsigned>(header_number(value, key));
      have_base = true;
    } else if (key == "n") {
      if (value != "unbounded-prefix") h.count = header_number(value, key);
      have_count = true;
    } else {
      h.fields.emplace_back(std::string(key), std::string(value));
    }
  }
  if (first) throw Error(ErrorCode::stream, "missing format version");
  if (!have_base || !have_count) throw Error(ErrorCode::stream, "header needs b= and n=");
  if (h.base < 2) throw Error(ErrorCode::stream, "header base must be at least 2");
  return h;
}

void write_stream(std::ostream& out, const StreamFile& file) {
  StreamHeader header = file.header;
  header.count = file.digits.size();
  out << format_header(header) << '\n';
  if (header.base <= 10) {
    std::string payload(file.digits.size(), '0');
    for (std::size_t i = 0; i < file.digits.size(); ++i) {
      if (file.digits[i] >= header.base) throw Error(ErrorCode::stream, "digit outside base");
      payload[i] = static_cast<char>('0' + file.digits[i]);
    }
    out << payload << '\n';
  } else {
    for (std::size_t i = 0; i < file.digits.size(); ++i) {
      if (file.digits[i] >= header.base) throw Error(ErrorCode::stream, "digit outside base");
      out << file.digits[i] << ((i + 1) % 32 == 0 || i + 1 == file.digits.size() ? '\n' : ' ');
    }
  }
  if (!out) throw Error(ErrorCode::io, "write failed");
}

StreamFile read_stream(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::stream, "empty stream file");
  StreamFile file;
  file.header = parse_header(line);
  const unsigned b = file.header.base;
  if (file.header.count) file.digits.reserve(static_cast<std::size_t>(*file.header.count));
  if (b <= 10) {
    std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    for (char c : payload) {
      if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
      if (c < '0' || c >= static_cast<char>('0' + b)) {
        throw Error(ErrorCode::stream, std::string("invalid digit '") + c + "' for base " +
                                           std::to_string(b) + " at payload digit " +
                                           std::to_string(file.digits.size() + 1));
      }
      file.digits.push_back(static_cast<Digit>(c - '0'));
    }
  } else {
    std::uint64_t v;
    while (in >> v) {
      if (v >= b) throw Error(ErrorCode::stream, "digit " + std::to_string(v) + " outside base");
      file.digits.push_back(static_cast<Digit>(v));
    }
    if (!in.eof()) throw Error(ErrorCode::stream, "malformed payload");
  }
  if (file.header.count && *file.header.count != file.digits.size()) {
    throw Error(ErrorCode::stream, "header declares " + std::to_string(*file.header.count) +
                                       " digits, payload has " + std::to_string(file.digits.size()));
  }
  return file;
}

StreamFile read_stream_file(const std::string& path) {
  if (path == "-") return read_stream(std::cin);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  return read_stream(in);
}

void write_text_file(const std::string& path, std::string_view content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::io, "write to stdout failed");
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::io, "write to " + tmp + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::io, "cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

void write_stream_file(const std::string& path, const StreamFile& file) {
  std::ostringstream out;
  write_stream(out, file);
  write_text_file(path, out.str());
}

}  // namespace nlab
