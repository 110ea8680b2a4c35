#pragma once

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "repelcode/geometry.hpp"

namespace repelcode {

/// Shortest decimal text that round-trips the double.
inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline int parse_int(std::string_view s, std::size_t line) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("line " + std::to_string(line) + ": expected integer, got '" +
                             std::string(s) + "'");
  }
  return v;
}

inline std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CenterSet CSV: header "row,col", one 0-indexed integer pair per line.
// Grid dimensions travel out-of-band.

inline CenterSet read_centers_csv(std::istream& in, int height, int width) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<Pixel> centers;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != "row,col") {
        throw std::runtime_error("center CSV must start with header 'row,col', got '" +
                                 std::string(text) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'row,col'");
    }
    centers.push_back({detail::parse_int(text.substr(0, comma), line_no),
                       detail::parse_int(text.substr(comma + 1), line_no)});
  }
  if (!header_seen) throw std::runtime_error("center CSV is empty (missing 'row,col' header)");
  return CenterSet(height, width, std::move(centers));
}

inline CenterSet read_centers_csv(const std::string& path, int height, int width) {
  auto in = detail::open_in(path);
  return read_centers_csv(in, height, width);
}

inline void write_centers_csv(std::ostream& out, const CenterSet& labels) {
  out << "row,col\n";
  for (const Pixel& p : labels) out << p.row << ',' << p.col << '\n';
}

inline void write_centers_csv(const std::string& path, const CenterSet& labels) {
  auto out = detail::open_out(path);
  write_centers_csv(out, labels);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// SFLD: "SFLD", version byte 1, u32 LE height, u32 LE width, then
// height*width f32 LE values in row-major order.

inline constexpr std::uint8_t kSfldVersion = 1;

namespace detail {

inline void put_u32_le(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                         static_cast<char>((v >> 16) & 0xFF),
                         static_cast<char>((v >> 24) & 0xFF)};
  out.write(bytes, 4);
}

inline std::uint32_t get_u32_le(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("SFLD: truncated stream");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace detail

/// Rounds every value to the nearest float32, the precision SFLD stores.
inline ScalarField quantize_f32(ScalarField field) {
  for (double& v : field.values()) v = static_cast<double>(static_cast<float>(v));
  return field;
}

inline void write_sfld(std::ostream& out, const ScalarField& field) {
  out.write("SFLD", 4);
  out.put(static_cast<char>(kSfldVersion));
  detail::put_u32_le(out, static_cast<std::uint32_t>(field.height()));
  detail::put_u32_le(out, static_cast<std::uint32_t>(field.width()));
  for (double v : field.values()) {
    detail::put_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
}

inline ScalarField read_sfld(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string_view(magic, 4) != "SFLD") {
    throw std::runtime_error("SFLD: bad magic bytes");
  }
  const int version = in.get();
  if (version != kSfldVersion) {
    throw std::runtime_error("SFLD: unsupported version " + std::to_string(version));
  }
  const std::uint32_t h = detail::get_u32_le(in);
  const std::uint32_t w = detail::get_u32_le(in);
  if (h == 0 || w == 0 || h > (1u << 20) || w > (1u << 20)) {
    throw std::runtime_error("SFLD: implausible dimensions " + std::to_string(h) + "x" +
                             std::to_string(w));
  }
  ScalarField field(static_cast<int>(h), static_cast<int>(w), 0.0);
  for (double& v : field.values()) {
    v = static_cast<double>(std::bit_cast<float>(detail::get_u32_le(in)));
  }
  return field;
}

inline void write_sfld(const std::string& path, const ScalarField& field) {
  auto out = detail::open_out(path, std::ios::binary);
  write_sfld(out, field);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

inline ScalarField read_sfld(const std::string& path) {
  auto in = detail::open_in(path, std::ios::binary);
  return read_sfld(in);
}

// ---------------------------------------------------------------------------
// Key/value manifests: "key = value" lines, '#' comments, optional
// "[section]" headers. Keys inside a section are read back as
// "section.key".

using KeyValues = std::vector<std::pair<std::string, std::string>>;

inline void write_manifest(std::ostream& out, const KeyValues& entries) {
  for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
}

inline void write_manifest(const std::string& path, const KeyValues& entries) {
  auto out = detail::open_out(path);
  write_manifest(out, entries);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

inline KeyValues read_key_values(std::istream& in) {
  KeyValues entries;
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = detail::trim(text);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']' || text.size() < 3) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": malformed section header");
      }
      section = std::string(detail::trim(text.substr(1, text.size() - 2)));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(detail::trim(text.substr(0, eq)));
    if (key.empty()) throw std::runtime_error("line " + std::to_string(line_no) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    entries.emplace_back(std::move(key), std::string(detail::trim(text.substr(eq + 1))));
  }
  return entries;
}

inline KeyValues read_key_values(const std::string& path) {
  auto in = detail::open_in(path);
  return read_key_values(in);
}

}  // namespace repelcode
