#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "brisk/errors.hpp"

namespace brisk::cli {

// Shortest round-trip decimal form, locale-independent ('.' always).
inline std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline std::string fmt(std::int64_t x) { return std::to_string(x); }
inline std::string fmt(std::uint64_t x) { return std::to_string(x); }
inline std::string fmt(int x) { return std::to_string(x); }

// Writes the full document to a temp file and renames it into place, so
// readers never observe partial output.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace brisk::cli
