#pragma once

#include <charconv>
#include <string>

namespace linkage {

/// Shortest decimal string that round-trips the double exactly; consistent
/// across runs, which the byte-deterministic output contract relies on.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace linkage
