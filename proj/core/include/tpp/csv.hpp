#pragma once

#include <charconv>
#include <string>

namespace tpp {

/// Shortest decimal form that round-trips the exact double. Non-finite
/// values render as "nan"/"inf"/"-inf".
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_long(long v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

} // namespace tpp
