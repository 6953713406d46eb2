#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <system_error>

namespace robrsvd::io {

/// Fixed 17-significant-digit scientific notation used for all CSV output.
inline std::string format_csv(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

/// Shortest decimal string that parses back to exactly x.
inline std::string format_shortest(double x) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) return format_csv(x);
  return std::string(buf, end);
}

}  // namespace robrsvd::io
