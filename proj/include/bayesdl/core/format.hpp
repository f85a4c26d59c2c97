#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace bayesdl {

/// Shortest decimal representation that parses back to the same double.
inline std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

/// Strict full-string parse; returns false on trailing garbage or empty input.
inline bool parse_real(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace bayesdl
