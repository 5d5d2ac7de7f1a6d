#pragma once

// Locale-independent numeric text conversion helpers shared by the CSV layer,
// serialization, and model-name formatting.

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace qdep {

// Round-trip-exact decimal representation (shortest form, up to 17
// significant digits).
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

// Strict full-string parse; rejects trailing garbage, accepts leading '+'.
inline std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

inline std::string_view trim_view(std::string_view text) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

}  // namespace qdep
