#include "forcectl/numfmt.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace forcectl::numfmt {

std::string shortest(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return {buf.data(), end};
}

std::string shortestDecimal(double value) {
  std::string s = shortest(value);
  if (s.find_first_of(".eEn") == std::string::npos) {
    s += ".0";
  }
  return s;
}

std::string fixed(double value, int decimals) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, decimals);
  if (ec != std::errc{}) {
    // Magnitudes too large for the buffer.
    std::string out(512, '\0');
    const int n = std::snprintf(out.data(), out.size(), "%.*f", decimals, value);
    out.resize(static_cast<std::size_t>(n));
    return out;
  }
  return {buf.data(), end};
}

std::string significant(double value, int digits) {
  std::array<char, 64> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.*g", digits, value);
  return {buf.data(), static_cast<std::size_t>(n)};
}

std::optional<double> parseDouble(std::string_view token) {
  if (token.empty()) {
    return std::nullopt;
  }
  // from_chars rejects a leading '+', which hand-written files sometimes carry.
  if (token.front() == '+') {
    token.remove_prefix(1);
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace forcectl::numfmt
