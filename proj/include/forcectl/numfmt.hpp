#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace forcectl::numfmt {

/// Shortest decimal text that parses back to exactly `value`.
std::string shortest(double value);

/// Like shortest() but always carries a decimal point or exponent ("0.0", "90.0", "12.25").
std::string shortestDecimal(double value);

/// Fixed notation with `decimals` digits after the point.
std::string fixed(double value, int decimals);

/// printf "%.<digits>g".
std::string significant(double value, int digits);

/// Parses the whole token as a double; nullopt on any trailing garbage.
std::optional<double> parseDouble(std::string_view token);

}  // namespace forcectl::numfmt
