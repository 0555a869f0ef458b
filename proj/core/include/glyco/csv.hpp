#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace glyco::csv {

/// Splits one CSV line on commas. Quoting is not supported; fields are trimmed
/// of surrounding blanks and a trailing carriage return.
std::vector<std::string_view> split(std::string_view line);

/// Parses a finite double; returns false on any trailing garbage.
bool parse_double(std::string_view text, double& out);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// Fixed-point representation with the given number of decimals.
std::string format_fixed(double v, int decimals);

}  // namespace glyco::csv
