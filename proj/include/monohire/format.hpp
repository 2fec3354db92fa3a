// Small text helpers shared by the serializers and the CLI.
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace monohire {

// All floating-point output uses 12 significant digits.
inline constexpr int kOutputDigits = 12;

std::string format_number(double x);

// Rounds x to kOutputDigits significant digits (the value format_number prints).
double round_significant(double x);

std::string_view trim(std::string_view text);

// Splits on `sep`, trimming each piece; empty input yields an empty list.
std::vector<std::string> split_list(std::string_view text, char sep = ',');

// Strict full-string conversions; throw ArgumentError naming `what`.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

std::vector<double> parse_double_list(std::string_view text, std::string_view what);

}  // namespace monohire
