#pragma once

#include <string>
#include <string_view>

namespace homopart {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);
/// Fixed-point with `decimals` digits.
std::string format_fixed(double value, int decimals);
/// Strict decimal parse; the whole string must be consumed.
double parse_double(std::string_view text);

}  // namespace homopart
