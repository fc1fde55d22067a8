#pragma once

#include <string>

#include <json.hpp>

namespace steinlab {

/// x rounded to 12 significant digits (non-finite values pass through).
double round12(double x);

/// Copy of j with every floating-point number rounded by round12.
nlohmann::json round_numbers(const nlohmann::json& j);

/// "%.12g" text of x; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

/// Rounded JSON, two-space indent, trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace steinlab
