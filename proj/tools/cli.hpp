#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steinlab::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Exit codes: 0 success, 1 usage, domain or numerical error (one
/// `error: <category>: <detail>` line on `err`), 2 when a reproduction
/// scenario has an unsatisfied row.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a,b,c" or "start:stop:count" (inclusive, evenly spaced).
std::vector<double> parse_grid(const std::string& text);

}  // namespace steinlab::cli
