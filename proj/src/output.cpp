#include "steinlab/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace steinlab {

double round12(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

nlohmann::json round_numbers(const nlohmann::json& j) {
    if (j.is_number_float()) return round12(j.get<double>());
    if (j.is_array() || j.is_object()) {
        nlohmann::json out = j;
        for (auto& v : out) v = round_numbers(v);
        return out;
    }
    return j;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string dump_json(const nlohmann::json& j) { return round_numbers(j).dump(2) + "\n"; }

}  // namespace steinlab
