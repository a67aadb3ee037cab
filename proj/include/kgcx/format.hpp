#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace kgcx {

/// Shortest decimal that round-trips to the same double. Non-finite values
/// render as "nan", "inf" or "-inf".
inline std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;  // no "-0"
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

}  // namespace kgcx
