#include "c3g/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace c3g {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, res.ptr);
}

std::string format_sci3(double v) {
    if (!std::isfinite(v)) return format_double(v);
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 2);
    if (res.ec != std::errc()) throw std::runtime_error("format_sci3: to_chars failed");
    std::string s(buf, res.ptr);
    const auto e = s.find('e');
    const std::string mantissa = s.substr(0, e);
    const int exponent = std::atoi(s.c_str() + e + 1);
    return mantissa + "e" + std::to_string(exponent);
}

}  // namespace c3g
