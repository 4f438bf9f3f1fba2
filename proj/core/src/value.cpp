#include "cliq/value.hpp"

#include <charconv>
#include <cmath>

namespace cliq {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";

    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    std::string s(buf, res.ptr);
    // "42" -> "42.0" so the text still reads as a float.
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string value_to_string(const Value& v) {
    if (is_int(v)) return std::to_string(as_int(v));
    if (is_bool(v)) return as_bool(v) ? "true" : "false";
    return format_double(as_float(v));
}

} // namespace cliq
