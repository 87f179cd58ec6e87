#pragma once

#include <cstdio>
#include <string>

namespace rze::detail {

/// Shortest-form-agnostic decimal with 17 significant digits; reads back bit-exactly.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace rze::detail
