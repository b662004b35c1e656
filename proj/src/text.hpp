#pragma once

#include <cstdio>
#include <string>

namespace nme::detail {

inline std::string real_text(double v, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

}  // namespace nme::detail
