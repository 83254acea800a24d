#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace convapprox {

/// Shortest decimal string that round-trips to the same double. "inf" for +infinity.
inline std::string shortest(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace convapprox
