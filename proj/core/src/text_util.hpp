#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace countsim::detail {

// Shortest representation that parses back to the identical double; used in
// the per-seed CSVs so downstream statistics recompute bit-identically.
inline std::string exact(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace countsim::detail
