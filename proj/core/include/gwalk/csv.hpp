#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace gwalk {

/// CSV cell formatting: '.' decimal separator, LF rows, fixed %.17g doubles
/// so identical seeds reproduce byte-identical artifacts.
inline std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_int(std::int64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    return buf;
}

/// FNV-1a over a canonical string, printed as 16 hex digits.
inline std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gwalk
