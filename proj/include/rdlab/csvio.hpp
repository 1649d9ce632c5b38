#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace rdlab::io {

/// Shortest round-trippable decimal rendering used in all CSV output:
/// 17 significant digits, locale-independent '.' separator.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Split one CSV line on ','. No quoting: none of the file formats here
/// carry text fields that may contain commas.
inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

/// Strict double parse; returns false on trailing junk or empty field.
inline bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

}  // namespace rdlab::io
