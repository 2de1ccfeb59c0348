#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "fanomom/errors.hpp"

namespace fanomom {

/// Shortest round-trippable decimal form of a double ("%.17g" is lossless for
/// IEEE binary64); used for every numeric field written to CSV or JSON so that
/// save/load cycles are exact.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

/// Split a line on `sep`, trimming surrounding spaces from each field.
inline std::vector<std::string> split_fields(const std::string& line,
                                             char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        std::string field = (pos == std::string::npos)
                                ? line.substr(start)
                                : line.substr(start, pos - start);
        const auto a = field.find_first_not_of(" \t\r");
        const auto b = field.find_last_not_of(" \t\r");
        out.push_back(a == std::string::npos ? std::string()
                                             : field.substr(a, b - a + 1));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

/// strtod with full-consumption check.
inline double parse_double(const std::string& s) {
    if (s.empty()) throw Error(ErrorCode::BadInput, "empty numeric field");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw Error(ErrorCode::BadInput, "cannot parse number: '" + s + "'");
    return v;
}

}  // namespace fanomom
