#pragma once

// Internal file-output helpers shared by the CSV/JSON writers. All
// writers go through atomic_write so a failed run never leaves a
// partial output file behind.

#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

namespace esn::detail {

/// Shortest exact decimal form of a double ("%.17g" round-trips; shorter
/// forms are preferred when they parse back bit-identically). Locale
/// independent, "." decimal point.
inline std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        const double back = std::strtod(buf, nullptr);
        if (back == v || (back != back && v != v)) return buf;
    }
    return buf;
}

/// Renders content into a temp file next to `path`, then renames it into
/// place. Throws esn::Error on I/O failure.
void atomic_write(const std::string& path, const std::function<void(std::ostream&)>& produce);

}  // namespace esn::detail
