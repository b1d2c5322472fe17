// Copyright 2026 The minfine Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace minfine {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Error type for model construction, compilation and I/O failures.
/// Solver outcomes (infeasible, unbounded, limits) are statuses, not errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Renders a double with 17 significant digits; round-trips bit-exactly
/// through strtod.
inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Replaces characters outside [A-Za-z0-9_.-] so labels can serve as MPS
/// row/column name parts (whitespace-free).
inline std::string sanitize_label(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
        out.push_back(ok ? c : '_');
    }
    return out;
}

inline bool is_finite(double v) { return std::isfinite(v); }

}  // namespace minfine
