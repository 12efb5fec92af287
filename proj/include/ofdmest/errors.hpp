// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ofdmest {

/// Numerical failure: matrix singular or condition estimate above the
/// supported threshold.
struct SingularMatrixError : std::runtime_error {
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Blind identification preconditions violated (channel order too large
/// for the prefix/block geometry, or not enough samples).
struct IdentifiabilityError : std::runtime_error {
    explicit IdentifiabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration parse or validation failure. `line` is 0 when the error
/// is semantic rather than textual.
struct ConfigError : std::runtime_error {
    int line;
    explicit ConfigError(const std::string& what, int line_no = 0)
        : std::runtime_error(what), line(line_no) {}
};

} // namespace ofdmest
