#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nlv {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Bad user-supplied configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated physical precondition: aliasing risk, unresolved grid,
// invalid analytic branch, ... (CLI exit code 2).
struct PhysicsError : std::runtime_error {
    explicit PhysicsError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nlv
