#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace schottky {

using cplx = std::complex<double>;

// Error taxonomy mirrored by the CLI exit codes: validation -> 2,
// resource/budget -> 3, numeric route/coverage -> 4.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct validation_error : error { using error::error; };
struct resource_error : error { using error::error; };
struct route_error : error { using error::error; };      // wrong evaluation region / method not applicable
struct coverage_error : error { using error::error; };   // requested window not certified by available data
struct numeric_error : error { using error::error; };    // convergence / conditioning failures

// Round-trip decimal formatting used by every CSV/JSON artifact.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string fmt17(cplx z) {
    return fmt17(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt17(std::abs(z.imag())) + "i";
}

constexpr double kPi = 3.14159265358979323846264338327950288;

inline double sqr(double x) { return x * x; }

// FNV-1a, used for config hashes in run manifests.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace schottky
