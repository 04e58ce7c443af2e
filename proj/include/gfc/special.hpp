#pragma once

#include <cmath>
#include <limits>

#include "gfc/errors.hpp"

namespace gfc {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double sqrt_pi = 1.77245385090551602730;
inline constexpr double euler_e = 2.71828182845904523536;

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients.
inline constexpr double lanczos_c[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

inline double lanczos_sum(double x) {
    double s = lanczos_c[0];
    for (int i = 1; i < 9; ++i) s += lanczos_c[i] / (x - 1.0 + i);
    return s;
}

} // namespace detail

// sin(pi*x) with the argument reduced exactly, so integer x gives exactly 0.
inline double sinpi(double x) {
    double r = std::remainder(x, 2.0); // in [-1, 1]
    if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
    return std::sin(pi * r);
}

// Gamma function for real arguments away from the poles 0, -1, -2, ...
// At a pole returns NaN. Overflows to +inf above ~171.6.
inline double gamma_fn(double x) {
    if (x >= 0.5) {
        if (x > 171.63) return std::numeric_limits<double>::infinity();
        double t = x + 6.5;
        return std::sqrt(2.0 * pi) * std::pow(t, x - 0.5) * std::exp(-t) *
               detail::lanczos_sum(x);
    }
    double s = sinpi(x);
    if (s == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return pi / (s * gamma_fn(1.0 - x));
}

// log Gamma(x), x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw domain_error("log_gamma: argument must be positive");
    if (x < 0.5)
        return std::log(pi / sinpi(x)) - log_gamma(1.0 - x);
    double t = x + 6.5;
    return 0.5 * std::log(2.0 * pi) + (x - 0.5) * std::log(t) - t +
           std::log(detail::lanczos_sum(x));
}

// 1/Gamma(x) for any real x; equals exactly 0 at the poles of Gamma.
inline double reciprocal_gamma(double x) {
    if (x >= 0.5) return 1.0 / gamma_fn(x);
    return sinpi(x) * gamma_fn(1.0 - x) / pi;
}

// exp(x^2) erfc(x), stable for large positive x.
inline double erfcx_fn(double x) {
    if (x < 20.0) return std::exp(x * x) * std::erfc(x);
    // asymptotic series: (1/(x sqrt(pi))) (1 - 1/(2x^2) + 3/(4x^4) - ...)
    double ix2 = 1.0 / (x * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 6; ++k) {
        term *= -(2.0 * k - 1.0) * 0.5 * ix2;
        sum += term;
    }
    return sum / (x * sqrt_pi);
}

} // namespace gfc
