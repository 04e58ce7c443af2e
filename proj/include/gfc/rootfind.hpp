#pragma once

#include <cmath>
#include <sstream>
#include <utility>

#include "gfc/errors.hpp"
#include "gfc/kernel.hpp"

namespace gfc {

struct RootResult {
    double p0 = 0.0;
    double residual = 0.0; // phi(p0) - lambda
    int iterations = 0;
    std::pair<double, double> bracket{0.0, 0.0}; // phi(lo) <= lambda <= phi(hi)
};

// The unique positive root of phi(p) = lambda. phi is strictly increasing on
// (0, inf) for admissible symbols, so a geometric bracket always exists;
// Newton steps are safeguarded by bisection inside the bracket.
inline RootResult p0_of_lambda(const KernelSymbol& sym, double lambda) {
    if (!(lambda > 0.0)) throw domain_error("p0_of_lambda: lambda must be > 0");

    double lo = 1.0, hi = 1.0;
    double f1 = sym.phi(1.0) - lambda;
    if (f1 < 0.0) {
        while (sym.phi(hi) < lambda) {
            hi *= 2.0;
            if (hi > 1e300) {
                std::ostringstream os;
                os << "p0_of_lambda: phi saturates below lambda=" << lambda
                   << " (phi(" << hi / 2.0 << ")=" << sym.phi(hi / 2.0) << ")";
                throw admissibility_error(os.str());
            }
        }
        lo = hi / 2.0;
    } else if (f1 > 0.0) {
        while (sym.phi(lo) > lambda) {
            lo *= 0.5;
            if (lo < 1e-300) {
                std::ostringstream os;
                os << "p0_of_lambda: phi stays above lambda=" << lambda
                   << " near 0 (phi(" << lo * 2.0 << ")=" << sym.phi(lo * 2.0)
                   << ")";
                throw admissibility_error(os.str());
            }
        }
        hi = lo * 2.0;
    }

    RootResult res;
    res.bracket = {lo, hi};
    const double ftol = 1e-14 * std::max(1.0, lambda);

    double x = std::sqrt(lo) * std::sqrt(hi);
    double f = sym.phi(x) - lambda;
    int it = 0;
    for (; it < 200; ++it) {
        if (f < 0.0)
            lo = x;
        else
            hi = x;
        if (std::abs(f) <= ftol) break;
        double d = sym.phi_prime(x);
        double xn = x - f / d;
        if (!(xn > lo) || !(xn < hi) || !std::isfinite(xn)) xn = std::sqrt(lo) * std::sqrt(hi);
        if (std::abs(xn - x) <= 1e-16 * x) {
            x = xn;
            f = sym.phi(x) - lambda;
            break;
        }
        x = xn;
        f = sym.phi(x) - lambda;
    }
    res.p0 = x;
    res.residual = f;
    res.iterations = it;
    return res;
}

// Leading coefficient of the long-time exponential: lambda/(phi'(p0) p0).
inline double asymptotic_amplitude(const KernelSymbol& sym, double lambda) {
    RootResult r = p0_of_lambda(sym, lambda);
    return lambda / (sym.phi_prime(r.p0) * r.p0);
}

// p0(x+y) - p0(x) - p0(y); positive for strictly superadditive growth rates.
inline double superadditivity_margin(const KernelSymbol& sym, double x, double y) {
    if (!(x > 0.0) || !(y > 0.0))
        throw domain_error("superadditivity_margin: x, y must be > 0");
    double sum = p0_of_lambda(sym, x + y).p0;
    return sum - p0_of_lambda(sym, x).p0 - p0_of_lambda(sym, y).p0;
}

// Strict inequality with a relative slack so roundoff cannot fake success.
inline bool superadditivity_check(const KernelSymbol& sym, double x, double y) {
    double sum = p0_of_lambda(sym, x + y).p0;
    return superadditivity_margin(sym, x, y) > 1e-12 * sum;
}

} // namespace gfc
