#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "gfc/contour.hpp"
#include "gfc/errors.hpp"
#include "gfc/kernel.hpp"
#include "gfc/rootfind.hpp"

namespace gfc {

enum class GrowthMode { residue_split, bromwich };

// Inversion contour parameters. Defaults (zeros) are resolved per solve:
// r = p0/2 and gamma = 2*p0, keeping the pole well clear of both lines.
struct ContourSpec {
    double gamma = 0.0;             // Bromwich abscissa, > p0
    double r = 0.0;                 // shifted abscissa, in (0, p0)
    double truncation_height = 0.0; // vertical extent before the bent tails
    int nodes = 256;                // >= 64
    ContourRule rule = ContourRule::gauss_segments;
    double rel_tol = 1e-12;
};

// Solution of the growth problem on a time grid. In residue_split mode the
// values are assembled exactly as amplitude*e^{p0 t} + remainder, with the
// remainder V(t) coming from the line Re p = r left of the pole.
struct GrowthSolution {
    double lambda = 0.0;
    double p0 = 0.0;
    double amplitude = 0.0;
    std::vector<double> times;
    std::vector<double> values;     // u(t), or log u(t) when log_space
    std::vector<double> remainders; // V(t) = u - amplitude*e^{p0 t}
    std::vector<double> normalized; // e^{-p0 t} u(t), always finite
    GrowthMode mode = GrowthMode::residue_split;
    bool log_space = false;
};

namespace detail {

inline void resolve_contour(ContourSpec& cs, double p0) {
    if (cs.nodes < 64) throw input_error("ContourSpec: nodes must be >= 64");
    if (cs.r == 0.0) cs.r = 0.5 * p0;
    if (cs.gamma == 0.0) cs.gamma = 2.0 * p0;
    if (!(cs.r > 0.0 && cs.r < p0 && p0 < cs.gamma))
        throw input_error("ContourSpec: need 0 < r < p0 < gamma");
}

// Scaled line integral of the growth resolvent factor
//   H(p) = lambda / (p (phi(p) -+ lambda)),
// returning (1/pi) Im int e^{(p-c)t} H dp over the upper path.
inline double resolvent_line(const KernelSymbol& sym, double lambda, double sign,
                             double c, double t, double pole_scale,
                             const ContourSpec& cs) {
    LineContourOptions opt;
    opt.abscissa = c;
    opt.t = t;
    opt.turn_height = cs.truncation_height;
    opt.rule = cs.rule;
    opt.rel_tol = cs.rel_tol;
    opt.nodes = cs.nodes;
    opt.structure_scale = pole_scale;
    auto H = [&](cdouble p) { return lambda / (p * (sym.phi(p) + sign * lambda)); };
    return laplace_line_inversion(H, opt).scaled;
}

} // namespace detail

// Solves the growth problem (kernel derivative of u) = lambda*u, u(0) = 1 by
// inverting K(p)/(phi(p)-lambda). residue_split peels off the pole residue
// amplitude*e^{p0 t} in closed form and evaluates only the remainder on the
// line Re p = r; bromwich integrates directly on Re p = gamma.
inline GrowthSolution solve_growth(const KernelSymbol& sym, double lambda,
                                   std::vector<double> times,
                                   ContourSpec spec = {},
                                   GrowthMode mode = GrowthMode::residue_split) {
    if (!(lambda > 0.0)) throw domain_error("solve_growth: lambda must be > 0");
    for (double t : times)
        if (!(t > 0.0)) throw domain_error("solve_growth: times must be > 0");

    AdmissibilityReport rep = check_admissibility(sym);
    if (!rep.admissible())
        throw admissibility_error(
            "solve_growth: kernel fails the admissibility screen (" + rep.notes +
            ")");

    RootResult root = p0_of_lambda(sym, lambda);
    const double p0 = root.p0;
    const double A = lambda / (sym.phi_prime(p0) * p0);

    ContourSpec cs = spec;
    detail::resolve_contour(cs, p0);

    GrowthSolution sol;
    sol.lambda = lambda;
    sol.p0 = p0;
    sol.amplitude = A;
    sol.mode = mode;
    sol.times = std::move(times);

    double tmax = 0.0;
    for (double t : sol.times) tmax = std::max(tmax, t);
    sol.log_space = p0 * tmax > 700.0;

    for (double t : sol.times) {
        double c = (mode == GrowthMode::residue_split) ? cs.r : cs.gamma;
        double scaled =
            detail::resolvent_line(sym, lambda, -1.0, c, t, 0.5 * p0, cs);
        double V, norm;
        if (mode == GrowthMode::residue_split) {
            V = 1.0 + std::exp(cs.r * t) * scaled;
            norm = A + std::exp(-p0 * t) + std::exp((cs.r - p0) * t) * scaled;
        } else {
            double u = 1.0 + std::exp(cs.gamma * t) * scaled;
            norm = std::exp(-p0 * t) + std::exp((cs.gamma - p0) * t) * scaled;
            V = u - A * std::exp(p0 * t);
        }
        sol.remainders.push_back(V);
        sol.normalized.push_back(norm);
        if (sol.log_space)
            sol.values.push_back(p0 * t + std::log(norm));
        else
            sol.values.push_back(A * std::exp(p0 * t) + V);
    }
    return sol;
}

// Relaxation problem (kernel derivative of u) = -lambda*u, u(0) = 1:
// inverts K(p)/(phi(p)+lambda). No poles off the cut, so any abscissa > 0
// works; it shrinks like 1/t to keep the e^{ct} amplification bounded.
inline std::vector<double> solve_relaxation(const KernelSymbol& sym, double lambda,
                                            const std::vector<double>& times,
                                            ContourSpec spec = {}) {
    if (!(lambda > 0.0))
        throw domain_error("solve_relaxation: lambda must be > 0");
    for (double t : times)
        if (!(t > 0.0)) throw domain_error("solve_relaxation: times must be > 0");

    AdmissibilityReport rep = check_admissibility(sym);
    if (!rep.limits_ok())
        throw admissibility_error(
            "solve_relaxation: kernel fails the limit screen (" + rep.notes + ")");

    ContourSpec cs = spec;
    if (cs.nodes < 64) throw input_error("ContourSpec: nodes must be >= 64");

    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        double c = std::min(1.0, 2.0 / t);
        ContourSpec local = cs;
        double scaled = detail::resolvent_line(sym, lambda, +1.0, c, t, c, local);
        out.push_back(1.0 - std::exp(c * t) * scaled);
    }
    return out;
}

// e^{-p0 t} V(t): the normalized remainder, which must decay as t grows.
inline double remainder_ratio(const KernelSymbol& sym, double lambda, double t,
                              ContourSpec spec = {}) {
    if (!(lambda > 0.0) || !(t > 0.0))
        throw domain_error("remainder_ratio: lambda and t must be > 0");
    AdmissibilityReport rep = check_admissibility(sym);
    if (!rep.admissible())
        throw admissibility_error(
            "remainder_ratio: kernel fails the admissibility screen");
    RootResult root = p0_of_lambda(sym, lambda);
    ContourSpec cs = spec;
    detail::resolve_contour(cs, root.p0);
    double scaled =
        detail::resolvent_line(sym, lambda, -1.0, cs.r, t, 0.5 * root.p0, cs);
    return std::exp(-root.p0 * t) + std::exp((cs.r - root.p0) * t) * scaled;
}

} // namespace gfc
