#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gfc/contour.hpp"
#include "gfc/errors.hpp"
#include "gfc/kernel.hpp"
#include "gfc/quadrature.hpp"

namespace gfc {

// One time slice of the subordination kernel G(s, t): the nonnegative kernel
// with unit mass in s whose t-transform is K(p) e^{-s phi(p)}.
struct SubordinationSlice {
    double t = 0.0;
    std::vector<double> s_grid;
    std::vector<double> g_values;
    double mass = 0.0;      // head + grid quadrature + tail, clamped at 0
    double min_value = 0.0; // most negative computed value (noise indicator)
    double head_mass = 0.0; // int_0^{s_min} G ds, by transform inversion
    double tail_mass = 0.0; // int_{s_max}^inf G ds, by transform inversion
    int failed_points = 0;
};

// K(p) e^{-s phi(p)}, evaluated in log space so large s*phi cannot overflow.
inline cdouble subordination_transform(const KernelSymbol& sym, double s,
                                       cdouble p) {
    if (!(s >= 0.0)) throw domain_error("subordination_transform: s must be >= 0");
    require_off_cut(p);
    cdouble K = sym.laplace_K(p);
    cdouble w = std::log(K) - s * sym.phi(p);
    if (w.real() < -745.0) return {0.0, 0.0};
    if (w.real() > 709.0)
        throw convergence_error("subordination_transform: overflow");
    return std::exp(w);
}

namespace detail {

inline LineContourOptions subordination_contour(double t, double rel_tol) {
    LineContourOptions opt;
    opt.abscissa = 1.0 / t;
    opt.t = t;
    opt.structure_scale = 1.0 / t;
    opt.rel_tol = rel_tol;
    return opt;
}

// Chernoff-style saddle bound on |G(s,t)|: min over real c of
// e^{ct - s phi(c)} phi(c), up to a line-width factor. Used only to skip
// inversions that cannot contribute at the working precision. The scan runs
// far to the right: nearly-linear symbols place the saddle at huge c.
inline bool slice_value_negligible(const KernelSymbol& sym, double t, double s) {
    if (s <= 0.0) return false;
    double best = 1e300;
    for (int j = -8; j <= 360; j += 2) {
        double c = std::ldexp(1.0 / t, j);
        if (!(c < 1e290)) break;
        double phi = sym.phi(c);
        if (!(phi < 1e290)) break;
        double e = c * t - s * phi + std::log(phi + 1e-300);
        best = std::min(best, e);
        if (e > best + 200.0) break; // far past the minimum
    }
    return best < -80.0;
}

} // namespace detail

// Pointwise G(s, t) by inverting K(p) e^{-s phi(p)} on the line Re p = 1/t
// with bent tails.
inline double subordination_point(const KernelSymbol& sym, double t, double s,
                                  double rel_tol = 1e-12) {
    if (!(t > 0.0)) throw domain_error("subordination_point: t must be > 0");
    if (!(s >= 0.0)) throw domain_error("subordination_point: s must be >= 0");
    if (detail::slice_value_negligible(sym, t, s)) return 0.0;
    LineContourOptions opt = detail::subordination_contour(t, rel_tol);
    auto H = [&](cdouble p) { return subordination_transform(sym, s, p); };
    LineContourResult r = laplace_line_inversion(H, opt);
    return std::exp(1.0) * r.scaled; // e^{ct} with c = 1/t
}

// Geometric default grid: 200 points on [1e-4, 50] times the kernel scale
// 1/phi(1), where s*phi ~ 1 concentrates the kernel.
inline std::vector<double> default_subordination_grid(const KernelSymbol& sym,
                                                      int points = 200) {
    if (points < 2) throw input_error("subordination grid needs >= 2 points");
    double t_star = 1.0 / sym.phi(1.0);
    double lo = 1e-4 * t_star, hi = 50.0 * t_star;
    std::vector<double> g(points);
    double ratio = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) g[i] = lo * std::exp(ratio * i);
    return g;
}

// Head and tail masses are themselves inverse transforms:
//   int_0^S G ds   has transform (1 - e^{-S phi(p)}) / p,
//   int_S^inf G ds has transform e^{-S phi(p)} / p.
inline double subordination_tail_mass(const KernelSymbol& sym, double t, double S,
                                      double rel_tol = 1e-12) {
    LineContourOptions opt = detail::subordination_contour(t, rel_tol);
    auto H = [&](cdouble p) {
        cdouble w = -S * sym.phi(p);
        if (w.real() < -745.0) return cdouble{0.0, 0.0};
        return std::exp(w) / p;
    };
    return std::exp(1.0) * laplace_line_inversion(H, opt).scaled;
}

inline double subordination_head_mass(const KernelSymbol& sym, double t, double S,
                                      double rel_tol = 1e-12) {
    LineContourOptions opt = detail::subordination_contour(t, rel_tol);
    auto H = [&](cdouble p) {
        cdouble w = -S * sym.phi(p);
        cdouble one_minus; // 1 - e^w without cancellation for small |w|
        if (std::abs(w) < 1e-3) {
            one_minus = -w * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w / 24.0)));
        } else if (w.real() < -745.0) {
            one_minus = 1.0;
        } else {
            one_minus = 1.0 - std::exp(w);
        }
        return one_minus / p;
    };
    return std::exp(1.0) * laplace_line_inversion(H, opt).scaled;
}

// Full slice with the normalization diagnostics. Values below -1e-8 indicate
// a failed inversion; values in [-1e-8, 0) are treated as quadrature noise
// and clamped to 0 inside the mass integral while staying visible in
// g_values and min_value.
inline SubordinationSlice subordination_kernel(const KernelSymbol& sym, double t,
                                               const std::vector<double>& s_grid,
                                               double rel_tol = 1e-11) {
    if (!(t > 0.0)) throw domain_error("subordination_kernel: t must be > 0");
    if (s_grid.size() < 2)
        throw input_error("subordination_kernel: grid needs >= 2 points");
    for (size_t i = 0; i < s_grid.size(); ++i) {
        if (!(s_grid[i] >= 0.0))
            throw domain_error("subordination_kernel: grid must be nonnegative");
        if (i > 0 && !(s_grid[i] > s_grid[i - 1]))
            throw domain_error("subordination_kernel: grid must be increasing");
    }

    SubordinationSlice slice;
    slice.t = t;
    slice.s_grid = s_grid;
    slice.min_value = 0.0;

    auto G = [&](double s) -> double {
        return subordination_point(sym, t, s, rel_tol);
    };
    auto G_clamped = [&](double s) -> double {
        try {
            return std::max(G(s), 0.0);
        } catch (const convergence_error&) {
            ++slice.failed_points;
            return 0.0;
        }
    };

    slice.g_values.reserve(s_grid.size());
    for (double s : s_grid) {
        try {
            double v = G(s);
            slice.g_values.push_back(v);
            slice.min_value = std::min(slice.min_value, v);
        } catch (const convergence_error&) {
            slice.g_values.push_back(std::numeric_limits<double>::quiet_NaN());
            ++slice.failed_points;
        }
    }

    // Mass: 3-point Gauss inside every grid interval keeps the geometric-grid
    // quadrature error well below the 1e-6 normalization tolerance.
    double grid_mass = 0.0;
    for (size_t i = 0; i + 1 < s_grid.size(); ++i)
        grid_mass += integrate_gl(G_clamped, s_grid[i], s_grid[i + 1], 3);
    slice.head_mass = subordination_head_mass(sym, t, s_grid.front(), rel_tol);
    slice.tail_mass = subordination_tail_mass(sym, t, s_grid.back(), rel_tol);
    slice.mass = grid_mass + std::max(slice.head_mass, 0.0) +
                 std::max(slice.tail_mass, 0.0);
    return slice;
}

// Growth solution through the subordination identity: int_0^inf e^{lambda s}
// G(s, t) ds, integrated adaptively until the integrand has decayed.
inline double growth_via_subordination(const KernelSymbol& sym, double lambda,
                                       double t, double rel_tol = 1e-11) {
    if (!(lambda > 0.0) || !(t > 0.0))
        throw domain_error("growth_via_subordination: lambda and t must be > 0");

    auto f = [&](double s) {
        double g = subordination_point(sym, t, s, rel_tol);
        return std::exp(lambda * s) * std::max(g, 0.0);
    };

    // Find the decayed upper end by geometric probing.
    double t_star = 1.0 / sym.phi(1.0);
    double s_hi = t_star;
    double f_max = f(0.0);
    const double s_cap = 4096.0 * t_star * std::max(1.0, lambda * t);
    int decayed = 0;
    while (true) {
        double v = f(s_hi);
        f_max = std::max(f_max, v);
        if (v < 1e-9 * f_max)
            ++decayed;
        else
            decayed = 0;
        if (decayed >= 2) break;
        s_hi *= 2.0;
        if (s_hi > s_cap)
            throw convergence_error(
                "growth_via_subordination: integrand not decaying at the s cap");
    }
    // The far tail of e^{lambda s} G is evaluation-noise limited; the
    // absolute floor keeps the refinement from chasing that noise.
    double abs_floor = 1e-10 * f_max * (s_hi + 1.0);
    return adaptive_integrate(f, 0.0, s_hi, 1e-7, 30, abs_floor);
}

} // namespace gfc
