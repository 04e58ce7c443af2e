#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "gfc/errors.hpp"
#include "gfc/quadrature.hpp"

namespace gfc {

enum class ContourRule { gauss_segments, trapezoid };

// Inversion of a Laplace transform H along the line Re p = c, with the far
// tails bent into rays of angle ray_angle so that e^{pt} damps them. The
// bend crosses no singularity for the resolvent-type transforms used here
// (poles sit on the real axis, the cut is (-inf, 0]), so the value equals
// the straight-line integral.
//
// Transforms of the form e^{-s phi(p)} can grow along the bent ray when the
// symbol is nearly linear; the engine detects that, keeps extending the
// vertical segment instead (where such transforms decay fast), and drops the
// rays once the integrand has died on the line.
//
// H must satisfy H(conj p) = conj H(p); the lower half-line then contributes
// the conjugate and only the upper half is integrated:
//
//     (1/(2 pi i)) int_{c-i inf}^{c+i inf} e^{pt} H(p) dp
//         = e^{ct} * (1/pi) Im int_{Gamma_up} e^{(p-c)t} H(p) dp.
//
// The returned value is the scaled factor (1/pi) Im ...; the caller applies
// e^{ct} (or keeps log space). This keeps every quadrature sample bounded by
// |H| regardless of how large c*t is.
struct LineContourOptions {
    double abscissa = 1.0;    // c > 0
    double t = 1.0;           // evaluation time, > 0
    double turn_height = 0.0; // 0 = automatic
    double ray_angle = 2.35619449019234493; // 3*pi/4
    ContourRule rule = ContourRule::gauss_segments;
    double rel_tol = 1e-12;
    int nodes = 256;             // seed resolution of the vertical part
    double structure_scale = 0.0; // tau-scale of variation near the real axis
    int max_turn_retries = 48;   // vertical extensions before giving up
    long eval_budget = 40000000;
};

struct LineContourResult {
    double scaled = 0.0;     // (1/pi) Im of the upper-path integral
    double abs_mass = 0.0;   // (1/pi) int |e^{(p-c)t} H| |dp|: noise scale
    double tail_bound = 0.0; // estimate of the neglected remainder
    bool converged = false;
    long evaluations = 0;
};

namespace detail {

template <class F>
struct PanelIntegrator {
    F& f; // complex integrand of a real parameter
    double tol;
    long& evals;
    long budget;
    std::complex<double> total{0.0, 0.0};
    double mass = 0.0;

    std::complex<double> gl(double a, double b, int n, double& absmass) {
        const GaussRule& r = gauss_rule(n);
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        std::complex<double> s{0.0, 0.0};
        absmass = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> v = f(mid + half * r.nodes[i]);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw convergence_error("contour: integrand not finite");
            s += r.weights[i] * v;
            absmass += r.weights[i] * std::abs(v);
        }
        evals += n;
        if (evals > budget)
            throw convergence_error("contour: evaluation budget exhausted");
        absmass *= half;
        return s * half;
    }

    // Returns the absolute mass contributed by [a, b].
    double integrate(double a, double b) {
        struct Seg {
            double a, b;
            int depth;
        };
        std::vector<Seg> stack{{a, b, 0}};
        double contributed = 0.0;
        while (!stack.empty()) {
            Seg s = stack.back();
            stack.pop_back();
            double am12 = 0.0, am24 = 0.0;
            std::complex<double> c12 = gl(s.a, s.b, 12, am12);
            std::complex<double> c24 = gl(s.a, s.b, 24, am24);
            double err = std::abs(c24 - c12);
            double scale = std::max(mass + am24, am24);
            if (err <= 0.25 * tol * scale || s.depth >= 40) {
                total += c24;
                mass += am24;
                contributed += am24;
            } else {
                double m = 0.5 * (s.a + s.b);
                stack.push_back({s.a, m, s.depth + 1});
                stack.push_back({m, s.b, s.depth + 1});
            }
        }
        return contributed;
    }
};

} // namespace detail

template <class H>
LineContourResult laplace_line_inversion(H&& transform, const LineContourOptions& opt) {
    const double c = opt.abscissa, t = opt.t;
    if (!(c > 0.0)) throw domain_error("contour: abscissa must be > 0");
    if (!(t > 0.0)) throw domain_error("contour: t must be > 0");
    if (opt.nodes < 64) throw input_error("contour: nodes must be >= 64");

    const double scale = opt.structure_scale > 0.0 ? opt.structure_scale : c;
    const std::complex<double> ray_dir = std::polar(1.0, opt.ray_angle);
    const double ray_decay = -std::cos(opt.ray_angle) * t; // per unit ray length
    const double phase_cap_v = 8.0 * pi / t;
    const double phase_cap_r = phase_cap_v / std::sin(opt.ray_angle);
    LineContourResult res;
    long evals = 0;

    auto F = [&](std::complex<double> p) -> std::complex<double> {
        std::complex<double> w = (p - c) * t;
        if (w.real() < -745.0) return {0.0, 0.0};
        return std::exp(w) * transform(p);
    };

    double T0 = opt.turn_height > 0.0 ? opt.turn_height
                                      : std::max(8.0 * scale, 30.0 / t);

    auto fv = [&](double tau) {
        return F({c, tau}) * std::complex<double>(0.0, 1.0);
    };
    detail::PanelIntegrator<decltype(fv)> vert{fv, opt.rel_tol, evals,
                                               opt.eval_budget};

    // Vertical segment p = c + i tau, tau in [0, T0].
    if (opt.rule == ContourRule::gauss_segments) {
        double lo = 0.0;
        double w = std::min({scale * 0.5, T0 / 8.0, phase_cap_v});
        while (lo < T0) {
            double hi = std::min(lo + w, T0);
            vert.integrate(lo, hi);
            lo = hi;
            w = std::min(w * 2.0, phase_cap_v);
        }
    } else {
        // Composite trapezoid on a sinh-clustered map, doubling until the
        // refinement stabilizes. Used for the initial segment only; any
        // extensions below reuse the adaptive panels.
        double cl = std::min(scale, T0);
        double Y = std::asinh(T0 / cl);
        auto ftr = [&](double y) {
            double tau = cl * std::sinh(y);
            return fv(tau) * (cl * std::cosh(y));
        };
        int n = std::max(opt.nodes, 65);
        std::complex<double> prev{0.0, 0.0};
        for (int pass = 0;; ++pass) {
            std::complex<double> s = 0.5 * (ftr(0.0) + ftr(Y));
            double am = 0.5 * (std::abs(ftr(0.0)) + std::abs(ftr(Y)));
            double h = Y / n;
            for (int i = 1; i < n; ++i) {
                std::complex<double> v = ftr(i * h);
                s += v;
                am += std::abs(v);
            }
            evals += n + 1;
            s *= h;
            am *= h;
            if (pass > 0 &&
                std::abs(s - prev) <= opt.rel_tol * std::max(am, std::abs(s))) {
                vert.total += s;
                vert.mass += am;
                break;
            }
            prev = s;
            if (n > (1 << 21))
                throw convergence_error(
                    "contour: trapezoid refinement did not converge");
            n *= 2;
        }
    }

    // Tilted rays p = (c + i T0) + s * ray_dir, with the vertical-extension
    // fallback when the transform grows along the ray.
    for (int attempt = 0;; ++attempt) {
        const std::complex<double> turn{c, T0};
        double m_turn = std::abs(F(turn)) + 1e-300;

        auto fr = [&](double s) { return F(turn + s * ray_dir) * ray_dir; };
        detail::PanelIntegrator<decltype(fr)> ray{fr, opt.rel_tol, evals,
                                                  opt.eval_budget};
        ray.mass = vert.mass;
        bool grew = false;
        double w = std::min(std::max(T0 * 0.25, scale), phase_cap_r);
        double lo = 0.0;
        const double s_end = 1100.0 / ray_decay;
        int quiet = 0;
        while (lo < s_end) {
            double hi = std::min(lo + w, s_end);
            double edge = std::abs(F(turn + hi * ray_dir));
            if (edge > 8.0 * m_turn && hi < s_end) {
                grew = true;
                break;
            }
            double contributed = ray.integrate(lo, hi);
            if (contributed <= opt.rel_tol * ray.mass) {
                if (++quiet >= 2) break;
            } else {
                quiet = 0;
            }
            lo = hi;
            w = std::min(w * 2.0, phase_cap_r);
        }
        if (!grew) {
            double f_end = std::abs(F(turn + lo * ray_dir));
            res.tail_bound = f_end / std::max(ray_decay, 1e-300) / pi;
            res.scaled = (vert.total + ray.total).imag() / pi;
            res.abs_mass = ray.mass / pi;
            res.evaluations = evals;
            res.converged = true;
            return res;
        }

        if (attempt >= opt.max_turn_retries)
            throw convergence_error(
                "contour: transform not damped on either the ray or the "
                "extended line");

        // Extend the vertical segment; transforms that grow on the ray decay
        // on the line, so watch for the integrand dying out entirely.
        double target = 4.0 * T0;
        double w2 = phase_cap_v;
        int quiet_v = 0;
        bool dead = false;
        while (T0 < target) {
            double hi = std::min(T0 + w2, target);
            double contributed = vert.integrate(T0, hi);
            T0 = hi;
            double edge = std::abs(F({c, T0}));
            if (contributed <= opt.rel_tol * vert.mass &&
                edge * phase_cap_v <= 0.1 * opt.rel_tol * vert.mass) {
                if (++quiet_v >= 3) {
                    dead = true;
                    break;
                }
            } else {
                quiet_v = 0;
            }
        }
        if (dead) {
            double edge = std::abs(F({c, T0}));
            res.tail_bound = edge * phase_cap_v / pi;
            res.scaled = vert.total.imag() / pi;
            res.abs_mass = vert.mass / pi;
            res.evaluations = evals;
            res.converged = true;
            return res;
        }
    }
}

} // namespace gfc
