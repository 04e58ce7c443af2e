#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "gfc/errors.hpp"
#include "gfc/special.hpp"

namespace gfc {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline GaussRule make_gauss_rule(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_n(x) and P'_n(x).
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

} // namespace detail

inline const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::make_gauss_rule(n)).first;
    return it->second;
}

template <class F>
double integrate_gl(F&& f, double a, double b, int n) {
    const GaussRule& r = gauss_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
    return s * half;
}

// Adaptive bisection with an embedded GL12/GL24 error estimate. Segments are
// processed left to right so the bulk of the mass enters the error scale
// before any small-tail panels are judged; abs_tol puts a floor under the
// acceptance test for integrands whose tails are evaluation-noise limited.
template <class F>
double adaptive_integrate(F&& f, double a, double b, double rel_tol,
                          int max_depth = 30, double abs_tol = 0.0) {
    struct Seg {
        double a, b;
        int depth;
    };
    std::vector<Seg> stack{{a, b, 0}};
    double total = 0.0, mass = 0.0;
    long panels = 0;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        double coarse = integrate_gl(f, s.a, s.b, 12);
        double fine = integrate_gl(f, s.a, s.b, 24);
        double err = std::abs(fine - coarse);
        double scale = std::max(mass + std::abs(fine), std::abs(fine));
        if (err <= std::max(rel_tol * scale, abs_tol) || s.depth >= max_depth) {
            total += fine;
            mass += std::abs(fine);
        } else {
            double m = 0.5 * (s.a + s.b);
            stack.push_back({m, s.b, s.depth + 1});
            stack.push_back({s.a, m, s.depth + 1});
        }
        if (++panels > 200000)
            throw convergence_error("adaptive_integrate: panel budget exhausted");
    }
    return total;
}

// Chebyshev interpolant of f on [a, b].
struct ChebFit {
    double a = 0.0, b = 1.0;
    std::vector<double> coef;

    double eval(double x) const {
        double y = (2.0 * x - a - b) / (b - a);
        double d = 0.0, dd = 0.0;
        for (int j = static_cast<int>(coef.size()) - 1; j >= 1; --j) {
            double sv = d;
            d = 2.0 * y * d - dd + coef[j];
            dd = sv;
        }
        return y * d - dd + 0.5 * coef[0];
    }
};

template <class F>
ChebFit chebyshev_fit(F&& f, double a, double b, int n) {
    ChebFit fit;
    fit.a = a;
    fit.b = b;
    std::vector<double> fv(n);
    for (int k = 0; k < n; ++k) {
        double y = std::cos(pi * (k + 0.5) / n);
        fv[k] = f(0.5 * (b - a) * y + 0.5 * (b + a));
    }
    fit.coef.resize(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += fv[k] * std::cos(pi * j * (k + 0.5) / n);
        fit.coef[j] = 2.0 * s / n;
    }
    return fit;
}

} // namespace gfc
