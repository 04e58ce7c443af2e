#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "gfc/errors.hpp"
#include "gfc/kernel.hpp"
#include "gfc/quadrature.hpp"

namespace gfc {

// Graded time mesh t_j = horizon * (j/steps)^grading. Grading > 1 clusters
// points near 0 where the solution has a weak derivative singularity.
struct MeshSpec {
    double horizon = 1.0;
    int steps = 1024;
    double grading = 2.0;

    std::vector<double> points() const {
        if (!(horizon > 0.0)) throw input_error("MeshSpec: horizon must be > 0");
        if (steps < 1) throw input_error("MeshSpec: steps must be >= 1");
        if (!(grading >= 1.0)) throw input_error("MeshSpec: grading must be >= 1");
        std::vector<double> t(steps + 1);
        for (int j = 0; j <= steps; ++j)
            t[j] = horizon * std::pow(double(j) / steps, grading);
        t[0] = 0.0;
        t[steps] = horizon;
        return t;
    }
};

struct StepSolution {
    MeshSpec mesh;
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> weights_cache; // kernel increments of the last row

    // Linear interpolation between mesh points.
    double value_at(double t) const {
        if (!(t >= times.front() && t <= times.back()))
            throw domain_error("StepSolution::value_at: t outside the mesh");
        auto it = std::lower_bound(times.begin(), times.end(), t);
        if (it == times.begin()) return values.front();
        size_t i = size_t(it - times.begin());
        double t1 = times[i - 1], t2 = times[i];
        double w = (t - t1) / (t2 - t1);
        return (1.0 - w) * values[i - 1] + w * values[i];
    }
};

namespace detail {

// Cumulative-kernel evaluator for the O(N^2) row assembly. Power-law and
// mixture kinds get constant-folded closed forms; the distributed-order
// quadrature is replaced by a Chebyshev interpolant in log t, validated
// against the direct rule with fallback.
inline std::function<double(double)> make_cumulative_evaluator(
    const KernelSymbol& sym, double d_min, double d_max) {
    if (const auto* pl = std::get_if<KernelSymbol::PowerLaw>(&sym.rep())) {
        double c = reciprocal_gamma(2.0 - pl->alpha);
        double e = 1.0 - pl->alpha;
        return [c, e](double d) { return c * std::exp(e * std::log(d)); };
    }
    if (const auto* mix = std::get_if<KernelSymbol::Mixture>(&sym.rep())) {
        std::vector<std::pair<double, double>> ce;
        for (const auto& t : mix->terms)
            ce.emplace_back(t.weight * reciprocal_gamma(2.0 - t.exponent),
                            1.0 - t.exponent);
        return [ce](double d) {
            double ld = std::log(d), v = 0.0;
            for (const auto& [c, e] : ce) v += c * std::exp(e * ld);
            return v;
        };
    }
    if (!std::holds_alternative<KernelSymbol::DistributedOrder>(sym.rep()))
        return [&sym](double d) { return sym.cumulative_kernel(d); };

    double lo = std::log(d_min) - 0.7, hi = std::log(d_max) + 0.01;
    ChebFit fit = chebyshev_fit(
        [&](double x) { return sym.cumulative_kernel(std::exp(x)); }, lo, hi, 96);
    for (int i = 0; i < 16; ++i) {
        double x = lo + (hi - lo) * (i + 0.3) / 16.0;
        double direct = sym.cumulative_kernel(std::exp(x));
        if (std::abs(fit.eval(x) - direct) > 1e-9 * std::max(1.0, direct))
            return [&sym](double d) { return sym.cumulative_kernel(d); };
    }
    return [fit](double d) { return fit.eval(std::log(d)); };
}

} // namespace detail

// Direct marching solver for (kernel derivative of u) = lambda * u by product
// integration with piecewise-linear u. Negative lambda runs the relaxation
// variant of the same scheme; lambda = 0 reproduces u = 1.
inline StepSolution solve_growth_direct(const KernelSymbol& sym, double lambda,
                                        const MeshSpec& mesh) {
    StepSolution sol;
    sol.mesh = mesh;
    sol.times = mesh.points();
    const std::vector<double>& t = sol.times;
    const int N = mesh.steps;

    sol.values.assign(N + 1, 1.0);
    if (lambda == 0.0) return sol;

    auto K1 = detail::make_cumulative_evaluator(sym, t[1] - t[0], t[N]);

    std::vector<double> K1v(N + 1), W(N);
    for (int n = 1; n <= N; ++n) {
        // K1 at the offsets t_n - t_j; the j = n entry is K1(0) = 0.
        for (int j = 0; j < n; ++j) K1v[j] = K1(t[n] - t[j]);
        K1v[n] = 0.0;
        for (int j = 0; j < n; ++j)
            W[j] = (K1v[j] - K1v[j + 1]) / (t[j + 1] - t[j]);

        double a = W[n - 1]; // coefficient of u_n
        double rhs = a * sol.values[n - 1];
        for (int j = 0; j < n - 1; ++j)
            rhs -= (sol.values[j + 1] - sol.values[j]) * W[j];
        double denom = a - lambda;
        if (!(denom > 0.0))
            throw convergence_error(
                "solve_growth_direct: implicit coefficient not positive; the "
                "mesh is too coarse for this lambda");
        sol.values[n] = rhs / denom;
        if (n == N) sol.weights_cache.assign(W.begin(), W.begin() + n);
    }
    return sol;
}

} // namespace gfc
