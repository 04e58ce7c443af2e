#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gfc/invert.hpp"
#include "gfc/mlf.hpp"
#include "oracles.hpp"

using doctest::Approx;
using gfc::ContourSpec;
using gfc::GrowthMode;
using gfc::KernelSymbol;

namespace {

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return g;
}

} // namespace

TEST_CASE("growth solution matches the half-order closed form") {
    auto pl = KernelSymbol::power_law(0.5);
    auto sol = gfc::solve_growth(pl, 1.0, {1.0});
    CHECK(sol.values[0] == Approx(5.0089800807622833).epsilon(1e-10));
    CHECK(sol.p0 == Approx(1.0).epsilon(1e-13));
    CHECK(sol.amplitude == Approx(2.0).epsilon(1e-13));
    CHECK(sol.values[0] == Approx(oracle::ml_half(1.0)).epsilon(1e-10));
}

TEST_CASE("growth solution honors the initial condition as t -> 0") {
    auto pl = KernelSymbol::power_law(0.5);
    auto sol = gfc::solve_growth(pl, 1.0, {1e-14});
    CHECK(sol.values[0] == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("normalized growth at t = 25 sits within 1% of the amplitude") {
    auto pl = KernelSymbol::power_law(0.5);
    auto sol = gfc::solve_growth(pl, 1.0, {25.0});
    CHECK(sol.normalized[0] > 1.99);
    CHECK(sol.normalized[0] < 2.01);
    double expect = std::exp(-25.0) * oracle::ml_half(5.0);
    CHECK(sol.normalized[0] == Approx(expect).epsilon(1e-10));
}

TEST_CASE("values decompose exactly into amplitude term plus remainder") {
    auto pl = KernelSymbol::power_law(0.3);
    auto sol = gfc::solve_growth(pl, 1.0, {0.5, 2.0, 7.0});
    for (size_t i = 0; i < sol.times.size(); ++i) {
        double rebuilt =
            sol.amplitude * std::exp(sol.p0 * sol.times[i]) + sol.remainders[i];
        CHECK(sol.values[i] == Approx(rebuilt).epsilon(1e-15));
    }
}

TEST_CASE("oracle agreement across alpha and lambda") {
    for (double alpha : {0.3, 0.5, 0.7}) {
        auto sym = KernelSymbol::power_law(alpha);
        gfc::MLParams params{alpha};
        for (double lambda : {0.5, 1.0, 2.0}) {
            auto grid = log_spaced(0.1, 10.0, 12);
            auto sol = gfc::solve_growth(sym, lambda, grid);
            for (size_t i = 0; i < grid.size(); ++i) {
                double expect =
                    gfc::mittag_leffler(params, lambda * std::pow(grid[i], alpha));
                INFO("alpha=", alpha, " lambda=", lambda, " t=", grid[i]);
                CHECK(sol.values[i] == Approx(expect).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("residue-split and Bromwich modes agree to 1e-8") {
    for (double alpha : {0.3, 0.5, 0.7}) {
        auto sym = KernelSymbol::power_law(alpha);
        std::vector<double> grid{0.1, 0.5, 1.0, 2.0, 5.0};
        auto a = gfc::solve_growth(sym, 1.0, grid, {}, GrowthMode::residue_split);
        auto b = gfc::solve_growth(sym, 1.0, grid, {}, GrowthMode::bromwich);
        for (size_t i = 0; i < grid.size(); ++i)
            CHECK(a.values[i] == Approx(b.values[i]).epsilon(1e-8));
    }
}

TEST_CASE("clustered trapezoid rule agrees with adaptive Gauss segments") {
    auto pl = KernelSymbol::power_law(0.5);
    ContourSpec trap;
    trap.rule = gfc::ContourRule::trapezoid;
    trap.rel_tol = 1e-10;
    auto a = gfc::solve_growth(pl, 1.0, {1.0}, trap);
    auto b = gfc::solve_growth(pl, 1.0, {1.0});
    CHECK(a.values[0] == Approx(b.values[0]).epsilon(1e-8));
}

TEST_CASE("growth solution is nondecreasing and normalized converges to A") {
    auto pl = KernelSymbol::power_law(0.5);
    auto grid = log_spaced(0.05, 20.0, 24);
    auto sol = gfc::solve_growth(pl, 1.0, grid);
    for (size_t i = 1; i < grid.size(); ++i)
        CHECK(sol.values[i] >= sol.values[i - 1]);
    double devs[3] = {std::abs(sol.normalized[11] - sol.amplitude),
                      std::abs(sol.normalized[17] - sol.amplitude),
                      std::abs(sol.normalized[23] - sol.amplitude)};
    CHECK(devs[1] < devs[0]);
    CHECK(devs[2] < devs[1]);
    CHECK(std::abs(sol.normalized[23] - sol.amplitude) < 0.01 * sol.amplitude);
}

TEST_CASE("remainder ratio decays across decades for built-in kernels") {
    for (const auto& [name, sym] : gfc::builtin_kernels()) {
        INFO(name);
        double r1 = std::abs(gfc::remainder_ratio(sym, 1.0, 1.0));
        double r5 = std::abs(gfc::remainder_ratio(sym, 1.0, 5.0));
        double r25 = std::abs(gfc::remainder_ratio(sym, 1.0, 25.0));
        CHECK(r5 < r1);
        CHECK(r25 < r5);
        CHECK(std::isfinite(gfc::remainder_ratio(sym, 1.0, 0.01)));
    }
}

TEST_CASE("remainder ratio matches the closed form for alpha = 1/2") {
    auto pl = KernelSymbol::power_law(0.5);
    // V(t) = u - 2 e^t = -erfcx(sqrt t), so the ratio is -erfcx(sqrt t) e^{-t}.
    for (double t : {1.0, 5.0}) {
        double expect = -oracle::erfcx(std::sqrt(t)) * std::exp(-t);
        CHECK(gfc::remainder_ratio(pl, 1.0, t) == Approx(expect).epsilon(1e-7));
    }
    // deep in the asymptotic regime the ratio is a 1e-12-scale residual
    double far = gfc::remainder_ratio(pl, 1.0, 25.0);
    CHECK(far == Approx(-oracle::erfcx(5.0) * std::exp(-25.0)).epsilon(1e-4));
    CHECK(std::abs(far) < 0.01 * 2.0);
}

TEST_CASE("relaxation matches the closed form and its asymptote") {
    auto pl = KernelSymbol::power_law(0.5);
    auto u = gfc::solve_relaxation(pl, 1.0, {1e-14, 1.0, 100.0});
    CHECK(u[0] == Approx(1.0).epsilon(1e-6));
    CHECK(u[1] == Approx(0.42758357615580722).epsilon(1e-10));
    CHECK(u[2] == Approx(0.056140992743822546).epsilon(1e-9));
    // leading algebraic decay 1/sqrt(pi t)
    CHECK(u[2] == Approx(1.0 / std::sqrt(gfc::pi * 100.0)).epsilon(0.05));
}

TEST_CASE("relaxation values stay in (0, 1] and decrease") {
    for (const auto& [name, sym] : gfc::builtin_kernels()) {
        INFO(name);
        auto grid = log_spaced(0.01, 10.0, 16);
        auto u = gfc::solve_relaxation(sym, 1.0, grid);
        double prev = 1.0 + 1e-12;
        for (double v : u) {
            CHECK(v > 0.0);
            CHECK(v <= 1.0 + 1e-9);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("relaxation sampled complete monotonicity, orders 1..3") {
    for (const char* name : {"power_law_0.5", "mixture_sqrt_cbrt"}) {
        const KernelSymbol* sym = nullptr;
        for (const auto& nk : gfc::builtin_kernels())
            if (nk.name == name) sym = &nk.symbol;
        REQUIRE(sym != nullptr);
        std::vector<double> xs(200);
        for (int i = 0; i < 200; ++i) xs[i] = 0.01 + (10.0 - 0.01) * i / 199.0;
        auto fs = gfc::solve_relaxation(*sym, 1.0, xs);
        for (int order = 1; order <= 3; ++order) {
            auto dd = oracle::divided_differences(xs, fs, order);
            double sign = (order % 2 == 0) ? 1.0 : -1.0;
            for (double d : dd) CHECK(sign * d >= 0.0);
        }
    }
}

TEST_CASE("inadmissible kernels are refused") {
    auto atom = KernelSymbol::from_measure(gfc::StieltjesMeasure({{1.0, 1.0}}));
    CHECK_THROWS_AS(gfc::solve_growth(atom, 0.4, {1.0}),
                    gfc::admissibility_error);
    CHECK_THROWS_AS(gfc::solve_relaxation(atom, 1.0, {1.0}),
                    gfc::admissibility_error);

    // slowly varying symbol ~ log(1+p): limits aside, its tail integral
    // diverges, which the growth solver must refuse
    std::vector<gfc::StieltjesMeasure::Term> nodes;
    const int n = 480;
    const double dx = std::log(1e12) / n;
    for (int i = 0; i < n; ++i)
        nodes.push_back({std::exp((i + 0.5) * dx), dx});
    auto log_sym = KernelSymbol::from_measure(gfc::StieltjesMeasure({}, nodes));
    CHECK_THROWS_AS(gfc::solve_growth(log_sym, 1.0, {1.0}),
                    gfc::admissibility_error);
}

TEST_CASE("contour spec validation") {
    auto pl = KernelSymbol::power_law(0.5);
    ContourSpec bad_nodes;
    bad_nodes.nodes = 32;
    CHECK_THROWS_AS(gfc::solve_growth(pl, 1.0, {1.0}, bad_nodes),
                    gfc::input_error);
    ContourSpec bad_r;
    bad_r.r = 2.0; // above p0 = 1
    CHECK_THROWS_AS(gfc::solve_growth(pl, 1.0, {1.0}, bad_r), gfc::input_error);
    CHECK_THROWS_AS(gfc::solve_growth(pl, -1.0, {1.0}), gfc::domain_error);
    CHECK_THROWS_AS(gfc::solve_growth(pl, 1.0, {-1.0}), gfc::domain_error);
}

TEST_CASE("log-space reporting for very large exponents") {
    auto pl = KernelSymbol::power_law(0.5);
    auto sol = gfc::solve_growth(pl, 1.0, {900.0});
    CHECK(sol.log_space);
    // u ~ 2 e^t for large t
    CHECK(sol.values[0] == Approx(900.0 + std::log(2.0)).epsilon(1e-12));
    CHECK(sol.normalized[0] == Approx(2.0).epsilon(1e-10));
}
