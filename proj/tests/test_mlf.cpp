#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gfc/mlf.hpp"
#include "oracles.hpp"

using doctest::Approx;
using gfc::MLParams;

TEST_CASE("closed-form dispatches") {
    MLParams one{1.0};
    CHECK(gfc::mittag_leffler(one, 1.0) == Approx(gfc::euler_e).epsilon(1e-15));
    CHECK(gfc::mittag_leffler(one, -2.5) == Approx(std::exp(-2.5)).epsilon(1e-15));

    MLParams half{0.5};
    CHECK(gfc::mittag_leffler(half, 0.0) == 1.0);
    CHECK(gfc::mittag_leffler(half, 1.0) ==
          Approx(5.0089800807622833).epsilon(1e-13));
    CHECK(gfc::mittag_leffler(half, 1.0) ==
          Approx(oracle::ml_half(1.0)).epsilon(1e-13));
    CHECK(gfc::mittag_leffler(half, -1.0) ==
          Approx(0.42758357615580722).epsilon(1e-13));
    CHECK(gfc::mittag_leffler(half, -10.0) ==
          Approx(0.056140992743822546).epsilon(1e-12));

    MLParams a03{0.3};
    CHECK(gfc::mittag_leffler(a03, 0.0) == 1.0);
}

TEST_CASE("half-order closed form vs the Taylor series on [-3, 3]") {
    for (double z = -3.0; z <= 3.0; z += 0.25) {
        double series = gfc::mlf_series(0.5, z);
        double closed = gfc::mlf_half(z);
        CHECK(closed == Approx(series).epsilon(1e-12));
    }
}

TEST_CASE("series and asymptotic regimes overlap to 1e-9") {
    // For alpha = 0.7 the algebraic correction series hits its optimal
    // truncation plateau near 1e-8 below z = 5; the checked evaluator reports
    // that as precision loss (next test), and the dispatch cutoff keeps the
    // asymptotic route out of that region.
    for (double alpha : {0.3, 0.5}) {
        for (double z : {4.0, 4.5, 5.0, 5.5, 6.0}) {
            double s = gfc::mlf_series(alpha, z);
            double a = gfc::mlf_asymptotic(alpha, z, 10);
            CHECK(a == Approx(s).epsilon(1e-9));
        }
    }
    for (double z : {5.0, 5.5, 6.0}) {
        double s = gfc::mlf_series(0.7, z);
        double a = gfc::mlf_asymptotic(0.7, z, 10);
        CHECK(a == Approx(s).epsilon(1e-9));
    }
}

TEST_CASE("precision loss is reported where the regimes disagree") {
    MLParams p{0.7};
    auto bad = gfc::mittag_leffler_checked(p, 4.2);
    CHECK(bad.precision_loss);
    auto good = gfc::mittag_leffler_checked(p, 5.9);
    CHECK_FALSE(good.precision_loss);
}

TEST_CASE("negative-axis asymptotics against the closed form") {
    for (double z : {-6.0, -8.0, -12.0, -20.0}) {
        double a = gfc::mlf_asymptotic(0.5, z, 10);
        CHECK(a == Approx(oracle::ml_half(z)).epsilon(2e-4));
    }
}

TEST_CASE("monotone increasing on the positive axis") {
    for (double alpha : {0.3, 0.5, 0.7, 1.0}) {
        MLParams p{alpha};
        // stay below the double overflow point z^(1/alpha) ~ 700
        double z_max = std::min(12.0, 0.9 * std::pow(700.0, alpha));
        double prev = gfc::mittag_leffler(p, 0.0);
        for (double z = 0.25; z <= z_max; z += 0.25) {
            double v = gfc::mittag_leffler(p, z);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("exponential amplitude: alpha E(z) e^{-z^{1/alpha}} -> 1") {
    for (double alpha : {0.3, 0.5, 0.7}) {
        MLParams p{alpha};
        double z = std::pow(50.0, alpha);
        double v = gfc::mittag_leffler(p, z);
        CHECK(v * alpha * std::exp(-50.0) == Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("checked evaluation flags nothing in clean overlap") {
    MLParams p{0.4};
    auto out = gfc::mittag_leffler_checked(p, 4.7);
    CHECK_FALSE(out.precision_loss);
    CHECK(out.value == Approx(out.series_value).epsilon(1e-9));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(gfc::mittag_leffler(MLParams{1.5}, 1.0), gfc::domain_error);
    CHECK_THROWS_AS(gfc::mittag_leffler(MLParams{0.0}, 1.0), gfc::domain_error);
    CHECK_THROWS_AS(gfc::mittag_leffler(MLParams{-0.5}, 1.0), gfc::domain_error);
}
