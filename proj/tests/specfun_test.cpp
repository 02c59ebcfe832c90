#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "otwr/quadrature.hpp"
#include "otwr/specfun.hpp"

using namespace otwr::specfun;

namespace {
double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}
}  // namespace

TEST_CASE("bessel_j0 against series oracle and root") {
    CHECK(bessel_j0(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // series oracle evaluated in long double
    CHECK(rel_err(bessel_j0(1.0), oracles::j0_series(1.0)) < 1e-12);
    CHECK(bessel_j0(1.0) == doctest::Approx(0.7651976866).epsilon(1e-9));
    CHECK(rel_err(bessel_j0(0.6283185307179586), oracles::j0_series(0.6283185307179586)) < 1e-12);
    CHECK(bessel_j0(0.6283185307179586) == doctest::Approx(0.9037126420924663).epsilon(1e-12));
    for (double x : {0.3, 2.0, 5.5, 8.0, 11.5})
        CHECK(std::abs(bessel_j0(x) - oracles::j0_series(x)) < 1e-12);
    // root located independently by bisection
    const double root = oracles::j0_first_root();
    CHECK(root == doctest::Approx(2.404825558).epsilon(1e-9));
    CHECK(std::abs(bessel_j0(root)) < 1e-9);
    CHECK(std::abs(bessel_j0(2.404825558)) < 1e-9);
    // even function, bounded by 1
    for (double x : {0.1, 1.7, 13.0, 29.0, 50.0}) {
        CHECK(bessel_j0(-x) == bessel_j0(x));
        CHECK(std::abs(bessel_j0(x)) <= 1.0);
    }
    CHECK_THROWS_AS(bessel_j0(std::nan("")), std::invalid_argument);
}

TEST_CASE("bessel_i0 series and asymptotic regimes") {
    CHECK(bessel_i0(0.0) == 1.0);
    CHECK(rel_err(bessel_i0(1.0), 1.2660658778) < 1e-10);
    CHECK(rel_err(bessel_i0(1.0), oracles::i0_series(1.0)) < 1e-13);
    for (double x : {0.2, 3.0, 9.0, 19.0, 25.0, 60.0})
        CHECK(rel_err(bessel_i0_scaled(x) * std::exp(x), bessel_i0(x)) < 1e-13);
    // large argument: finite, matches the asymptotic oracle
    const double v30 = bessel_i0(30.0);
    CHECK(std::isfinite(v30));
    CHECK(rel_err(v30, std::exp(30.0) * oracles::i0_scaled_asymptotic(30.0)) < 1e-10);
    // scaled form stays finite far beyond the e^x overflow point
    CHECK(std::isfinite(bessel_i0_scaled(5000.0)));
    CHECK(bessel_i0_scaled(5000.0) > 0.0);
    // strictly increasing
    double prev = 1.0;
    for (double x = 0.5; x < 25.0; x += 0.5) {
        CHECK(bessel_i0(x) > prev);
        prev = bessel_i0(x);
    }
    CHECK_THROWS_AS(bessel_i0(-0.1), std::invalid_argument);
}

TEST_CASE("bessel_k1 against the integral-representation oracle") {
    CHECK(rel_err(bessel_k1(1.0), 0.6019072302) < 1e-10);
    CHECK(rel_err(bessel_k1(10.0), 1.8648773454e-5) < 1e-10);
    // x K1(x) -> 1 as x -> 0
    CHECK(std::abs(1e-6 * bessel_k1(1e-6) - 1.0) < 1e-5);
    // oracle comparison across both branches and the seam
    for (double x : {1e-6, 1e-3, 0.05, 0.5, 1.0, 1.9, 2.0, 2.1, 3.0, 7.0, 10.0, 25.0, 80.0})
        CHECK(rel_err(bessel_k1(x), oracles::k1_integral(x)) < 1e-12);
    // deep tail via the scaled form (unscaled underflows around x ~ 745)
    for (double x : {200.0, 700.0})
        CHECK(rel_err(bessel_k1_scaled(x), std::exp(x) * oracles::k1_integral(x)) < 1e-12);
    // strictly decreasing
    double prev = bessel_k1(1e-8);
    for (double x = 0.1; x < 30.0; x += 0.37) {
        CHECK(bessel_k1(x) < prev);
        prev = bessel_k1(x);
    }
    CHECK_THROWS_AS(bessel_k1(0.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_k1(-1.0), std::invalid_argument);
}

TEST_CASE("xk1_scaled value, bounds, seam, and m1 variant") {
    CHECK(xk1_scaled(0.0) == 1.0);
    CHECK(xk1_scaled_m1(0.0) == 0.0);
    // composition with the K1 oracle
    const double z = 0.21;
    const double want = 2.0 * std::sqrt(z) * oracles::k1_integral(2.0 * std::sqrt(z));
    CHECK(rel_err(xk1_scaled(z), want) < 1e-12);
    // tiny z: 1 - O(1e-11), strictly below 1
    CHECK(xk1_scaled(1e-12) < 1.0);
    CHECK(1.0 - xk1_scaled(1e-12) < 1e-10);
    CHECK(1.0 - xk1_scaled(1e-12) > 0.0);
    // m1 variant keeps relative accuracy of the difference at small z
    for (double zz : {1e-12, 1e-8, 1e-5, 1e-3, 5e-3}) {
        const double direct = 2.0 * std::sqrt(zz) * oracles::k1_integral(2.0 * std::sqrt(zz));
        CHECK(std::abs(xk1_scaled_m1(zz) - (direct - 1.0)) <
              1e-10 * std::abs(direct - 1.0) + 1e-16);
    }
    // branch seam at z = 1e-4
    const double below = xk1_scaled(1e-4 * (1.0 - 1e-9));
    const double above = xk1_scaled(1e-4 * (1.0 + 1e-9));
    CHECK(std::abs(below - above) < 1e-11);
    // bounds and monotone decrease
    double prev = 1.0;
    for (double expo = -6.0; expo < 4.0; expo += 0.25) {
        const double v = xk1_scaled(std::pow(10.0, expo));
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(xk1_scaled(-1e-9), std::invalid_argument);
}

TEST_CASE("gamma_fn exact points and lgamma cross-check") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-13));
    CHECK(gamma_fn(1.5) == doctest::Approx(0.5 * std::sqrt(3.14159265358979323846)).epsilon(1e-13));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
    for (double x : {0.1, 0.7, 2.3, 9.5, 20.0, 50.0})
        CHECK(rel_err(gamma_fn(x), std::exp(std::lgamma(x))) < 1e-13);
    // recurrence
    for (double x : {0.3, 1.1, 6.6})
        CHECK(rel_err(gamma_fn(x + 1.0), x * gamma_fn(x)) < 1e-13);
    CHECK_THROWS_AS(gamma_fn(0.0), std::invalid_argument);
}

TEST_CASE("lgamma_complex against real lgamma and conjugate symmetry") {
    for (double x : {0.25, 0.75, 2.0, 8.0}) {
        const auto v = lgamma_complex({x, 0.0});
        CHECK(std::abs(v.real() - std::lgamma(x)) < 1e-12 * std::max(1.0, std::abs(std::lgamma(x))));
        CHECK(std::abs(v.imag()) < 1e-12);
    }
    for (double t : {0.5, 5.0, 25.0, 55.0}) {
        const auto a = lgamma_complex({0.25, t});
        const auto b = lgamma_complex({0.25, -t});
        CHECK(std::abs(a.real() - b.real()) < 1e-11 * std::max(1.0, std::abs(a.real())));
        CHECK(std::abs(a.imag() + b.imag()) < 1e-11 * std::max(1.0, std::abs(a.imag())));
    }
    // |Gamma(1 + it)|^2 = pi t / sinh(pi t)
    const double t = 2.0;
    const double got = 2.0 * lgamma_complex({1.0, t}).real();
    const double want = std::log(3.14159265358979323846 * t / std::sinh(3.14159265358979323846 * t));
    CHECK(std::abs(got - want) < 1e-12);
}

TEST_CASE("q_function against the erfc series oracle") {
    CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q_function(40.0) > 0.0);
    CHECK(q_function(40.0) < 1e-300);
    CHECK(std::abs(q_function(1.959964) - 0.025) < 1e-7);
    for (double x : {-3.0, -1.0, 0.5, 1.959964, 2.8})
        CHECK(rel_err(q_function(x), 0.5 * oracles::erfc_series(x / std::sqrt(2.0))) < 1e-12);
    CHECK_THROWS_AS(q_function(std::nan("")), std::invalid_argument);
}

TEST_CASE("meijer_g2112 equivalence with the Laplace quadrature oracle") {
    // theta^{-c2-1} G(theta/p | 1; c2+2, c2+1) equals
    // int_0^inf x^{c2} e^{-p x} g(theta x) dx with g = xk1_scaled.
    auto oracle = [](double theta, double p, double c2) {
        QuadratureSpec spec;
        spec.rel_tol = 1e-12;
        spec.sqrt_singularity = c2 < 0.0;
        return integrate_semi_infinite(
            [&](double x) {
                if (x <= 0.0) return 0.0;
                return std::pow(x, c2) * std::exp(-p * x) * xk1_scaled(theta * x);
            },
            spec);
    };
    for (double c2 : {0.0, -0.5}) {
        for (double z : {0.5, 1e-2, 3.0, 40.0}) {
            const double p = 1.0, theta = z * p;
            const double closed = std::pow(theta, -c2 - 1.0) * meijer_g2112(z, c2);
            const double quad = oracle(theta, p, c2);
            CHECK(rel_err(closed, quad) < 1e-8);
        }
    }
    // shift identity G(z | 1; 2, 1) = z G(z | 0; 1, 0)
    for (double z : {0.3, 3.0, 30.0}) {
        const double lhs = meijer_g2112_general(z, 1.0, 2.0, 1.0);
        const double rhs = z * meijer_g2112_general(z, 0.0, 1.0, 0.0);
        CHECK(rel_err(lhs, rhs) < 1e-10);
    }
    CHECK_THROWS_AS(meijer_g2112(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(meijer_g2112(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(meijer_g2112(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("meijer_g2112 and quadrature agree over the log grid") {
    // the decisive cross-validation: z in [1e-4, 1e3], c2 in {0, -1/2}
    QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    for (double c2 : {0.0, -0.5}) {
        for (double ze = -4.0; ze <= 3.01; ze += 0.5) {
            const double z = std::pow(10.0, ze);
            spec.sqrt_singularity = c2 < 0.0;
            const double quad = integrate_semi_infinite(
                [&](double x) {
                    if (x <= 0.0) return 0.0;
                    return std::pow(x, c2) * std::exp(-x) * xk1_scaled(z * x);
                },
                spec);
            const double closed = std::pow(z, -c2 - 1.0) * meijer_g2112(z, c2);
            CHECK(rel_err(closed, quad) < 1e-8);
        }
    }
}

TEST_CASE("integrate_adaptive basics") {
    QuadratureSpec spec;
    CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846,
                             spec) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate_adaptive([](double) { return 1.0; }, 2.0, 5.0, spec) ==
          doctest::Approx(3.0).epsilon(1e-14));
    CHECK_THROWS_AS(integrate_adaptive([](double) { return 0.0; }, 1.0, 0.0, spec),
                    std::invalid_argument);
}

TEST_CASE("integrate_semi_infinite tolerances, singularity, transforms") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    CHECK(std::abs(integrate_semi_infinite([](double x) { return std::exp(-x); }, spec) - 1.0) <
          1e-12);
    // slow and fast decay under both tail handlers
    for (auto transform : {TailTransform::ExpTail, TailTransform::None}) {
        QuadratureSpec s2 = spec;
        s2.transform = transform;
        for (double c : {0.01, 1.0, 100.0}) {
            const double got =
                integrate_semi_infinite([c](double x) { return c * std::exp(-c * x); }, s2);
            CHECK(std::abs(got - 1.0) < 1e-10);
        }
    }
    // x^{-1/2} e^{-x} -> Gamma(1/2) = sqrt(pi)
    QuadratureSpec sing = spec;
    sing.sqrt_singularity = true;
    sing.rel_tol = 1e-11;
    const double got = integrate_semi_infinite(
        [](double x) { return x > 0.0 ? std::exp(-x) / std::sqrt(x) : 0.0; }, sing);
    CHECK(std::abs(got - std::sqrt(3.14159265358979323846)) < 1e-10);
    // e^{-x} g(x): finite positive
    const double gx = integrate_semi_infinite(
        [](double x) { return std::exp(-x) * xk1_scaled(x); }, spec);
    CHECK(gx > 0.0);
    CHECK(gx < 1.0);
    // non-convergence is reported, not silently returned
    QuadratureSpec tight;
    tight.rel_tol = 1e-15;
    tight.abs_tol = 1e-300;
    tight.max_subdivisions = 3;
    CHECK_THROWS_AS(integrate_semi_infinite(
                        [](double x) { return std::exp(-x) * std::cos(37.0 * x * x); }, tight),
                    NonConvergence);
}
