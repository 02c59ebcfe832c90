#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "otwr/order_stats.hpp"
#include "otwr/quadrature.hpp"

using namespace otwr::order_stats;
namespace sf = otwr::specfun;

TEST_CASE("coefficient table R=1 unit means: hand-evaluated constants") {
    const auto t = build_coefficient_table(1.0, 1.0, 1);
    CHECK(t.chi[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(t.binom[0] == 1);
    // q = 1: kappa1 = 1, kappa2 = 0, alpha = (1, -1, 0), beta = (0, 1, 2)
    CHECK(t.kappa(1, 1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.kappa(1, 2, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(t.alpha(1, 1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.alpha(1, 2, 0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(t.alpha(1, 3, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(t.beta(1, 1, 0) == 0.0);
    CHECK(t.beta(1, 2, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.beta(1, 3, 0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("coefficient table R=2 unit means: symbolic spot values") {
    const auto t = build_coefficient_table(1.0, 1.0, 2);
    CHECK(t.chi[0] == doctest::Approx(2.0));
    CHECK(t.chi[1] == doctest::Approx(4.0));
    CHECK(t.kappa(1, 1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(t.kappa(1, 2, 1) == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
    CHECK(t.binom[0] == 1);
    CHECK(t.binom[1] == 1);
}

TEST_CASE("normalization identities hold for any valid table") {
    for (int r : {1, 2, 3, 5, 8}) {
        for (auto [s1, s2] : {std::pair{1.0, 1.0}, std::pair{8.0, 0.3}, std::pair{0.04, 11.4}}) {
            const auto t = build_coefficient_table(s1, s2, r);
            for (int q : {1, 2}) {
                // PDF integrates to 1: R sum_i binom (-1)^{i+1} (a2 + a3) = 1
                long double norm = 0.0L;
                double sign = -1.0;
                for (int i = 0; i < r; ++i) {
                    norm += sign * (long double)t.binom[i] * (t.alpha(q, 2, i) + t.alpha(q, 3, i));
                    // CDF at the origin: per-i alpha sum vanishes
                    CHECK(std::abs(t.alpha(q, 1, i) + t.alpha(q, 2, i) + t.alpha(q, 3, i)) <
                          1e-12);
                    sign = -sign;
                }
                CHECK(std::abs((double)(r * norm) - 1.0) < 1e-12);
            }
        }
    }
}

TEST_CASE("table construction rejects bad input") {
    CHECK_THROWS_AS(build_coefficient_table(0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_coefficient_table(1.0, -2.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_coefficient_table(1.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_coefficient_table(1.0, 1.0, 65), std::invalid_argument);
    CHECK_NOTHROW(build_coefficient_table(1.0, 1.0, 64));
}

TEST_CASE("outdated CDF: exponential reduction, bounds, monotonicity") {
    const auto t1 = build_coefficient_table(1.0, 1.0, 1);
    CHECK(cdf_outdated_eq(1, std::log(2.0), t1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cdf_outdated_eq(1, 0.0, t1) == 0.0);
    CHECK(pdf_outdated_eq(1, 0.0, t1) == doctest::Approx(1.0).epsilon(1e-14));

    const auto t = build_coefficient_table(2.0, 1.0, 3);
    for (int q : {1, 2}) {
        double prev = -1.0;
        for (double phi = 0.0; phi < 30.0; phi += 0.25) {
            const double f = cdf_outdated_eq(q, phi, t);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
            CHECK(f >= prev);
            prev = f;
        }
        CHECK(cdf_outdated_eq(q, 1e6, t) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(cdf_outdated_eq(1, -0.5, t), std::invalid_argument);
    CHECK_THROWS_AS(cdf_outdated_eq(3, 0.5, t), std::invalid_argument);
}

TEST_CASE("outdated PDF integrates to 1 and matches the CDF derivative") {
    const auto t = build_coefficient_table(1.0, 1.0, 2);
    sf::QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    const double total =
        sf::integrate_semi_infinite([&](double x) { return pdf_outdated_eq(1, x, t); }, spec);
    CHECK(std::abs(total - 1.0) < 1e-10);
    // centered finite difference of the CDF
    const double got = pdf_outdated_eq(1, 0.5, t);
    const double fd = oracles::central_diff(
        [&](double x) { return cdf_outdated_eq(1, x, t); }, 0.5, 1e-6);
    CHECK(std::abs(got - fd) < 1e-6);
}

TEST_CASE("mean of the outdated equivalent gain") {
    const auto t1 = build_coefficient_table(1.0, 1.0, 1);
    CHECK(mean_outdated_eq(1, t1) == doctest::Approx(1.0).epsilon(1e-14));

    // R = 2, unit means: selection splits into max of two Exp(2) minima plus
    // an independent Exp(1) excess with probability 1/2:
    //   E = E[max(L1, L2)] + E[excess]/2 = 3/4 + 1/2 = 1.25
    const auto t2 = build_coefficient_table(1.0, 1.0, 2);
    CHECK(mean_outdated_eq(1, t2) == doctest::Approx(1.25).epsilon(1e-13));
    CHECK(mean_outdated_eq(1, t2) > 1.0);   // selection bias
    CHECK(mean_outdated_eq(1, t2) < 1.5);   // below the mean of max of two

    // consistency with quadrature of x pdf(x)
    const auto t = build_coefficient_table(3.0, 0.7, 4);
    sf::QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    for (int q : {1, 2}) {
        const double byquad = sf::integrate_semi_infinite(
            [&](double x) { return x * pdf_outdated_eq(q, x, t); }, spec);
        CHECK(mean_outdated_eq(q, t) == doctest::Approx(byquad).epsilon(1e-9));
    }
}

TEST_CASE("joint pdf: separability at rho=0, normalization, marginalization") {
    const auto t = build_coefficient_table(1.3, 0.8, 2);

    // rho = 0: product of outdated pdf and plain exponential
    for (auto [y, x] : {std::pair{0.4, 1.1}, std::pair{2.0, 0.3}}) {
        const double want =
            pdf_outdated_eq(1, y, t) * std::exp(-x / t.sigma1) / t.sigma1;
        CHECK(joint_pdf_eq(1, y, x, t, 0.0) == doctest::Approx(want).epsilon(1e-12));
    }

    // double integral over the quadrant is 1
    sf::QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    const double rho = 0.7;
    const double total = sf::integrate_semi_infinite(
        [&](double y) {
            return sf::integrate_semi_infinite(
                [&](double x) { return joint_pdf_eq(1, y, x, t, rho); }, spec);
        },
        spec);
    CHECK(std::abs(total - 1.0) < 1e-8);

    // marginal over the outdated coordinate reproduces pdf_current_eq
    for (double x : {0.2, 1.0, 3.0}) {
        const double marg = sf::integrate_semi_infinite(
            [&](double y) { return joint_pdf_eq(1, y, x, t, rho); }, spec);
        CHECK(std::abs(marg - pdf_current_eq(1, x, t, rho)) < 1e-8);
    }

    CHECK_THROWS_AS(joint_pdf_eq(1, 0.1, 0.1, t, 1.0), std::invalid_argument);
}

TEST_CASE("current-gain laws: independence and perfect-correlation limits") {
    for (int r : {1, 2, 4}) {
        const auto t = build_coefficient_table(2.0, 0.5, r);
        for (int q : {1, 2}) {
            for (double x : {0.05, 0.5, 2.0, 10.0}) {
                // rho = 0: plain exponential regardless of R
                CHECK(std::abs(cdf_current_eq(q, x, t, 0.0) -
                               (-std::expm1(-x / t.sigma(q)))) < 1e-12);
                // rho = 1: collapses onto the outdated law
                CHECK(std::abs(cdf_current_eq(q, x, t, 1.0) - cdf_outdated_eq(q, x, t)) <
                      1e-12);
            }
            // CDF valid and consistent with the PDF by quadrature
            double prev = -1.0;
            for (double x = 0.0; x < 20.0; x += 0.5) {
                const double f = cdf_current_eq(q, x, t, 0.85);
                CHECK(f >= 0.0);
                CHECK(f <= 1.0);
                CHECK(f >= prev);
                prev = f;
            }
            sf::QuadratureSpec spec;
            spec.rel_tol = 1e-11;
            const double mass = sf::integrate_semi_infinite(
                [&](double x) { return pdf_current_eq(q, x, t, 0.85); }, spec);
            CHECK(std::abs(mass - 1.0) < 1e-9);
            const double upto = sf::integrate_adaptive(
                [&](double x) { return pdf_current_eq(q, x, t, 0.85); }, 0.0, 1.7, spec);
            CHECK(std::abs(upto - cdf_current_eq(q, 1.7, t, 0.85)) < 1e-9);
        }
    }
}

TEST_CASE("hop-swap symmetry") {
    const auto a = build_coefficient_table(3.1, 0.6, 3);
    const auto b = build_coefficient_table(0.6, 3.1, 3);
    for (double x : {0.1, 0.9, 4.2}) {
        CHECK(cdf_outdated_eq(1, x, a) == doctest::Approx(cdf_outdated_eq(2, x, b)).epsilon(1e-14));
        CHECK(cdf_current_eq(1, x, a, 0.8) ==
              doctest::Approx(cdf_current_eq(2, x, b, 0.8)).epsilon(1e-14));
        CHECK(pdf_current_eq(1, x, a, 0.3) ==
              doctest::Approx(pdf_current_eq(2, x, b, 0.3)).epsilon(1e-14));
    }
    CHECK(mean_outdated_eq(1, a) == doctest::Approx(mean_outdated_eq(2, b)).epsilon(1e-14));
    const auto ts_a = build_term_set(a, 0.5, 0.9);
    const auto ts_b = build_term_set(b, 0.9, 0.5);
    CHECK(ts_a.weight_sum() == doctest::Approx(ts_b.weight_sum()).epsilon(1e-13));
}

TEST_CASE("term set: weights, rates, degenerate limits") {
    // R = 1, unit means, perfect correlation: one surviving term
    const auto t1 = build_coefficient_table(1.0, 1.0, 1);
    const auto ts1 = build_term_set(t1, 1.0, 1.0);
    REQUIRE(ts1.terms.size() == 4);
    int nonzero = 0;
    for (const auto& term : ts1.terms) {
        if (term.weight != 0.0) {
            ++nonzero;
            CHECK(term.weight == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(term.rate1 == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(term.rate2 == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    CHECK(nonzero == 1);

    for (int r : {1, 2, 3, 5}) {
        const auto t = build_coefficient_table(1.9, 0.4, r);
        for (double rho1 : {0.0, 0.5, 1.0})
            for (double rho2 : {0.0, 0.9}) {
                const auto ts = build_term_set(t, rho1, rho2);
                CHECK(ts.terms.size() == std::size_t(4 * r * r));
                CHECK(std::abs(ts.weight_sum() - 1.0) < 1e-10);
                for (const auto& term : ts.terms) {
                    CHECK(term.rate1 > 0.0);
                    CHECK(term.rate2 > 0.0);
                    CHECK(std::isfinite(term.rate1));
                    CHECK(std::isfinite(term.rate2));
                    if (rho1 == 0.0)
                        CHECK(term.rate1 == doctest::Approx(1.0 / 1.9).epsilon(1e-14));
                    if (rho2 == 0.0)
                        CHECK(term.rate2 == doctest::Approx(1.0 / 0.4).epsilon(1e-14));
                }
            }
    }
    CHECK_THROWS_AS(build_term_set(t1, -0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_term_set(t1, 0.5, 1.1), std::invalid_argument);
}

TEST_CASE("injected fault is caught by the weight-sum invariant") {
    auto t = build_coefficient_table(1.0, 2.0, 3);
    t.alpha_[0][1][1] = -t.alpha_[0][1][1];  // flip one alpha sign
    const auto ts = build_term_set(t, 0.5, 0.5);
    CHECK(std::abs(ts.weight_sum() - 1.0) > 1e-6);
}
