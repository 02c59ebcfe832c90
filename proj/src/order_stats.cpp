#include "otwr/order_stats.hpp"

#include <cmath>
#include <stdexcept>

#include "otwr/specfun.hpp"

namespace otwr::order_stats {

namespace {

void check_hop(int q) {
    if (q != 1 && q != 2) throw std::invalid_argument("hop index must be 1 or 2");
}

double theta_rate(double beta, double nu_bar, double rho) {
    // beta / (nu_bar beta + rho^2); regular at rho = 1 (nu_bar = 0) and at
    // rho = 0 (reduces to 1/sigma).
    return beta / (nu_bar * beta + rho * rho);
}

}  // namespace

double TermSet::weight_sum() const {
    long double s = 0.0L;
    for (const Term& t : terms) s += t.weight;
    return static_cast<double>(s);
}

CoefficientTable build_coefficient_table(double sigma1, double sigma2, int num_relays) {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0))
        throw std::invalid_argument("build_coefficient_table: hop means must be positive");
    if (num_relays < 1) throw std::invalid_argument("build_coefficient_table: R must be >= 1");
    if (num_relays > 64)
        throw std::invalid_argument(
            "build_coefficient_table: R > 64 rejected (alternating sums lose precision)");

    const int r = num_relays;
    CoefficientTable t;
    t.num_relays = r;
    t.sigma1 = sigma1;
    t.sigma2 = sigma2;
    t.chi.resize(r);
    t.binom.resize(r);
    for (int q = 0; q < 2; ++q) {
        for (int j = 0; j < 3; ++j) t.alpha_[q][j].resize(r);
        for (int j = 0; j < 3; ++j) t.beta_[q][j].resize(r);
        for (int j = 0; j < 2; ++j) t.kappa_[q][j].resize(r);
    }

    const double inv_rate = 1.0 / sigma1 + 1.0 / sigma2;
    std::uint64_t c = 1;  // C(R-1, 0)
    for (int i = 0; i < r; ++i) {
        t.chi[i] = (i + 1) * inv_rate;
        t.binom[i] = c;
        if (i + 1 < r) c = c * (r - 1 - i) / (i + 1);
    }

    for (int q = 1; q <= 2; ++q) {
        const double sa = (q == 1) ? sigma1 : sigma2;  // own hop
        const double sb = (q == 1) ? sigma2 : sigma1;  // other hop
        for (int i = 0; i < r; ++i) {
            const double chi = t.chi[i];
            // chi - 1/sa = i/sa + (i+1)/sb > 0, no singularity
            const double k1 = 1.0 / (sb * (chi - 1.0 / sa));
            const double k2 = 1.0 / (sa * sb * (chi - 1.0 / sa) * chi) - 1.0 / (sa * chi);
            t.kappa_[q - 1][0][i] = k1;
            t.kappa_[q - 1][1][i] = k2;
            t.alpha_[q - 1][0][i] = k1 - k2;
            t.alpha_[q - 1][1][i] = -k1;
            t.alpha_[q - 1][2][i] = k2;
            t.beta_[q - 1][0][i] = 0.0;
            t.beta_[q - 1][1][i] = 1.0 / sa;
            t.beta_[q - 1][2][i] = chi;
        }
    }
    return t;
}

double cdf_outdated_eq(int q, double phi, const CoefficientTable& t) {
    check_hop(q);
    if (!(phi >= 0.0)) throw std::invalid_argument("cdf_outdated_eq: requires phi >= 0");
    // Per index i the three alphas sum to zero, so the j = 1 (constant) term
    // can be folded into expm1 form, which is exact near phi = 0.
    long double acc = 0.0L;
    double sign = 1.0;
    for (int i = 0; i < t.num_relays; ++i) {
        const long double inner =
            (long double)t.alpha(q, 2, i) * std::expm1(-t.beta(q, 2, i) * phi) +
            (long double)t.alpha(q, 3, i) * std::expm1(-t.beta(q, 3, i) * phi);
        acc += sign * (long double)t.binom[i] * inner;
        sign = -sign;
    }
    const double v = static_cast<double>(t.num_relays * acc);
    return std::min(1.0, std::max(0.0, v));
}

double pdf_outdated_eq(int q, double phi, const CoefficientTable& t) {
    check_hop(q);
    if (!(phi >= 0.0)) throw std::invalid_argument("pdf_outdated_eq: requires phi >= 0");
    long double acc = 0.0L;
    double sign = -1.0;  // (-1)^{i+1}
    for (int i = 0; i < t.num_relays; ++i) {
        long double inner = 0.0L;
        for (int j = 2; j <= 3; ++j) {
            const double a = t.alpha(q, j, i);
            const double b = t.beta(q, j, i);
            inner += (long double)a * b * std::exp(-b * phi);
        }
        acc += sign * (long double)t.binom[i] * inner;
        sign = -sign;
    }
    const double v = static_cast<double>(t.num_relays * acc);
    return std::max(0.0, v);
}

double mean_outdated_eq(int q, const CoefficientTable& t) {
    check_hop(q);
    long double acc = 0.0L;
    double sign = -1.0;  // (-1)^{i+1}
    for (int i = 0; i < t.num_relays; ++i) {
        long double inner = 0.0L;
        for (int j = 2; j <= 3; ++j)
            inner += (long double)t.alpha(q, j, i) / t.beta(q, j, i);
        acc += sign * (long double)t.binom[i] * inner;
        sign = -sign;
    }
    return static_cast<double>(t.num_relays * acc);
}

double joint_pdf_eq(int q, double y, double x, const CoefficientTable& t, double rho_q) {
    check_hop(q);
    if (!(x >= 0.0) || !(y >= 0.0)) throw std::invalid_argument("joint_pdf_eq: gains must be >= 0");
    if (!(rho_q >= 0.0 && rho_q < 1.0))
        throw std::invalid_argument("joint_pdf_eq: requires 0 <= rho < 1 (density degenerates at 1)");
    const double sigma = t.sigma(q);
    const double nu = 1.0 / ((1.0 - rho_q * rho_q) * sigma);
    const double bessel_arg = 2.0 * rho_q * nu * std::sqrt(x * y);
    // exp(arg) underflow/overflow is avoided by folding the scaled Bessel
    // value into the exponent.
    const double i0e = specfun::bessel_i0_scaled(bessel_arg);
    long double acc = 0.0L;
    double sign = -1.0;
    for (int i = 0; i < t.num_relays; ++i) {
        long double inner = 0.0L;
        for (int j = 2; j <= 3; ++j) {
            const double a = t.alpha(q, j, i);
            const double b = t.beta(q, j, i);
            const double expo = bessel_arg - nu * x - (b + rho_q * rho_q * nu) * y;
            inner += (long double)a * b * std::exp(expo);
        }
        acc += sign * (long double)t.binom[i] * inner;
        sign = -sign;
    }
    const double v = static_cast<double>(t.num_relays * nu * i0e * acc);
    return std::max(0.0, v);
}

double pdf_current_eq(int q, double x, const CoefficientTable& t, double rho_q) {
    check_hop(q);
    if (!(x >= 0.0)) throw std::invalid_argument("pdf_current_eq: requires x >= 0");
    if (!(rho_q >= 0.0 && rho_q <= 1.0))
        throw std::invalid_argument("pdf_current_eq: requires rho in [0, 1]");
    const double nu_bar = (1.0 - rho_q * rho_q) * t.sigma(q);
    long double acc = 0.0L;
    double sign = -1.0;
    for (int i = 0; i < t.num_relays; ++i) {
        long double inner = 0.0L;
        for (int j = 2; j <= 3; ++j) {
            const double th = theta_rate(t.beta(q, j, i), nu_bar, rho_q);
            inner += (long double)t.alpha(q, j, i) * th * std::exp(-th * x);
        }
        acc += sign * (long double)t.binom[i] * inner;
        sign = -sign;
    }
    const double v = static_cast<double>(t.num_relays * acc);
    return std::max(0.0, v);
}

double cdf_current_eq(int q, double x, const CoefficientTable& t, double rho_q) {
    check_hop(q);
    if (!(x >= 0.0)) throw std::invalid_argument("cdf_current_eq: requires x >= 0");
    if (!(rho_q >= 0.0 && rho_q <= 1.0))
        throw std::invalid_argument("cdf_current_eq: requires rho in [0, 1]");
    const double nu_bar = (1.0 - rho_q * rho_q) * t.sigma(q);
    long double acc = 0.0L;
    double sign = -1.0;
    for (int i = 0; i < t.num_relays; ++i) {
        long double inner = 0.0L;
        for (int j = 2; j <= 3; ++j) {
            const double th = theta_rate(t.beta(q, j, i), nu_bar, rho_q);
            inner += (long double)t.alpha(q, j, i) * (-std::expm1(-th * x));
        }
        acc += sign * (long double)t.binom[i] * inner;
        sign = -sign;
    }
    const double v = static_cast<double>(t.num_relays * acc);
    return std::min(1.0, std::max(0.0, v));
}

TermSet build_term_set(const CoefficientTable& t, double rho1, double rho2) {
    if (!(rho1 >= 0.0 && rho1 <= 1.0) || !(rho2 >= 0.0 && rho2 <= 1.0))
        throw std::invalid_argument("build_term_set: correlations must be in [0, 1]");
    const int r = t.num_relays;
    const double nu_bar1 = (1.0 - rho1 * rho1) * t.sigma1;
    const double nu_bar2 = (1.0 - rho2 * rho2) * t.sigma2;
    TermSet ts;
    ts.terms.reserve(4 * r * r);
    const double r2 = double(r) * double(r);
    for (int i1 = 0; i1 < r; ++i1) {
        for (int j1 = 2; j1 <= 3; ++j1) {
            const double w1 = double(t.binom[i1]) * t.alpha(1, j1, i1);
            const double th1 = theta_rate(t.beta(1, j1, i1), nu_bar1, rho1);
            for (int i2 = 0; i2 < r; ++i2) {
                const double sign = ((i1 + i2) % 2 == 0) ? 1.0 : -1.0;
                for (int j2 = 2; j2 <= 3; ++j2) {
                    Term term;
                    term.weight = r2 * sign * w1 * double(t.binom[i2]) * t.alpha(2, j2, i2);
                    term.rate1 = th1;
                    term.rate2 = theta_rate(t.beta(2, j2, i2), nu_bar2, rho2);
                    ts.terms.push_back(term);
                }
            }
        }
    }
    return ts;
}

}  // namespace otwr::order_stats
