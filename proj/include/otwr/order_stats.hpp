#pragma once

#include <cstdint>
#include <vector>

namespace otwr::order_stats {

/// Exponential-mixture coefficients for the selected relay's outdated
/// equivalent gains. For each hop q in {1,2} and each binomial index
/// i in [0, R):
///   cdf_outdated(q, x) = R sum_i binom_i (-1)^i sum_{j=1..3} alpha_{q,j,i} e^{-beta_{q,j,i} x}
/// with beta_{q,1,i} = 0, beta_{q,2,i} = 1/sigma_q, beta_{q,3,i} = chi_i and
/// alpha built from the kappa pair. Immutable after construction.
struct CoefficientTable {
    int num_relays = 0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    std::vector<double> chi;                 // chi_i = (i+1)(1/s1 + 1/s2)
    std::vector<std::uint64_t> binom;        // C(R-1, i), exact
    // indexed [q-1][j-1][i], j in {1,2,3} for alpha/beta, {1,2} for kappa
    double alpha(int q, int j, int i) const { return alpha_[q - 1][j - 1][i]; }
    double beta(int q, int j, int i) const { return beta_[q - 1][j - 1][i]; }
    double kappa(int q, int j, int i) const { return kappa_[q - 1][j - 1][i]; }

    std::vector<double> alpha_[2][3];
    std::vector<double> beta_[2][3];
    std::vector<double> kappa_[2][2];

    double sigma(int q) const { return q == 1 ? sigma1 : sigma2; }
};

/// One term of the flattened E2E CDF sum: a weight and the two
/// exponential rates of the current equivalent gains.
struct Term {
    double weight = 0.0;  // X_F
    double rate1 = 0.0;   // Theta_1 = beta / (nu_bar_1 beta + rho1^2)
    double rate2 = 0.0;   // Theta_2
};

/// All (2R)^2 terms of the four-index sum. Zero-weight terms are retained so
/// the count is predictable.
struct TermSet {
    std::vector<Term> terms;
    double weight_sum() const;  // extended-precision sum of X_F
};

/// Builds the table. R is capped at 64: the alternating binomial sums lose
/// too much precision beyond that.
CoefficientTable build_coefficient_table(double sigma1, double sigma2, int num_relays);

/// CDF / PDF / mean of the selected relay's *outdated* hop-q gain.
double cdf_outdated_eq(int q, double phi, const CoefficientTable& t);
double pdf_outdated_eq(int q, double phi, const CoefficientTable& t);
double mean_outdated_eq(int q, const CoefficientTable& t);

/// Joint density of (outdated y, current x) for hop q. Requires rho_q < 1
/// (the joint law is degenerate at rho = 1).
double joint_pdf_eq(int q, double y, double x, const CoefficientTable& t, double rho_q);

/// PDF / CDF of the selected relay's *current* hop-q gain; regular at both
/// rho = 0 (plain exponential) and rho = 1 (equals the outdated law).
double pdf_current_eq(int q, double x, const CoefficientTable& t, double rho_q);
double cdf_current_eq(int q, double x, const CoefficientTable& t, double rho_q);

TermSet build_term_set(const CoefficientTable& t, double rho1, double rho2);

}  // namespace otwr::order_stats
