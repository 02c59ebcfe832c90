#pragma once

#include <string>

namespace otwr {

/// Which means enter the fixed-gain constant.
///   SelectedRelayMeans: means of the selected relay's outdated equivalent
///                       gains (selection-biased; the quantity the analysis
///                       actually uses). Default.
///   PerRelayMeans:      plain per-relay hop means sigma1, sigma2, for
///                       sensitivity studies.
enum class GainConvention { SelectedRelayMeans, PerRelayMeans };

/// User-facing scenario description. Distances are normalized to the
/// inter-source distance; transmit SNRs are given in dB.
struct SystemConfig {
    int num_relays = 1;
    double rho1 = 1.0;           // hop-1 selection/transmission correlation, [0,1]
    double rho2 = 1.0;           // hop-2 correlation, [0,1]
    double d1 = 0.5;             // source-1 to relay distance, (0,1)
    double pathloss_exp = 3.0;   // > 0
    double eta1_db = 10.0;       // source transmit SNR [dB]
    double eta2_db = 10.0;       // relay transmit SNR [dB]
    double rate = 1.0;           // bits/s/Hz, > 0
    double noise_power = 1.0;    // carried for bookkeeping; only ratios enter
    GainConvention gain_convention = GainConvention::SelectedRelayMeans;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Everything the analysis and the simulator share, computed once.
struct DerivedParams {
    double sigma1 = 0.0;            // mean hop-1 channel power gain, d1^{-v}
    double sigma2 = 0.0;            // mean hop-2 gain, (1-d1)^{-v}
    double eta1 = 0.0;              // linear source SNR
    double eta2 = 0.0;              // linear relay SNR
    double fixed_gain_const = 0.0;  // C = eta1 (m1 + m2) + 1
    double outage_threshold = 0.0;  // Psi = 2^rate - 1
};

/// Mean hop powers from the placement model.
double mean_power_hop1(const SystemConfig& cfg);
double mean_power_hop2(const SystemConfig& cfg);

/// Computes all derived constants. The two mean arguments are the expected
/// outdated equivalent gains entering the fixed-gain constant: under
/// SelectedRelayMeans pass the Appendix-style selected-relay means; under
/// PerRelayMeans pass sigma1, sigma2.
DerivedParams derive(const SystemConfig& cfg, double mean_eq_gain_1, double mean_eq_gain_2);

/// rho = J0(2 pi fD T) from the Doppler-delay product fD*T.
double correlation_from_doppler(double fd_times_t);

std::string to_string(GainConvention c);
GainConvention gain_convention_from_string(const std::string& s);

}  // namespace otwr
