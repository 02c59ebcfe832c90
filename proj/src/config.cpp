#include "otwr/config.hpp"

#include <cmath>
#include <stdexcept>

#include "otwr/specfun.hpp"

namespace otwr {

void SystemConfig::validate() const {
    if (num_relays < 1) throw std::invalid_argument("num_relays must be >= 1");
    if (!(rho1 >= 0.0 && rho1 <= 1.0)) throw std::invalid_argument("rho1 must be in [0, 1]");
    if (!(rho2 >= 0.0 && rho2 <= 1.0)) throw std::invalid_argument("rho2 must be in [0, 1]");
    if (!(d1 > 0.0 && d1 < 1.0)) throw std::invalid_argument("d1 must be in (0, 1)");
    if (!(pathloss_exp > 0.0)) throw std::invalid_argument("pathloss_exp must be > 0");
    if (!std::isfinite(eta1_db)) throw std::invalid_argument("eta1_db must be finite");
    if (!std::isfinite(eta2_db)) throw std::invalid_argument("eta2_db must be finite");
    if (!(rate > 0.0)) throw std::invalid_argument("rate must be > 0");
    if (!(noise_power > 0.0)) throw std::invalid_argument("noise_power must be > 0");
}

double mean_power_hop1(const SystemConfig& cfg) {
    return std::pow(cfg.d1, -cfg.pathloss_exp);
}

double mean_power_hop2(const SystemConfig& cfg) {
    return std::pow(1.0 - cfg.d1, -cfg.pathloss_exp);
}

DerivedParams derive(const SystemConfig& cfg, double mean_eq_gain_1, double mean_eq_gain_2) {
    cfg.validate();
    if (!(mean_eq_gain_1 > 0.0) || !std::isfinite(mean_eq_gain_1) ||
        !(mean_eq_gain_2 > 0.0) || !std::isfinite(mean_eq_gain_2))
        throw std::invalid_argument("derive: mean equivalent gains must be positive and finite");
    DerivedParams d;
    d.sigma1 = mean_power_hop1(cfg);
    d.sigma2 = mean_power_hop2(cfg);
    d.eta1 = std::pow(10.0, cfg.eta1_db / 10.0);
    d.eta2 = std::pow(10.0, cfg.eta2_db / 10.0);
    d.fixed_gain_const = d.eta1 * (mean_eq_gain_1 + mean_eq_gain_2) + 1.0;
    d.outage_threshold = std::exp2(cfg.rate) - 1.0;
    return d;
}

double correlation_from_doppler(double fd_times_t) {
    if (!std::isfinite(fd_times_t) || fd_times_t < 0.0)
        throw std::invalid_argument("correlation_from_doppler: requires finite fD*T >= 0");
    return specfun::bessel_j0(2.0 * 3.14159265358979323846 * fd_times_t);
}

std::string to_string(GainConvention c) {
    return c == GainConvention::SelectedRelayMeans ? "selected_relay_means" : "per_relay_means";
}

GainConvention gain_convention_from_string(const std::string& s) {
    if (s == "selected_relay_means") return GainConvention::SelectedRelayMeans;
    if (s == "per_relay_means") return GainConvention::PerRelayMeans;
    throw std::invalid_argument("unknown gain convention: " + s);
}

}  // namespace otwr
