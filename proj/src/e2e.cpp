#include "otwr/e2e.hpp"

#include <cmath>
#include <stdexcept>

#include "otwr/specfun.hpp"

namespace otwr::e2e {

void ModulationSpec::validate() const {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("ModulationSpec: constants a, b must be positive");
}

ModulationSpec ModulationSpec::bpsk() { return {ModulationKind::Coherent, 1.0, 2.0, "bpsk"}; }
ModulationSpec ModulationSpec::bfsk() { return {ModulationKind::Coherent, 1.0, 1.0, "bfsk"}; }
ModulationSpec ModulationSpec::dbpsk() { return {ModulationKind::NonCoherent, 0.5, 1.0, "dbpsk"}; }
ModulationSpec ModulationSpec::ncbfsk() { return {ModulationKind::NonCoherent, 0.5, 0.5, "ncbfsk"}; }

ModulationSpec ModulationSpec::mpam(int m) {
    if (m < 2) throw std::invalid_argument("mpam: M must be >= 2");
    ModulationSpec s;
    s.kind = ModulationKind::Coherent;
    s.a = 2.0 * (m - 1.0) / m;
    s.b = 6.0 * std::log2(double(m)) / (double(m) * m - 1.0);
    s.name = std::to_string(m) + "pam";
    return s;
}

ModulationSpec ModulationSpec::preset(const std::string& name) {
    if (name == "bpsk") return bpsk();
    if (name == "bfsk") return bfsk();
    if (name == "dbpsk") return dbpsk();
    if (name == "ncbfsk") return ncbfsk();
    if (name.size() > 3 && name.substr(name.size() - 3) == "pam")
        return mpam(std::stoi(name.substr(0, name.size() - 3)));
    throw std::invalid_argument("unknown modulation preset: " + name);
}

ModelBundle build_model(const SystemConfig& cfg) {
    cfg.validate();
    ModelBundle mb;
    const double s1 = mean_power_hop1(cfg);
    const double s2 = mean_power_hop2(cfg);
    mb.table = order_stats::build_coefficient_table(s1, s2, cfg.num_relays);
    double m1, m2;
    if (cfg.gain_convention == GainConvention::SelectedRelayMeans) {
        m1 = order_stats::mean_outdated_eq(1, mb.table);
        m2 = order_stats::mean_outdated_eq(2, mb.table);
    } else {
        m1 = s1;
        m2 = s2;
    }
    mb.derived = derive(cfg, m1, m2);
    mb.model.term_set = order_stats::build_term_set(mb.table, cfg.rho1, cfg.rho2);
    mb.model.fixed_gain_const = mb.derived.fixed_gain_const;
    mb.model.eta1 = mb.derived.eta1;
    mb.model.eta2 = mb.derived.eta2;
    return mb;
}

double cdf_e2e(const E2eModel& model, double phi) {
    if (!(phi >= 0.0)) throw std::invalid_argument("cdf_e2e: requires phi >= 0");
    if (phi == 0.0) return 0.0;
    const double cscale = model.fixed_gain_const / (model.eta1 * model.eta2);
    long double acc = 0.0L;
    for (const auto& t : model.term_set.terms) {
        if (t.weight == 0.0) continue;
        const double u = t.rate1 * phi / model.eta1;
        const double z = t.rate1 * t.rate2 * cscale * phi;
        // 1 - e^{-u} g(z) = -expm1(-u) - e^{-u} (g(z) - 1); both pieces are
        // positive, so the small-phi bracket keeps full relative accuracy.
        const double bracket = -std::expm1(-u) - std::exp(-u) * specfun::xk1_scaled_m1(z);
        acc += (long double)t.weight * bracket;
    }
    double v = static_cast<double>(acc);
    // Residuals beyond 1e-9 indicate a broken term set rather than roundoff.
    if (v < -1e-9 || v > 1.0 + 1e-9)
        throw std::runtime_error("cdf_e2e: value outside [0,1] beyond numerical tolerance");
    return std::min(1.0, std::max(0.0, v));
}

double outage(const E2eModel& model, double psi) {
    if (!(psi >= 0.0)) throw std::invalid_argument("outage: requires Psi >= 0");
    return cdf_e2e(model, psi);
}

double s_integral_closed(const E2eModel& model, double c1, double c2, double c3) {
    if (!(c2 > -1.0)) throw std::invalid_argument("s_integral_closed: requires c2 > -1");
    if (!(c3 > 0.0)) throw std::invalid_argument("s_integral_closed: requires c3 > 0");
    const double cscale = model.fixed_gain_const / (model.eta1 * model.eta2);
    const double gamma_term = std::pow(c3, -1.0 - c2) * specfun::gamma_fn(1.0 + c2);
    long double acc = 0.0L;
    for (const auto& t : model.term_set.terms) {
        if (t.weight == 0.0) continue;
        const double theta = t.rate1 * t.rate2 * cscale;
        const double p = c3 + t.rate1 / model.eta1;
        const double g = specfun::meijer_g2112(theta / p, c2);
        acc += (long double)t.weight * (gamma_term - std::pow(theta, -c2 - 1.0) * g);
    }
    return c1 * static_cast<double>(acc);
}

double s_integral_quadrature(const E2eModel& model, double c1, double c2, double c3,
                             const specfun::QuadratureSpec& spec) {
    if (!(c2 > -1.0)) throw std::invalid_argument("s_integral_quadrature: requires c2 > -1");
    if (!(c3 > 0.0)) throw std::invalid_argument("s_integral_quadrature: requires c3 > 0");
    specfun::QuadratureSpec q = spec;
    q.sqrt_singularity = (c2 < 0.0);
    auto f = [&](double x) {
        if (x <= 0.0) return 0.0;
        return std::pow(x, c2) * std::exp(-c3 * x) * cdf_e2e(model, x);
    };
    return c1 * specfun::integrate_semi_infinite(f, q);
}

double mgf(const E2eModel& model, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("mgf: requires s > 0");
    return s_integral_closed(model, s, 0.0, s);
}

double ser(const E2eModel& model, const ModulationSpec& mod, bool use_quadrature) {
    mod.validate();
    double c1, c2, c3;
    if (mod.kind == ModulationKind::NonCoherent) {
        c1 = mod.a * mod.b;
        c2 = 0.0;
        c3 = mod.b;
    } else {
        c1 = 0.5 * mod.a * std::sqrt(mod.b / (2.0 * 3.14159265358979323846));
        c2 = -0.5;
        c3 = 0.5 * mod.b;
    }
    return use_quadrature ? s_integral_quadrature(model, c1, c2, c3)
                          : s_integral_closed(model, c1, c2, c3);
}

double pdf_e2e_numeric(const E2eModel& model, double phi, double h) {
    if (!(phi > 0.0) || !(h > 0.0))
        throw std::invalid_argument("pdf_e2e_numeric: requires phi > 0 and h > 0");
    const double lo = std::max(0.0, phi - h);
    return (cdf_e2e(model, phi + h) - cdf_e2e(model, lo)) / (phi + h - lo);
}

}  // namespace otwr::e2e
