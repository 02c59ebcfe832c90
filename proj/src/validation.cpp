#include "otwr/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <tuple>

#include <json.hpp>

#include "otwr/e2e.hpp"
#include "otwr/mcsim.hpp"
#include "otwr/order_stats.hpp"
#include "otwr/quadrature.hpp"
#include "otwr/specfun.hpp"
#include "otwr/sweep.hpp"

namespace otwr::validation {

using namespace otwr;
namespace os = otwr::order_stats;

bool ValidationReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::string ValidationReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name},
                       {"tolerance", c.tolerance},
                       {"deviation", c.deviation},
                       {"passed", c.passed},
                       {"runtime_ms", c.runtime_ms},
                       {"detail", c.detail}});
    nlohmann::json j = {{"all_passed", all_passed()}, {"checks", arr}};
    return j.dump(2);
}

std::string ValidationReport::to_text() const {
    std::string out;
    char buf[256];
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "[%s] %-38s dev=%.3e tol=%.3e (%.0f ms)%s%s\n",
                      c.passed ? "PASS" : "FAIL", c.name.c_str(), c.deviation, c.tolerance,
                      c.runtime_ms, c.detail.empty() ? "" : " ", c.detail.c_str());
        out += buf;
    }
    out += all_passed() ? "validation: all checks passed\n" : "validation: FAILURES present\n";
    return out;
}

namespace {

struct Runner {
    ValidationReport report;

    void run(const std::string& name, double tolerance,
             const std::function<double(std::string*)>& deviation_fn) {
        Check c;
        c.name = name;
        c.tolerance = tolerance;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.deviation = deviation_fn(&c.detail);
            c.passed = c.deviation <= tolerance;
        } catch (const std::exception& e) {
            c.deviation = std::numeric_limits<double>::infinity();
            c.passed = false;
            c.detail = e.what();
        }
        c.runtime_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
        report.checks.push_back(c);
    }
};

const double kRhoGrid[] = {0.0, 0.2, 0.5, 0.9, 1.0};
const double kD1Grid[] = {0.1, 0.3, 0.5, 0.7, 0.9};

SystemConfig make_cfg(int r, double rho1, double rho2, double d1, double eta_db = 15.0) {
    SystemConfig cfg;
    cfg.num_relays = r;
    cfg.rho1 = rho1;
    cfg.rho2 = rho2;
    cfg.d1 = d1;
    cfg.pathloss_exp = 3.0;
    cfg.eta1_db = eta_db;
    cfg.eta2_db = eta_db;
    return cfg;
}

// max |R sum_i binom (-1)^{i+1} (a2+a3) - 1| and |per-i alpha sum| over table
double appendix_normalization_dev(const os::CoefficientTable& t) {
    double dev = 0.0;
    for (int q = 1; q <= 2; ++q) {
        long double pdf_norm = 0.0L;
        double sign = -1.0;
        for (int i = 0; i < t.num_relays; ++i) {
            pdf_norm += sign * (long double)t.binom[i] *
                        ((long double)t.alpha(q, 2, i) + t.alpha(q, 3, i));
            const double origin = t.alpha(q, 1, i) + t.alpha(q, 2, i) + t.alpha(q, 3, i);
            dev = std::max(dev, std::abs(origin) * t.binom[i] * t.num_relays);
            sign = -sign;
        }
        dev = std::max(dev, std::abs((double)(t.num_relays * pdf_norm - 1.0L)));
    }
    return dev;
}

}  // namespace

ValidationReport run_validation() {
    Runner r;

    r.run("term_weight_normalization", 1e-10, [](std::string*) {
        double dev = 0.0;
        for (int rr : {1, 2, 3, 4, 5})
            for (double rho1 : kRhoGrid)
                for (double rho2 : kRhoGrid)
                    for (double d1 : kD1Grid) {
                        const auto cfg = make_cfg(rr, rho1, rho2, d1);
                        const auto t = os::build_coefficient_table(
                            mean_power_hop1(cfg), mean_power_hop2(cfg), rr);
                        const auto ts = os::build_term_set(t, rho1, rho2);
                        dev = std::max(dev, std::abs(ts.weight_sum() - 1.0));
                        if (ts.terms.size() != std::size_t(4 * rr * rr))
                            throw std::runtime_error("term count != (2R)^2");
                    }
        return dev;
    });

    r.run("appendix_cdf_pdf_normalization", 1e-12, [](std::string*) {
        double dev = 0.0;
        for (int rr : {1, 2, 3, 4, 5})
            for (double d1 : kD1Grid) {
                const auto cfg = make_cfg(rr, 1.0, 1.0, d1);
                dev = std::max(dev, appendix_normalization_dev(os::build_coefficient_table(
                                        mean_power_hop1(cfg), mean_power_hop2(cfg), rr)));
            }
        return dev;
    });

    r.run("cdf_validity_monotone_limits", 1e-10, [](std::string*) {
        double dev = 0.0;
        for (int rr : {1, 3, 5})
            for (double rho1 : {0.0, 0.5, 1.0})
                for (double rho2 : {0.0, 0.5, 1.0})
                    for (double d1 : {0.3, 0.5}) {
                        const auto mb = e2e::build_model(make_cfg(rr, rho1, rho2, d1));
                        double prev = 0.0;
                        dev = std::max(dev, std::abs(e2e::cdf_e2e(mb.model, 0.0)));
                        for (int k = 0; k <= 200; ++k) {
                            const double phi = std::pow(10.0, -4.0 + 8.0 * k / 200.0);
                            const double f = e2e::cdf_e2e(mb.model, phi);
                            if (f < -1e-12 || f > 1.0 + 1e-12)
                                throw std::runtime_error("cdf out of [0,1]");
                            dev = std::max(dev, prev - f);  // monotonicity violation
                            prev = f;
                        }
                        dev = std::max(dev, std::abs(1.0 - e2e::cdf_e2e(mb.model, 1e9)));
                    }
        return dev;
    });

    r.run("reduction_r1_vs_quadrature", 1e-8, [](std::string*) {
        double dev = 0.0;
        for (double rho1 : {1.0, 0.7})
            for (double d1 : {0.35, 0.5}) {
                const auto cfg = make_cfg(1, rho1, 1.0, d1, 10.0);
                const auto mb = e2e::build_model(cfg);
                const double s1 = mb.derived.sigma1, s2 = mb.derived.sigma2;
                const double e1 = mb.derived.eta1, e2 = mb.derived.eta2;
                const double c = mb.derived.fixed_gain_const;
                for (double phi : {0.5, 1.0, 3.0}) {
                    // direct evaluation with plain exponential marginals
                    auto f = [&](double g) {
                        const double arg = phi * (e2 * g + c) / (e1 * e2 * g);
                        return -std::expm1(-arg / s1) * std::exp(-g / s2) / s2;
                    };
                    specfun::QuadratureSpec qs;
                    qs.rel_tol = 1e-12;
                    const double direct = specfun::integrate_semi_infinite(f, qs);
                    dev = std::max(dev, std::abs(direct - e2e::cdf_e2e(mb.model, phi)));
                }
            }
        return dev;
    });

    r.run("reduction_rho0_exponential", 1e-12, [](std::string*) {
        double dev = 0.0;
        for (int rr : {1, 2, 4})
            for (double d1 : {0.3, 0.5}) {
                const auto cfg = make_cfg(rr, 0.0, 0.0, d1);
                const auto t = os::build_coefficient_table(mean_power_hop1(cfg),
                                                           mean_power_hop2(cfg), rr);
                for (int q = 1; q <= 2; ++q)
                    for (double x : {0.1, 1.0, 5.0, 20.0}) {
                        const double expo = -std::expm1(-x / t.sigma(q));
                        dev = std::max(dev, std::abs(os::cdf_current_eq(q, x, t, 0.0) - expo));
                    }
            }
        return dev;
    });

    r.run("reduction_rho1_outdated", 1e-12, [](std::string*) {
        double dev = 0.0;
        for (int rr : {1, 2, 4})
            for (double d1 : {0.3, 0.5}) {
                const auto cfg = make_cfg(rr, 1.0, 1.0, d1);
                const auto t = os::build_coefficient_table(mean_power_hop1(cfg),
                                                           mean_power_hop2(cfg), rr);
                for (int q = 1; q <= 2; ++q)
                    for (double x : {0.1, 1.0, 5.0, 20.0})
                        dev = std::max(dev, std::abs(os::cdf_current_eq(q, x, t, 1.0) -
                                                     os::cdf_outdated_eq(q, x, t)));
            }
        return dev;
    });

    r.run("mean_r2_unit_sigma_exact", 1e-12, [](std::string*) {
        const auto t = os::build_coefficient_table(1.0, 1.0, 2);
        return std::abs(os::mean_outdated_eq(1, t) - 1.25);
    });

    r.run("s_integral_closed_vs_quadrature", 1e-6, [](std::string*) {
        double dev = 0.0;
        for (auto [rr, rho1, rho2, d1] :
             {std::tuple{2, 0.9, 0.5, 0.4}, std::tuple{3, 0.2, 0.9, 0.6}}) {
            const auto mb = e2e::build_model(make_cfg(rr, rho1, rho2, d1, 10.0));
            for (double c2 : {0.0, -0.5})
                for (double c3 : {0.01, 1.0, 100.0}) {
                    const double a = e2e::s_integral_closed(mb.model, 1.0, c2, c3);
                    const double b = e2e::s_integral_quadrature(mb.model, 1.0, c2, c3);
                    dev = std::max(dev, std::abs(a - b) / std::abs(b));
                }
        }
        return dev;
    });

    r.run("mgf_limits_and_monotonicity", 1e-4, [](std::string*) {
        const auto mb = e2e::build_model(make_cfg(2, 0.9, 0.9, 0.5, 10.0));
        double dev = std::abs(e2e::mgf(mb.model, 1e-6) - 1.0);
        double prev = 2.0;
        for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            const double m = e2e::mgf(mb.model, s);
            if (m >= prev) throw std::runtime_error("mgf not strictly decreasing");
            prev = m;
        }
        return dev;
    });

    r.run("placement_argmin_symmetric", 0.0, [](std::string* detail) {
        double best = 1e9, best_d1 = -1.0;
        for (int k = 1; k <= 19; ++k) {
            const double d1 = 0.05 * k;
            const auto mb = e2e::build_model(make_cfg(2, 1.0, 1.0, d1));
            const double o = e2e::outage(mb.model, mb.derived.outage_threshold);
            if (o < best) { best = o; best_d1 = d1; }
        }
        *detail = "argmin d1 = " + std::to_string(best_d1);
        return std::abs(best_d1 - 0.5);
    });

    r.run("placement_argmin_shifts_toward_outdated_source", 0.0, [](std::string* detail) {
        double best = 1e9, best_d1 = -1.0;
        for (int k = 1; k <= 19; ++k) {
            const double d1 = 0.05 * k;
            const auto mb = e2e::build_model(make_cfg(2, 0.5, 0.9, d1));
            const double o = e2e::outage(mb.model, mb.derived.outage_threshold);
            if (o < best) { best = o; best_d1 = d1; }
        }
        *detail = "argmin d1 = " + std::to_string(best_d1);
        return best_d1 < 0.5 ? 0.0 : 1.0;
    });

    r.run("low_correlation_relays_no_benefit", 0.10, [](std::string* detail) {
        const auto m1 = e2e::build_model(make_cfg(1, 0.2, 0.2, 0.5));
        const auto m4 = e2e::build_model(make_cfg(4, 0.2, 0.2, 0.5));
        const double o1 = e2e::outage(m1.model, m1.derived.outage_threshold);
        const double o4 = e2e::outage(m4.model, m4.derived.outage_threshold);
        *detail = "outage R=1: " + std::to_string(o1) + ", R=4: " + std::to_string(o4);
        return std::abs(o4 - o1) / o1;
    });

    r.run("ser_slope_diversity_loss", 0.0, [](std::string* detail) {
        auto slope = [](double rho) {
            const auto lo = e2e::build_model(make_cfg(2, rho, rho, 0.5, 20.0));
            const auto hi = e2e::build_model(make_cfg(2, rho, rho, 0.5, 30.0));
            const auto mod = e2e::ModulationSpec::bpsk();
            return std::log10(e2e::ser(hi.model, mod)) - std::log10(e2e::ser(lo.model, mod));
        };
        const double s_full = slope(1.0), s_outdated = slope(0.5);
        *detail = "decade slope rho=1: " + std::to_string(s_full) +
                  ", rho=0.5: " + std::to_string(s_outdated);
        return s_full < s_outdated ? 0.0 : 1.0;
    });

    r.run("mc_marginals_match_analytics", 4.0, [](std::string*) {
        // exact for every R; deviations in units of the MC standard error
        double dev = 0.0;
        for (auto [rr, rho, d1] : {std::tuple{2, 0.9, 0.5}, std::tuple{4, 0.5, 0.3}}) {
            const auto cfg = make_cfg(rr, rho, rho, d1, 10.0);
            const auto t = os::build_coefficient_table(mean_power_hop1(cfg),
                                                       mean_power_hop2(cfg), rr);
            const double m1 = os::mean_outdated_eq(1, t);
            std::vector<double> xs = {0.5 * m1, m1, 2.0 * m1};
            const auto st = mcsim::estimate_eq_gain_stats(cfg, xs, 200000, 20240915);
            for (std::size_t j = 0; j < xs.size(); ++j) {
                auto pull = [&](const mcsim::McEstimate& e, double an) {
                    return std::abs(e.value - an) / std::max(e.std_error, 1e-12);
                };
                dev = std::max(dev, pull(st.cdf_outdated1[j], os::cdf_outdated_eq(1, xs[j], t)));
                dev = std::max(dev, pull(st.cdf_outdated2[j], os::cdf_outdated_eq(2, xs[j], t)));
                dev = std::max(dev, pull(st.cdf_current1[j], os::cdf_current_eq(1, xs[j], t, rho)));
                dev = std::max(dev, pull(st.cdf_current2[j], os::cdf_current_eq(2, xs[j], t, rho)));
            }
            dev = std::max(dev, std::abs(st.mean_outdated1.value - m1) /
                                    st.mean_outdated1.std_error);
        }
        return dev;
    });

    r.run("mc_e2e_match_exact_regime", 4.0, [](std::string*) {
        // configurations where the closed form is exact: R = 1, or one hop
        // uncorrelated
        double dev = 0.0;
        for (auto [rr, rho1, rho2, d1] :
             {std::tuple{1, 0.9, 0.9, 0.5}, std::tuple{3, 0.0, 0.9, 0.4}}) {
            const auto cfg = make_cfg(rr, rho1, rho2, d1);
            const auto mb = e2e::build_model(cfg);
            const double psi = mb.derived.outage_threshold;
            const auto est = mcsim::estimate_outage(cfg, psi, 200000, 555);
            const double an = e2e::outage(mb.model, psi);
            const double se = std::sqrt(an * (1.0 - an) / (double)est.num_trials);
            dev = std::max(dev, std::abs(est.value - an) / se);
            const auto mod = e2e::ModulationSpec::bpsk();
            const auto ser_est = mcsim::estimate_ser(cfg, mod, 200000, 556);
            dev = std::max(dev, std::abs(ser_est.value - e2e::ser(mb.model, mod)) /
                                    std::max(ser_est.std_error, 1e-12));
        }
        return dev;
    });

    r.run("sweep_csv_thread_count_invariance", 0.0, [](std::string*) {
        sweep::SweepSpec spec;
        spec.base = make_cfg(2, 0.9, 0.9, 0.5, 10.0);
        spec.axis = sweep::Axis::D1;
        spec.grid = {0.3, 0.5, 0.7};
        spec.metrics = {true, true, true};
        spec.mc_trials = 20000;
        spec.seed = 99;
        // different worker counts must not change a single byte
        const char* saved = std::getenv("OTWR_THREADS");
        const std::string saved_value = saved ? saved : "";
        ::setenv("OTWR_THREADS", "1", 1);
        const std::string csv1 = sweep::rows_to_csv(spec, sweep::run_sweep(spec));
        ::setenv("OTWR_THREADS", "4", 1);
        const std::string csv4 = sweep::rows_to_csv(spec, sweep::run_sweep(spec));
        if (saved)
            ::setenv("OTWR_THREADS", saved_value.c_str(), 1);
        else
            ::unsetenv("OTWR_THREADS");
        return csv1 == csv4 ? 0.0 : 1.0;
    });

    return r.report;
}

}  // namespace otwr::validation
