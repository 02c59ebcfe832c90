#include "otwr/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "otwr/order_stats.hpp"

namespace otwr::sweep {

using nlohmann::json;

std::string to_string(Axis a) {
    switch (a) {
        case Axis::D1: return "d1";
        case Axis::Eta1Db: return "eta1_db";
        case Axis::Rho1: return "rho1";
        case Axis::Rho2: return "rho2";
        case Axis::NumRelays: return "num_relays";
    }
    return "?";
}

Axis axis_from_string(const std::string& s) {
    if (s == "d1") return Axis::D1;
    if (s == "eta1_db") return Axis::Eta1Db;
    if (s == "rho1") return Axis::Rho1;
    if (s == "rho2") return Axis::Rho2;
    if (s == "num_relays") return Axis::NumRelays;
    throw std::invalid_argument("unknown sweep axis: " + s);
}

namespace {

SystemConfig apply_axis(const SystemConfig& base, Axis axis, double v) {
    SystemConfig cfg = base;
    switch (axis) {
        case Axis::D1: cfg.d1 = v; break;
        case Axis::Eta1Db: cfg.eta1_db = v; cfg.eta2_db = v; break;
        case Axis::Rho1: cfg.rho1 = v; break;
        case Axis::Rho2: cfg.rho2 = v; break;
        case Axis::NumRelays:
            if (v != std::floor(v)) throw std::invalid_argument("num_relays grid values must be integers");
            cfg.num_relays = static_cast<int>(v);
            break;
    }
    return cfg;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void SweepSpec::validate() const {
    base.validate();
    if (grid.empty()) throw std::invalid_argument("sweep grid must be nonempty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("sweep grid must be strictly increasing");
    if (!(metrics.outage || metrics.ser || metrics.mgf))
        throw std::invalid_argument("sweep needs at least one metric");
    if (metrics.mgf && !(mgf_s > 0.0)) throw std::invalid_argument("mgf_s must be > 0");
    // each grid value must produce a valid configuration
    for (double v : grid) apply_axis(base, axis, v).validate();
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const e2e::ModulationSpec mod = e2e::ModulationSpec::preset(spec.modulation);
    std::vector<SweepRow> rows;
    rows.reserve(spec.grid.size());
    for (std::size_t r = 0; r < spec.grid.size(); ++r) {
        const double v = spec.grid[r];
        try {
            const SystemConfig cfg = apply_axis(spec.base, spec.axis, v);
            const e2e::ModelBundle mb = e2e::build_model(cfg);
            SweepRow row;
            row.axis_value = v;
            row.sigma1 = mb.derived.sigma1;
            row.sigma2 = mb.derived.sigma2;
            row.fixed_gain_const = mb.derived.fixed_gain_const;
            if (spec.metrics.outage)
                row.outage_an = e2e::outage(mb.model, mb.derived.outage_threshold);
            if (spec.metrics.ser) row.ser_an = e2e::ser(mb.model, mod);
            if (spec.metrics.mgf) row.mgf_an = e2e::mgf(mb.model, spec.mgf_s);
            if (spec.mc_trials > 0) {
                // stream ids: slot 0 = outage, slot 1 = ser, per row
                if (spec.metrics.outage) {
                    const auto est = mcsim::estimate_outage(
                        cfg, mb.derived.outage_threshold, spec.mc_trials, spec.seed,
                        4 * static_cast<std::uint64_t>(r) + 0);
                    row.outage_mc = est.value;
                    row.outage_se = est.std_error;
                }
                if (spec.metrics.ser) {
                    const auto est = mcsim::estimate_ser(
                        cfg, mod, spec.mc_trials, spec.seed,
                        4 * static_cast<std::uint64_t>(r) + 1);
                    row.ser_mc = est.value;
                    row.ser_se = est.std_error;
                }
            }
            rows.push_back(row);
        } catch (const std::exception& e) {
            throw std::runtime_error("sweep row " + to_string(spec.axis) + " = " + fmt17(v) +
                                     " failed: " + e.what());
        }
    }
    return rows;
}

namespace {

std::vector<std::string> csv_columns(const SweepSpec& spec) {
    std::vector<std::string> cols = {"axis", "value", "sigma1", "sigma2", "C"};
    const bool mc = spec.mc_trials > 0;
    if (spec.metrics.outage) {
        cols.push_back("outage_an");
        if (mc) { cols.push_back("outage_mc"); cols.push_back("outage_se"); }
    }
    if (spec.metrics.ser) {
        cols.push_back("ser_an");
        if (mc) { cols.push_back("ser_mc"); cols.push_back("ser_se"); }
    }
    if (spec.metrics.mgf) cols.push_back("mgf_an");
    return cols;
}

std::string cell(const SweepSpec& spec, const SweepRow& r, const std::string& col) {
    if (col == "axis") return to_string(spec.axis);
    if (col == "value") return fmt17(r.axis_value);
    if (col == "sigma1") return fmt17(r.sigma1);
    if (col == "sigma2") return fmt17(r.sigma2);
    if (col == "C") return fmt17(r.fixed_gain_const);
    if (col == "outage_an") return fmt17(*r.outage_an);
    if (col == "outage_mc") return fmt17(*r.outage_mc);
    if (col == "outage_se") return fmt17(*r.outage_se);
    if (col == "ser_an") return fmt17(*r.ser_an);
    if (col == "ser_mc") return fmt17(*r.ser_mc);
    if (col == "ser_se") return fmt17(*r.ser_se);
    if (col == "mgf_an") return fmt17(*r.mgf_an);
    throw std::logic_error("unknown column " + col);
}

}  // namespace

std::string rows_to_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    const auto cols = csv_columns(spec);
    std::string out;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) out += ',';
        out += cols[c];
    }
    out += '\n';
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) out += ',';
            out += cell(spec, r, cols[c]);
        }
        out += '\n';
    }
    return out;
}

std::string rows_to_json(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    const bool mc = spec.mc_trials > 0;
    json arr = json::array();
    for (const auto& r : rows) {
        json obj;
        obj["axis"] = to_string(spec.axis);
        obj["value"] = r.axis_value;
        obj["sigma1"] = r.sigma1;
        obj["sigma2"] = r.sigma2;
        obj["C"] = r.fixed_gain_const;
        if (spec.metrics.outage) {
            obj["outage_an"] = *r.outage_an;
            if (mc) { obj["outage_mc"] = *r.outage_mc; obj["outage_se"] = *r.outage_se; }
        }
        if (spec.metrics.ser) {
            obj["ser_an"] = *r.ser_an;
            if (mc) { obj["ser_mc"] = *r.ser_mc; obj["ser_se"] = *r.ser_se; }
        }
        if (spec.metrics.mgf) obj["mgf_an"] = *r.mgf_an;
        arr.push_back(obj);
    }
    return arr.dump(2);
}

std::string dump_table(const SystemConfig& cfg) {
    cfg.validate();
    const double s1 = mean_power_hop1(cfg);
    const double s2 = mean_power_hop2(cfg);
    const auto t = order_stats::build_coefficient_table(s1, s2, cfg.num_relays);
    const auto ts = order_stats::build_term_set(t, cfg.rho1, cfg.rho2);

    json j;
    j["num_relays"] = t.num_relays;
    j["sigma1"] = t.sigma1;
    j["sigma2"] = t.sigma2;
    j["chi"] = t.chi;
    j["binom"] = t.binom;
    for (int q = 1; q <= 2; ++q) {
        json hop;
        for (int jj = 1; jj <= 3; ++jj) {
            json alpha = json::array(), beta = json::array();
            for (int i = 0; i < t.num_relays; ++i) {
                alpha.push_back(t.alpha(q, jj, i));
                beta.push_back(t.beta(q, jj, i));
            }
            hop["alpha"].push_back(alpha);
            hop["beta"].push_back(beta);
        }
        for (int jj = 1; jj <= 2; ++jj) {
            json kappa = json::array();
            for (int i = 0; i < t.num_relays; ++i) kappa.push_back(t.kappa(q, jj, i));
            hop["kappa"].push_back(kappa);
        }
        j[q == 1 ? "hop1" : "hop2"] = hop;
    }
    json terms = json::array();
    for (const auto& term : ts.terms)
        terms.push_back({{"weight", term.weight}, {"rate1", term.rate1}, {"rate2", term.rate2}});
    j["term_set"] = {{"rho1", cfg.rho1},
                     {"rho2", cfg.rho2},
                     {"term_count", ts.terms.size()},
                     {"weight_sum", ts.weight_sum()},
                     {"terms", terms}};
    return j.dump(2);
}

}  // namespace otwr::sweep
