// Command-line runner for the two-way relay performance toolkit: single-point
// analysis, parameter sweeps with optional Monte-Carlo columns, simulation-only
// estimates, the self-check suite, and coefficient-table dumps.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical non-convergence,
// 3 validation failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "otwr/e2e.hpp"
#include "otwr/mcsim.hpp"
#include "otwr/sweep.hpp"
#include "otwr/validation.hpp"

using nlohmann::json;

namespace {

struct ConfigFlags {
    otwr::SystemConfig cfg;
    std::string gain_convention = "selected_relay_means";
    std::string config_file;

    void add_to(CLI::App* app) {
        app->add_option("--relays", cfg.num_relays, "number of relays R");
        app->add_option("--rho1", cfg.rho1, "hop-1 correlation coefficient");
        app->add_option("--rho2", cfg.rho2, "hop-2 correlation coefficient");
        app->add_option("--d1", cfg.d1, "normalized source-1 to relay distance");
        app->add_option("--pathloss-exp", cfg.pathloss_exp, "path-loss exponent");
        app->add_option("--eta1-db", cfg.eta1_db, "source transmit SNR [dB]");
        app->add_option("--eta2-db", cfg.eta2_db, "relay transmit SNR [dB]");
        app->add_option("--rate", cfg.rate, "transmission rate [bits/s/Hz]");
        app->add_option("--noise-power", cfg.noise_power, "noise power N0");
        app->add_option("--gain-convention", gain_convention,
                        "selected_relay_means | per_relay_means");
        app->add_option("--config", config_file, "JSON scenario file (overrides flags)");
    }

    otwr::SystemConfig resolve() {
        cfg.gain_convention = otwr::gain_convention_from_string(gain_convention);
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) throw CLI::ValidationError("--config", "cannot open " + config_file);
            json j = json::parse(in);
            if (j.contains("num_relays")) cfg.num_relays = j["num_relays"].get<int>();
            if (j.contains("rho1")) cfg.rho1 = j["rho1"].get<double>();
            if (j.contains("rho2")) cfg.rho2 = j["rho2"].get<double>();
            if (j.contains("d1")) cfg.d1 = j["d1"].get<double>();
            if (j.contains("pathloss_exp")) cfg.pathloss_exp = j["pathloss_exp"].get<double>();
            if (j.contains("eta1_db")) cfg.eta1_db = j["eta1_db"].get<double>();
            if (j.contains("eta2_db")) cfg.eta2_db = j["eta2_db"].get<double>();
            if (j.contains("rate")) cfg.rate = j["rate"].get<double>();
            if (j.contains("noise_power")) cfg.noise_power = j["noise_power"].get<double>();
            if (j.contains("gain_convention"))
                cfg.gain_convention =
                    otwr::gain_convention_from_string(j["gain_convention"].get<std::string>());
        }
        cfg.validate();
        return cfg;
    }
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        // start:step:stop
        double start, step, stop;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &step, &stop) != 3 ||
            !(step > 0.0))
            throw CLI::ValidationError("--grid", "expected start:step:stop with step > 0");
        for (double v = start; v <= stop + 0.5 * step; v += step) grid.push_back(v);
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
    }
    return grid;
}

otwr::sweep::MetricSet parse_metrics(const std::string& text) {
    otwr::sweep::MetricSet m{false, false, false};
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "outage") m.outage = true;
        else if (item == "ser") m.ser = true;
        else if (item == "mgf") m.mgf = true;
        else throw CLI::ValidationError("--metrics", "unknown metric " + item);
    }
    return m;
}

void write_out(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-way fixed-gain relay performance toolkit"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "all metrics at a single operating point");
    ConfigFlags acfg;
    acfg.add_to(analyze);
    std::string a_mod = "bpsk";
    double a_mgf_s = 1.0;
    analyze->add_option("--modulation", a_mod, "modulation preset");
    analyze->add_option("--mgf-s", a_mgf_s, "MGF evaluation point");

    // sweep
    auto* sw = app.add_subcommand("sweep", "parameter sweep with optional MC columns");
    ConfigFlags scfg;
    scfg.add_to(sw);
    std::string s_axis = "d1", s_grid = "0.05:0.05:0.95", s_metrics = "outage";
    std::string s_mod = "bpsk", s_out;
    double s_mgf_s = 1.0;
    std::uint64_t s_trials = 0, s_seed = 1;
    bool s_json = false;
    sw->add_option("--axis", s_axis, "d1 | eta1_db | rho1 | rho2 | num_relays");
    sw->add_option("--grid", s_grid, "comma list or start:step:stop");
    sw->add_option("--metrics", s_metrics, "comma subset of outage,ser,mgf");
    sw->add_option("--modulation", s_mod, "modulation preset for the ser metric");
    sw->add_option("--mgf-s", s_mgf_s, "MGF evaluation point");
    sw->add_option("--trials", s_trials, "MC trials per row (0 = analytics only)");
    sw->add_option("--seed", s_seed, "MC seed");
    sw->add_flag("--json", s_json, "emit JSON instead of CSV");
    sw->add_option("--output", s_out, "output file (default stdout)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo estimates only");
    ConfigFlags mcfg;
    mcfg.add_to(sim);
    std::string m_mod = "bpsk";
    std::uint64_t m_trials = 100000, m_seed = 1;
    double m_mgf_s = 1.0;
    sim->add_option("--modulation", m_mod, "modulation preset");
    sim->add_option("--trials", m_trials, "number of trials");
    sim->add_option("--seed", m_seed, "seed");
    sim->add_option("--mgf-s", m_mgf_s, "MGF evaluation point");

    // validate
    auto* val = app.add_subcommand("validate", "run the self-check suite");
    bool v_json = false;
    val->add_flag("--json", v_json, "machine-readable report");

    // table
    auto* tab = app.add_subcommand("table", "dump coefficient table and term set as JSON");
    ConfigFlags tcfg;
    tcfg.add_to(tab);
    std::string t_out;
    tab->add_option("--output", t_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            const auto cfg = acfg.resolve();
            const auto mb = otwr::e2e::build_model(cfg);
            const auto mod = otwr::e2e::ModulationSpec::preset(a_mod);
            json j;
            j["config"] = {{"num_relays", cfg.num_relays}, {"rho1", cfg.rho1},
                           {"rho2", cfg.rho2}, {"d1", cfg.d1},
                           {"pathloss_exp", cfg.pathloss_exp}, {"eta1_db", cfg.eta1_db},
                           {"eta2_db", cfg.eta2_db}, {"rate", cfg.rate},
                           {"noise_power", cfg.noise_power},
                           {"gain_convention", otwr::to_string(cfg.gain_convention)}};
            j["derived"] = {{"sigma1", mb.derived.sigma1}, {"sigma2", mb.derived.sigma2},
                            {"eta1", mb.derived.eta1}, {"eta2", mb.derived.eta2},
                            {"C", mb.derived.fixed_gain_const},
                            {"Psi", mb.derived.outage_threshold}};
            j["metrics"] = {
                {"outage", otwr::e2e::outage(mb.model, mb.derived.outage_threshold)},
                {"ser_" + mod.name, otwr::e2e::ser(mb.model, mod)},
                {"mgf", {{"s", a_mgf_s}, {"value", otwr::e2e::mgf(mb.model, a_mgf_s)}}}};
            std::cout << j.dump(2) << "\n";
        } else if (sw->parsed()) {
            otwr::sweep::SweepSpec spec;
            spec.base = scfg.resolve();
            spec.axis = otwr::sweep::axis_from_string(s_axis);
            spec.grid = parse_grid(s_grid);
            spec.metrics = parse_metrics(s_metrics);
            spec.modulation = s_mod;
            spec.mgf_s = s_mgf_s;
            spec.mc_trials = s_trials;
            spec.seed = s_seed;
            const auto rows = otwr::sweep::run_sweep(spec);
            write_out(s_out, s_json ? otwr::sweep::rows_to_json(spec, rows)
                                    : otwr::sweep::rows_to_csv(spec, rows));
        } else if (sim->parsed()) {
            const auto cfg = mcfg.resolve();
            const auto mb = otwr::e2e::build_model(cfg);
            const auto mod = otwr::e2e::ModulationSpec::preset(m_mod);
            const auto out = otwr::mcsim::estimate_outage(cfg, mb.derived.outage_threshold,
                                                          m_trials, m_seed, 0);
            const auto se = otwr::mcsim::estimate_ser(cfg, mod, m_trials, m_seed, 1);
            const auto mg = otwr::mcsim::estimate_mgf(cfg, m_mgf_s, m_trials, m_seed, 2);
            json j;
            j["meta"] = {{"trials", m_trials}, {"seed", m_seed},
                         {"rng", "xoshiro256++/splitmix64"}, {"gaussian", "polar"}};
            auto emit = [](const otwr::mcsim::McEstimate& e) {
                return json{{"value", e.value}, {"std_error", e.std_error}};
            };
            j["outage"] = emit(out);
            j["ser_" + mod.name] = emit(se);
            j["mgf"] = emit(mg);
            j["mgf"]["s"] = m_mgf_s;
            std::cout << j.dump(2) << "\n";
        } else if (val->parsed()) {
            const auto report = otwr::validation::run_validation();
            std::cout << (v_json ? report.to_json() + "\n" : report.to_text());
            if (!report.all_passed()) return 3;
        } else if (tab->parsed()) {
            write_out(t_out, otwr::sweep::dump_table(tcfg.resolve()) + "\n");
        }
    } catch (const otwr::specfun::NonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
