#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otwr/config.hpp"
#include "otwr/e2e.hpp"
#include "otwr/mcsim.hpp"

namespace otwr::sweep {

enum class Axis { D1, Eta1Db, Rho1, Rho2, NumRelays };

std::string to_string(Axis a);
Axis axis_from_string(const std::string& s);

struct MetricSet {
    bool outage = true;
    bool ser = false;
    bool mgf = false;
};

struct SweepSpec {
    SystemConfig base;
    Axis axis = Axis::D1;
    std::vector<double> grid;       // strictly increasing, within the axis range
    MetricSet metrics;
    std::string modulation = "bpsk";
    double mgf_s = 1.0;             // point at which the MGF column is evaluated
    std::uint64_t mc_trials = 0;    // 0 disables the simulation columns
    std::uint64_t seed = 1;

    void validate() const;
};

struct SweepRow {
    double axis_value = 0.0;
    double sigma1 = 0.0, sigma2 = 0.0, fixed_gain_const = 0.0;
    std::optional<double> outage_an, outage_mc, outage_se;
    std::optional<double> ser_an, ser_mc, ser_se;
    std::optional<double> mgf_an;
};

/// Evaluates one row per grid value, in grid order. MC stream ids are a pure
/// function of the row index, so results are independent of threading.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// CSV with the fixed header
///   axis,value,sigma1,sigma2,C,outage_an,outage_mc,outage_se,ser_an,ser_mc,ser_se,mgf_an
/// (absent metric columns omitted); numbers printed with 17 significant digits.
std::string rows_to_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);

/// Same rows as a JSON array.
std::string rows_to_json(const SweepSpec& spec, const std::vector<SweepRow>& rows);

/// CoefficientTable + TermSet as a JSON document (full precision, round-trips
/// bit-exactly through the parser).
std::string dump_table(const SystemConfig& cfg);

}  // namespace otwr::sweep
