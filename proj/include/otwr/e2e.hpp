#pragma once

#include <string>
#include <vector>

#include "otwr/config.hpp"
#include "otwr/order_stats.hpp"
#include "otwr/quadrature.hpp"

namespace otwr::e2e {

enum class ModulationKind { Coherent, NonCoherent };

/// One-dimensional modulation described by the conditional error rate
/// a Q(sqrt(b g)) (coherent) or a e^{-b g} (non-coherent).
struct ModulationSpec {
    ModulationKind kind = ModulationKind::Coherent;
    double a = 1.0;
    double b = 2.0;
    std::string name = "bpsk";

    void validate() const;

    static ModulationSpec bpsk();      // coherent (1, 2)
    static ModulationSpec bfsk();      // coherent (1, 1)
    static ModulationSpec mpam(int m); // coherent (2(M-1)/M, 6 log2 M / (M^2-1))
    static ModulationSpec dbpsk();     // non-coherent (0.5, 1)
    static ModulationSpec ncbfsk();    // non-coherent (0.5, 0.5)
    /// Lookup by preset name ("bpsk", "bfsk", "dbpsk", "ncbfsk", "4pam", ...).
    static ModulationSpec preset(const std::string& name);
};

/// Immutable end-to-end SNR model at source 2. The statistics at source 1
/// follow by swapping hop indices when building the model.
struct E2eModel {
    order_stats::TermSet term_set;
    double fixed_gain_const = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
};

/// Composes table -> means -> derived constants -> term set for a scenario.
/// The table and derived parameters are also returned for reuse.
struct ModelBundle {
    order_stats::CoefficientTable table;
    DerivedParams derived;
    E2eModel model;
};
ModelBundle build_model(const SystemConfig& cfg);

/// CDF of the end-to-end SNR at the given threshold.
double cdf_e2e(const E2eModel& model, double phi);

/// Outage probability at threshold Psi (= cdf_e2e at Psi).
double outage(const E2eModel& model, double psi);

/// The transform S(c1, c2, c3) = c1 int_0^inf x^{c2} e^{-c3 x} F(x) dx.
/// Closed path: Gamma + Meijer-G per term. Quadrature path: adaptive
/// integration of the definition; serves as the independent cross-check.
double s_integral_closed(const E2eModel& model, double c1, double c2, double c3);
double s_integral_quadrature(const E2eModel& model, double c1, double c2, double c3,
                             const specfun::QuadratureSpec& spec = {});

/// M(s) = E[e^{-s Y}] (Laplace-transform sign convention: decreasing in s,
/// M(0+) = 1). Computed as S(s, 0, s) on the closed path.
double mgf(const E2eModel& model, double s);

/// Average symbol error rate for the modulation. Closed path by default;
/// set use_quadrature for the validation path.
double ser(const E2eModel& model, const ModulationSpec& mod, bool use_quadrature = false);

/// Central finite difference of the CDF; O(h^2), diagnostic use only.
double pdf_e2e_numeric(const E2eModel& model, double phi, double h);

}  // namespace otwr::e2e
