#pragma once

#include <string>
#include <vector>

namespace otwr::validation {

struct Check {
    std::string name;
    double tolerance = 0.0;
    double deviation = 0.0;  // measured, same units as tolerance
    bool passed = false;
    double runtime_ms = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<Check> checks;
    bool all_passed() const;
    std::string to_json() const;
    std::string to_text() const;
};

/// The built-in self-check suite: normalization identities over the parameter
/// grid, CDF validity, analytic reductions, closed-form vs quadrature, MGF
/// limits, placement/diversity behavior, Monte-Carlo cross-checks in the
/// regimes where the closed form is exact, and output determinism.
/// Deterministic: fixed seeds, fixed grids.
ValidationReport run_validation();

}  // namespace otwr::validation
