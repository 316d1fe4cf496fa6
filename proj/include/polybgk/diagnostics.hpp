#pragma once

#include <string>
#include <vector>

#include "polybgk/gaussian.hpp"
#include "polybgk/grid.hpp"
#include "polybgk/moments.hpp"

namespace polybgk {

/// Discrete H-functional contribution of one cell: sum of w f ln f with the
/// convention 0 ln 0 = 0.
double entropy_cell(std::span<const double> cell, const PhaseSpaceGrid& grid);

/// x-weighted H-functional of the whole field.
double entropy(const DistributionFunction& f, const PhaseSpaceGrid& grid);

struct CheckResult {
    std::string name;
    double measured = 0.0; // left side
    double bound = 0.0;    // right side
    double margin = 0.0;   // bound / measured; passing checks have margin >= 1
    bool pass = false;
    bool skipped = false;  // hypothesis violated; check not evaluated
    std::string note;
};

struct DiagnosticsReport {
    std::vector<CheckResult> checks;
    // Run-level record of the macroscopic-field bounds.
    double min_rho = 0.0;
    double min_T = 0.0;
    double max_rho_u_T = 0.0;

    bool all_pass() const;
    std::string to_text() const;
    std::string to_csv() const;
};

/// Evaluates the equivalence estimates on the temperature tensor and
/// relaxation temperature, the three explicit macroscopic-field inequalities,
/// and the Gaussian norm bound, with the closed-form constants. Worst margin
/// over spatial cells. The norm bound is skipped (reported, not evaluated)
/// at theta = 0 where its constant diverges.
DiagnosticsReport check_lemma_suite(const DistributionFunction& f,
                                    const RelaxationParams& params,
                                    const PhaseSpaceGrid& grid);

struct HMonotonicityResult {
    bool pass = false;
    double worst_increase = 0.0;
    double tolerance = 0.0;
};

/// Asserts H(t_{n+1}) <= H(t_n) + tol across the series.
HMonotonicityResult check_h_monotonicity(const std::vector<double>& h_series,
                                         double tol);

} // namespace polybgk
