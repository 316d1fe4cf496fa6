#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polybgk/grid.hpp"
#include "polybgk/params.hpp"
#include "polybgk/solver.hpp"

namespace polybgk {

// Parsed and validated run configuration. The text format is flat
// key = value lines under [model], [grid], [solver], [init], [output]
// sections; '#' starts a comment; unknown keys are rejected.
struct RunConfig {
    RelaxationParams params;
    GridConfig grid;
    SolverConfig solver;
    InitSpec init = EquilibriumInit{};
    double tail_limit = 1e-9;
    std::string out_path;
    std::uint64_t seed = 12345;
    int check_samples = 500;
};

/// Parses and validates configuration text. Every key that falls back to its
/// default is appended to *defaults_log (when given) as "section.key = value".
/// Throws ParseError with a line number for syntax/unknown keys and
/// ValidationError naming the violated range.
RunConfig parse_config(const std::string& text,
                       std::vector<std::string>* defaults_log = nullptr);

RunConfig parse_config_file(const std::string& path,
                            std::vector<std::string>* defaults_log = nullptr);

/// Time-series CSV with the fixed header
///   t,x,rho,ux,uy,uz,T_tr,T_int,T_total,H,mass_defect,momentum_defect,
///   energy_defect,linf_q_norm
/// one row per (output step, x cell), 17 significant digits. Mass and energy
/// defects are signed relative values, the momentum defect is the Euclidean
/// norm of the relative momentum rows; H is the per-cell entropy and
/// linf_q_norm the global weighted norm.
void write_run_csv(std::ostream& os, const RunResult& result,
                   const PhaseSpaceGrid& grid);

} // namespace polybgk
