#pragma once

#include <vector>

#include "polybgk/gaussian.hpp"
#include "polybgk/grid.hpp"
#include "polybgk/moments.hpp"

namespace polybgk {

enum class TransportInterp { Linear, Cubic };
enum class SplitScheme { Lie, Strang };
enum class RunMode { Evolve, Picard };
// Initial Picard iterate: Zero is the analysis convention f^0 = 0 with
// M(f^0) = 0; InitialData starts from the constant-in-time iterate f_0.
enum class PicardStart { Zero, InitialData };

struct SolverConfig {
    double dt = 0.01;
    double t_final = 1.0;
    TransportInterp interp = TransportInterp::Linear;
    SplitScheme splitting = SplitScheme::Lie;
    bool conservation_fix = false;
    RunMode mode = RunMode::Evolve;
    int picard_iterations = 8;
    int picard_time_nodes = 33;
    PicardStart picard_start = PicardStart::Zero;
    int output_interval = 1;
    int threads = 1;
};

/// Semi-Lagrangian shift x -> x - v_x dt with periodic wraparound, applied per
/// velocity node (1-D spatial transport along the x velocity component).
/// No-op for homogeneous grids. With cubic interpolation, negative overshoots
/// are clipped at zero and the clipped mass is accumulated into
/// *clipped_mass when given.
DistributionFunction transport_step(const DistributionFunction& f, double dt,
                                    const PhaseSpaceGrid& grid,
                                    TransportInterp interp,
                                    int threads = 1,
                                    double* clipped_mass = nullptr);

struct RelaxationCellInfo {
    MacroFields m;              // pre-step moments
    ConservationDefect defect;  // defect of the uncorrected Gaussian
};

/// In-place exponential relaxation f <- e^{-A dt} f + (1 - e^{-A dt}) M(f)
/// with the Gaussian frozen at step start. With conservation_fix the Gaussian
/// is tilt-corrected to f's discrete invariants first.
std::vector<RelaxationCellInfo> relaxation_step(DistributionFunction& f,
                                                double dt,
                                                const RelaxationParams& params,
                                                const PhaseSpaceGrid& grid,
                                                bool conservation_fix,
                                                int threads = 1);

struct CellRecord {
    MacroFields m;
    double entropy = 0.0;          // cell value of f ln f
    ConservationDefect defect;     // from the latest relaxation Gaussian
};

struct StepRecord {
    long step = 0;
    double t = 0.0;
    std::vector<CellRecord> cells;
    double norm_q = 0.0;           // global weighted sup norm
    double entropy_total = 0.0;    // x-weighted entropy
    double clipped_mass = 0.0;     // cumulative cubic-interpolation clipping
};

struct RunResult {
    std::vector<StepRecord> series;
    DistributionFunction final_state;
    double initial_min_density = 0.0; // min over x of the t=0 cell density
};

/// Lie/Strang-split evolution emitting one record per output interval
/// (including t = 0). theta = 0 routes to the monatomic reduction; see
/// MonatomicState. Aborts with the failing step index on VacuumCell or
/// NonSPDTensor.
RunResult run_simulation(const SolverConfig& config,
                         const PhaseSpaceGrid& grid,
                         const RelaxationParams& params,
                         const DistributionFunction& f0);

// Reduced description used at theta = 0: the internal-energy marginal
// g = int f dI closes under the monatomic relaxation, and the reduced
// internal-energy density h = int I^{2/delta} f dI rides along so internal
// temperature stays observable. Both live on marginal_grid(grid).
struct MonatomicState {
    DistributionFunction g;
    DistributionFunction h;
};

/// The (x, v) grid obtained by collapsing the internal axis (one node of
/// weight 1 and zero energy); marginal fields reuse the full-grid machinery.
PhaseSpaceGrid marginal_grid(const PhaseSpaceGrid& grid);

MonatomicState marginalize_internal(const DistributionFunction& f,
                                    const PhaseSpaceGrid& grid);

/// One exponential relaxation step of the monatomic system
///   g <- e g + (1-e) M_nu(g),  h <- e h + (1-e) (delta/2) T_int M_nu(g),
/// with A_0 = 1/(1-nu) and tensor (1-nu) T_tr Id + nu Theta.
void monatomic_relaxation_step(MonatomicState& state, double dt, double nu,
                               const PhaseSpaceGrid& mgrid, double delta,
                               bool conservation_fix);

struct PicardResult {
    std::vector<double> d;       // d_k = |f^{k+1}(t) - f^k(t)|_q
    std::vector<double> norms;   // |f^{k+1}(t)|_q
};

/// Successive-approximation iterates of the mild form on S uniform time
/// nodes over [0, t], homogeneous mode only. The Duhamel integral uses the
/// trapezoid rule over the stored nodes.
PicardResult picard_iterate(const DistributionFunction& f0, double t,
                            const RelaxationParams& params,
                            const PhaseSpaceGrid& grid, int iterations,
                            int time_nodes,
                            PicardStart start = PicardStart::Zero);

} // namespace polybgk
