#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "polybgk/linalg.hpp"
#include "polybgk/params.hpp"

namespace polybgk {

// Internal-energy quadrature flavors.
//   Uniform: midpoint nodes on (0, i_max], the default.
//   Mapped:  midpoint in u = I^{2/delta}, clustering nodes toward 0 for
//            delta > 2.
//   Gauss:   generalized Gauss-Laguerre in u with weight u^{delta/2-1}
//            exp(-u/i_scale). Integrates every internal-energy moment of the
//            model's Gaussian-exponential profiles to near machine precision
//            at a few dozen nodes, which the verification suites need.
enum class InternalGridKind { Uniform, Mapped, Gauss };

struct GridConfig {
    int x_count = 1;        // 1 means space-homogeneous
    double x_length = 1.0;  // period of the torus
    int v_count = 32;       // points per velocity axis
    double v_max = 8.0;     // velocity cutoff per axis
    int i_count = 32;       // internal-energy points
    double i_max = 0.0;     // cutoff; 0 selects the default tail rule
    double delta = 2.0;     // non-translational degrees of freedom
    InternalGridKind i_kind = InternalGridKind::Uniform;
    double i_scale = 1.0;   // temperature scale of the Gauss rule
};

// Immutable after construction; shareable across threads.
struct PhaseSpaceGrid {
    int x_count = 1;
    double x_length = 1.0;
    double dx = 1.0;
    int v_count = 0;
    double v_max = 0.0;
    double dv = 0.0;
    int i_count = 0;
    double i_max = 0.0;
    double delta = 2.0;
    InternalGridKind i_kind = InternalGridKind::Uniform;
    double i_scale = 1.0;

    std::vector<double> v_axis;    // per-axis midpoint nodes, symmetric about 0
    std::vector<double> v_sq;      // |v|^2 per flattened velocity node
    std::vector<double> i_nodes;   // strictly positive, increasing
    std::vector<double> i_weights; // plain-dI quadrature weights
    std::vector<double> i_energy;  // I^{2/delta} per node
    double v_weight = 0.0;         // uniform 3-D velocity cell weight dv^3

    std::size_t n_v() const {
        const auto n = static_cast<std::size_t>(v_count);
        return n * n * n;
    }
    std::size_t cell_values() const {
        return static_cast<std::size_t>(i_count) * n_v();
    }
    std::size_t total_values() const {
        return static_cast<std::size_t>(x_count) * cell_values();
    }

    // Storage is x-major, then I, then v (v innermost, z-axis fastest).
    std::size_t index(int ix, int ii, std::size_t iv) const {
        return (static_cast<std::size_t>(ix) * i_count + ii) * n_v() + iv;
    }
    std::array<double, 3> v_of(std::size_t iv) const {
        const auto n = static_cast<std::size_t>(v_count);
        return {v_axis[iv / (n * n)], v_axis[(iv / n) % n], v_axis[iv % n]};
    }
    double x_center(int ix) const {
        return (static_cast<double>(ix) + 0.5) * dx;
    }
    // Homogeneous grids integrate over x with weight 1 by convention.
    double x_weight() const { return x_count == 1 ? 1.0 : dx; }
};

PhaseSpaceGrid build_grid(const GridConfig& config);

// Grid field f(x, v, I) >= 0, the primary state.
struct DistributionFunction {
    std::vector<double> values;

    std::span<const double> cell(const PhaseSpaceGrid& g, int ix) const {
        return {values.data() + static_cast<std::size_t>(ix) * g.cell_values(),
                g.cell_values()};
    }
    std::span<double> cell(const PhaseSpaceGrid& g, int ix) {
        return {values.data() + static_cast<std::size_t>(ix) * g.cell_values(),
                g.cell_values()};
    }
};

/// Precomputed (1 + |v|^2 + I^{2/delta})^{q/2} per (I, v) node, in cell
/// storage order. Callers that evaluate the norm repeatedly should reuse it.
std::vector<double> norm_weight_table(const PhaseSpaceGrid& grid, double q);

/// sup over the grid of f * (1 + |v|^2 + I^{2/delta})^{q/2}.
double weighted_sup_norm(const DistributionFunction& f,
                         const PhaseSpaceGrid& grid, double q);
double weighted_sup_norm(const DistributionFunction& f,
                         const PhaseSpaceGrid& grid,
                         std::span<const double> weight_table);

struct EquilibriumInit {
    double rho0 = 1.0;
    Vec3 u0{};
    double T0 = 1.0;
};

struct TwoTemperatureInit {
    double rho0 = 1.0;
    Vec3 u0{};
    double T_tr0 = 1.0;
    double T_int0 = 1.0;
};

// Density wave (1 + amplitude sin(2 pi mode x / L)) times an equilibrium.
struct SpatialWaveInit {
    double amplitude = 0.1;
    int mode = 1;
    double rho0 = 1.0;
    Vec3 u0{};
    double T0 = 1.0;
};

struct FileInit {
    std::string path;
};

using InitSpec =
    std::variant<EquilibriumInit, TwoTemperatureInit, SpatialWaveInit, FileInit>;

/// Analytic estimate of the preset mass fraction outside the grid cutoffs.
double preset_tail_fraction(const InitSpec& spec, const PhaseSpaceGrid& grid);

/// Builds the initial field. Throws CutoffTooSmall when the analytic tail
/// estimate exceeds `tail_limit`, NegativeInput for negative file data.
DistributionFunction init_distribution(const InitSpec& spec,
                                       const PhaseSpaceGrid& grid,
                                       const RelaxationParams& params,
                                       double tail_limit = 1e-9);

} // namespace polybgk
