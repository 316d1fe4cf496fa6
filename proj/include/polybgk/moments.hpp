#pragma once

#include <vector>

#include "polybgk/grid.hpp"
#include "polybgk/linalg.hpp"
#include "polybgk/params.hpp"

namespace polybgk {

// Macroscopic fields of one spatial cell. Temperatures follow equi-partition:
//   E_tr = (3/2) rho T_tr,  E_int = (delta/2) rho T_int,
//   T_total = (3 T_tr + delta T_int) / (3 + delta).
struct MacroFields {
    double rho = 0.0;
    Vec3 U{};
    Sym3 Theta{};   // stress tensor, second central moment / rho
    double E_tr = 0.0;
    double E_int = 0.0;
    double T_tr = 0.0;
    double T_int = 0.0;
    double T_total = 0.0;
};

// Inputs of the anisotropic Gaussian:
//   T_theta = theta T_total + (1-theta) T_int
//   Tensor  = theta T_total Id + (1-theta) [ (1-nu) T_tr Id + nu Theta ]
struct GaussianParams {
    double T_theta = 0.0;
    Sym3 Tensor{};
    Chol3 factor{};   // SPD factor of Tensor; log_det lives here too
};

// Density floor below which a cell counts as vacuum.
inline constexpr double kDensityFloor = 1e-30;

/// Discrete moments of one cell. Throws VacuumCell below the density floor.
MacroFields compute_cell_moments(std::span<const double> cell,
                                 const PhaseSpaceGrid& grid);

/// Moments of every spatial cell.
std::vector<MacroFields> compute_moments(const DistributionFunction& f,
                                         const PhaseSpaceGrid& grid);

/// Assembles T_theta and the corrected temperature tensor and factorizes it.
/// Throws NonSPDTensor if the factorization fails (discretization artifact;
/// the tensor is provably SPD for exact moments with theta > 0).
GaussianParams relaxation_fields(const MacroFields& m,
                                 const RelaxationParams& params);

} // namespace polybgk
