#pragma once

#include <array>
#include <optional>

#include "polybgk/moments.hpp"

namespace polybgk {

// Exponential-tilt coefficients exp(a + b.v + c (|v|^2/2 + I^{2/delta}))
// applied by the conservative correction.
struct TiltCoefficients {
    double a = 0.0;
    Vec3 b{};
    double c = 0.0;
    int iterations = 0;
};

// Anisotropic Gaussian of one spatial cell, evaluated at all (v, I) nodes.
struct GaussianField {
    std::vector<double> values;       // size cell_values()
    MacroFields m;                    // moments it was built from
    GaussianParams params;
    std::optional<TiltCoefficients> tilt; // set once corrected
};

// Exponent arguments below this evaluate to exactly zero instead of relying
// on gradual underflow; positivity holds wherever the exponent is above it.
inline constexpr double kUnderflowExponent = -708.0;

/// Evaluates rho Lambda det(2 pi Tensor)^{-1/2} T_theta^{-delta/2}
/// exp(-(v-U)^T Tensor^{-1} (v-U)/2 - I^{2/delta}/T_theta) at every node.
/// The quadratic form goes through the SPD factor, never an explicit inverse.
GaussianField evaluate_gaussian(const MacroFields& m, const GaussianParams& gp,
                                const PhaseSpaceGrid& grid);

/// Collision-invariant moments (1, v, |v|^2/2 + I^{2/delta}) of a cell.
std::array<double, 5> cell_invariants(std::span<const double> cell,
                                      const PhaseSpaceGrid& grid);

// Moments of (M - f) against the collision invariants. `absolute` is signed
// (Gaussian minus f); `relative` divides by the scales
//   rho,  rho (|U| + sqrt(T_total)),  total energy,
// so the momentum rows stay finite at U = 0.
struct ConservationDefect {
    std::array<double, 5> absolute{};
    std::array<double, 5> relative{};
};

ConservationDefect conservation_defect(std::span<const double> f_cell,
                                       const GaussianField& M,
                                       const PhaseSpaceGrid& grid);
ConservationDefect conservation_defect(std::span<const double> f_cell,
                                       const PhaseSpaceGrid& grid,
                                       std::span<const double> m_cell);

/// Rescales M by an exponential tilt so its five collision-invariant moments
/// match `target` to ~1e-13 relative, via damped Newton on the SPD moment
/// Gram system. Throws CorrectionDiverged after 50 iterations.
GaussianField conservative_correction(const GaussianField& M,
                                      const std::array<double, 5>& target,
                                      const PhaseSpaceGrid& grid);

} // namespace polybgk
