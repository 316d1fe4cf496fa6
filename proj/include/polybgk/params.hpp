#pragma once

#include <cstddef>

#include "polybgk/errors.hpp"

namespace polybgk {

// Model parameters of the relaxation operator. Valid ranges:
//   -1/2 < nu < 1,  0 <= theta <= 1,  delta > 0,  q > 5 + delta,
// and A = 1/(1 - nu + nu*theta).
struct RelaxationParams {
    double nu = 0.0;
    double theta = 1.0;
    double delta = 2.0;
    double q = 8.0;
    double A = 1.0;

    static RelaxationParams make(double nu, double theta, double delta, double q);
};

// Explicit constants of the macroscopic-field and Gaussian-norm estimates.
struct LemmaConstants {
    double c_nu = 0.0;       // max{1-nu, 1+2nu}
    double c_density = 0.0;  // rho <= c_density * |f|_q * T^{(3+delta)/2}
    double c_tail = 0.0;     // rho (T+|U|^2)^{(q-delta-3)/2} <= c_tail * |f|_q
    double c_momentum = 0.0; // rho |U|^{3+delta+q} <= c_momentum * |f|_q * [...]
    double c_gaussian = 0.0; // |M(f)|_q <= c_gaussian * |f|_q
    double c_growth = 0.0;   // A * (c_gaussian - 1), the norm growth rate
};

/// Collision frequency A = 1/(1 - nu + nu*theta).
/// Throws DegenerateFrequency when the denominator is <= 1e-12.
double collision_frequency(double nu, double theta);

/// Internal-energy normalization: Lambda * integral_0^inf exp(-I^{2/delta}) dI = 1.
/// Closed form 1/Gamma(delta/2 + 1).
double lambda_delta(double delta);

/// Brute-force quadrature of the normalization integral, used to cross-check
/// lambda_delta. `n` midpoint nodes in I for delta <= 2, in u = I^{2/delta}
/// otherwise (keeps the integrand's one-sided derivatives bounded).
double lambda_delta_quadrature(double delta, std::size_t n);

double lemma_cnu(double nu);
double lemma_density_constant(double delta);
double lemma_tail_constant(double delta, double q);
double lemma_momentum_constant(double delta, double q);

/// Gaussian-norm constant assembled from the intermediate bounds
/// (C0 + C1 + C3 + C5) / theta^{(3+delta)/2}. Throws ThetaZero at theta = 0,
/// where the bound diverges.
double gaussian_norm_constant(const RelaxationParams& p);

/// All constants at once; requires theta > 0 (for c_gaussian).
LemmaConstants lemma_constants(const RelaxationParams& p);

} // namespace polybgk
