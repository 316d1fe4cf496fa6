#include "polybgk/params.hpp"

#include <cmath>
#include <sstream>

namespace polybgk {

namespace {

constexpr double kDegenerateThreshold = 1e-12;

std::string range_message(const char* what, double value, const char* range) {
    std::ostringstream os;
    os << what << " = " << value << " outside " << range;
    return os.str();
}

} // namespace

double collision_frequency(double nu, double theta) {
    const double denom = 1.0 - nu + nu * theta;
    if (denom <= kDegenerateThreshold) {
        throw DegenerateFrequency(range_message("1 - nu + nu*theta", denom,
                                                "(1e-12, inf)"));
    }
    return 1.0 / denom;
}

RelaxationParams RelaxationParams::make(double nu, double theta, double delta,
                                        double q) {
    if (!(nu > -0.5 && nu < 1.0))
        throw ValidationError(range_message("nu", nu, "(-1/2, 1)"));
    if (!(theta >= 0.0 && theta <= 1.0))
        throw ValidationError(range_message("theta", theta, "[0, 1]"));
    if (!(delta > 0.0))
        throw ValidationError(range_message("delta", delta, "(0, inf)"));
    if (!(q > 5.0 + delta))
        throw ValidationError("q must exceed 5+delta; got q = " +
                              std::to_string(q) + ", delta = " +
                              std::to_string(delta));
    RelaxationParams p;
    p.nu = nu;
    p.theta = theta;
    p.delta = delta;
    p.q = q;
    p.A = collision_frequency(nu, theta);
    return p;
}

double lambda_delta(double delta) {
    if (!(delta > 0.0))
        throw ValidationError(range_message("delta", delta, "(0, inf)"));
    return 1.0 / std::tgamma(delta / 2.0 + 1.0);
}

double lambda_delta_quadrature(double delta, std::size_t n) {
    // For delta < 2 the integrand exp(-I^{2/delta}) is C^1 at I = 0 and decays
    // fast at both ends, so plain midpoint converges cleanly. For delta >= 2
    // substitute w = I^{1/delta}: the integrand delta w^{delta-1} exp(-w^2)
    // keeps a bounded derivative at the origin.
    if (delta < 2.0) {
        const double imax = std::pow(38.0, delta / 2.0);
        const double h = imax / static_cast<double>(n);
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double i = (static_cast<double>(j) + 0.5) * h;
            sum += std::exp(-std::pow(i, 2.0 / delta));
        }
        return 1.0 / (sum * h);
    }
    const double wmax = 6.5;
    const double h = wmax / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = (static_cast<double>(j) + 0.5) * h;
        sum += std::pow(w, delta - 1.0) * std::exp(-w * w);
    }
    return 1.0 / (delta * sum * h);
}

double lemma_cnu(double nu) { return std::fmax(1.0 - nu, 1.0 + 2.0 * nu); }

double lemma_density_constant(double delta) {
    return std::pow(2.0, 3.5) * M_PI * M_PI *
           std::pow(3.0 + delta, (1.0 + delta) / 2.0) * delta;
}

double lemma_tail_constant(double delta, double q) {
    return std::pow(2.0, (q - 2.0 * delta - 1.0) / 2.0) * M_PI * M_PI *
           std::pow(3.0 + delta, q / 2.0) * delta / (q - delta - 5.0);
}

double lemma_momentum_constant(double delta, double q) {
    return std::pow(2.0, (11.0 + 2.0 * delta + 2.0 * q) / 2.0) * M_PI * M_PI *
           std::pow(3.0 + delta, 2.0 + delta) * delta;
}

double gaussian_norm_constant(const RelaxationParams& p) {
    if (p.theta == 0.0)
        throw ThetaZero("gaussian norm constant diverges at theta = 0");
    const double delta = p.delta, q = p.q, theta = p.theta;
    const double inv_tp = std::pow(2.0 * M_PI, -1.5);
    // sup_{x>=0} x^{q/2} e^{-x} attained at x = q/2.
    const double sup = std::pow(q / 2.0, q / 2.0) * std::exp(-q / 2.0);
    const double tail = lemma_tail_constant(delta, q);
    const double c0 = inv_tp * lemma_density_constant(delta);
    const double c1 =
        std::pow(2.0, (q - 2.0 * delta - 4.0) / 2.0) * std::sqrt(M_PI) *
            std::pow(3.0 + delta, q / 2.0) * delta / (q - delta - 5.0) +
        std::pow(2.0, (11.0 + 3.0 * delta + 2.0 * q) / 2.0) * std::sqrt(M_PI) *
            std::pow(3.0 + delta, 2.0 + delta) * delta;
    const double c2 =
        inv_tp * sup *
        std::pow(2.0 * lemma_cnu(p.nu) * (3.0 + delta * (1.0 - theta)) / 3.0,
                 q / 2.0);
    const double c4 =
        inv_tp * sup * std::pow((delta + 3.0 * (1.0 - theta)) / delta, q / 2.0);
    return (c0 + c1 + c2 * tail + c4 * tail) /
           std::pow(theta, (3.0 + delta) / 2.0);
}

LemmaConstants lemma_constants(const RelaxationParams& p) {
    LemmaConstants c;
    c.c_nu = lemma_cnu(p.nu);
    c.c_density = lemma_density_constant(p.delta);
    c.c_tail = lemma_tail_constant(p.delta, p.q);
    c.c_momentum = lemma_momentum_constant(p.delta, p.q);
    c.c_gaussian = gaussian_norm_constant(p);
    c.c_growth = p.A * (c.c_gaussian - 1.0);
    return c;
}

} // namespace polybgk
