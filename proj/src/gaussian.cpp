#include "polybgk/gaussian.hpp"

#include <cmath>

namespace polybgk {

GaussianField evaluate_gaussian(const MacroFields& m, const GaussianParams& gp,
                                const PhaseSpaceGrid& grid) {
    GaussianField out;
    out.m = m;
    out.params = gp;
    out.values.resize(grid.cell_values());

    const double lambda = lambda_delta(grid.delta);
    const double log_coef = std::log(m.rho * lambda) -
                            0.5 * (3.0 * std::log(2.0 * M_PI) +
                                   gp.factor.log_det) -
                            0.5 * grid.delta * std::log(gp.T_theta);
    const double coef = std::exp(log_coef);

    // The exponent separates into a velocity part and an internal part; only
    // the zero cutoff couples them.
    std::vector<double> vexp(grid.n_v()), varg(grid.n_v());
    const auto n = static_cast<std::size_t>(grid.v_count);
    std::size_t iv = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c, ++iv) {
                const Vec3 w{grid.v_axis[a] - m.U.x, grid.v_axis[b] - m.U.y,
                             grid.v_axis[c] - m.U.z};
                varg[iv] = 0.5 * gp.factor.inv_quad(w);
                vexp[iv] = std::exp(-varg[iv]);
            }

    std::size_t k = 0;
    for (int ii = 0; ii < grid.i_count; ++ii) {
        const double iarg = grid.i_energy[ii] / gp.T_theta;
        const double iexp = std::exp(-iarg);
        for (iv = 0; iv < grid.n_v(); ++iv, ++k)
            out.values[k] = (varg[iv] + iarg > -kUnderflowExponent)
                                ? 0.0
                                : coef * vexp[iv] * iexp;
    }
    return out;
}

std::array<double, 5> cell_invariants(std::span<const double> cell,
                                      const PhaseSpaceGrid& grid) {
    const std::size_t nv = grid.n_v();
    const auto n = static_cast<std::size_t>(grid.v_count);
    std::array<double, 5> inv{};
    for (int ii = 0; ii < grid.i_count; ++ii) {
        const double wi = grid.i_weights[ii];
        const double u = grid.i_energy[ii];
        const double* f = cell.data() + static_cast<std::size_t>(ii) * nv;
        double m0 = 0.0, mx = 0.0, my = 0.0, mz = 0.0, me = 0.0;
        std::size_t iv = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c, ++iv) {
                    const double fv = f[iv];
                    m0 += fv;
                    mx += fv * grid.v_axis[a];
                    my += fv * grid.v_axis[b];
                    mz += fv * grid.v_axis[c];
                    me += fv * (0.5 * grid.v_sq[iv] + u);
                }
        inv[0] += wi * m0;
        inv[1] += wi * mx;
        inv[2] += wi * my;
        inv[3] += wi * mz;
        inv[4] += wi * me;
    }
    for (double& x : inv) x *= grid.v_weight;
    return inv;
}

namespace {

// Scales that keep the relative defect finite for resting flows: mass by rho,
// momentum by rho (|U| + sqrt(T_total)), energy by the total energy.
std::array<double, 5> invariant_scales(const std::array<double, 5>& inv) {
    const double rho = inv[0];
    const Vec3 mom{inv[1], inv[2], inv[3]};
    const double energy = inv[4];
    const double speed = mom.norm() / rho;
    const double e_centered = energy - 0.5 * rho * speed * speed;
    const double t_like =
        std::fmax(e_centered, 0.0) * 2.0 / (5.0 * rho); // crude, scale only
    const double mom_scale = rho * (speed + std::sqrt(t_like));
    return {rho, mom_scale, mom_scale, mom_scale, energy};
}

} // namespace

ConservationDefect conservation_defect(std::span<const double> f_cell,
                                       const PhaseSpaceGrid& grid,
                                       std::span<const double> m_cell) {
    const auto inv_f = cell_invariants(f_cell, grid);
    const auto inv_m = cell_invariants(m_cell, grid);
    const auto scale = invariant_scales(inv_f);
    ConservationDefect d;
    for (int i = 0; i < 5; ++i) {
        d.absolute[i] = inv_m[i] - inv_f[i];
        d.relative[i] = d.absolute[i] / scale[i];
    }
    return d;
}

ConservationDefect conservation_defect(std::span<const double> f_cell,
                                       const GaussianField& M,
                                       const PhaseSpaceGrid& grid) {
    return conservation_defect(f_cell, grid, M.values);
}

namespace {

// Dense Cholesky solve of the 5x5 SPD moment Gram system.
void solve_spd5(double a[5][5], double b[5]) {
    double l[5][5] = {};
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (!(s > 0.0))
                    throw CorrectionDiverged("singular moment system");
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    for (int i = 0; i < 5; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= l[i][k] * b[k];
        b[i] = s / l[i][i];
    }
    for (int i = 4; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < 5; ++k) s -= l[k][i] * b[k];
        b[i] = s / l[i][i];
    }
}

struct TiltState {
    std::vector<double> values;
    std::array<double, 5> moments{};
    double residual = 0.0;
};

} // namespace

GaussianField conservative_correction(const GaussianField& M,
                                      const std::array<double, 5>& target,
                                      const PhaseSpaceGrid& grid) {
    constexpr double kTol = 1e-13;
    constexpr int kMaxIter = 50;
    const auto scale = invariant_scales(target);
    const std::size_t nv = grid.n_v();
    const auto n = static_cast<std::size_t>(grid.v_count);

    TiltCoefficients lam{};
    std::vector<double> vfac(nv);
    std::vector<double> ifac(grid.i_count);

    auto evaluate = [&](const TiltCoefficients& t) {
        TiltState s;
        s.values.resize(grid.cell_values());
        const double ea = std::exp(t.a);
        std::size_t iv = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c, ++iv)
                    vfac[iv] = std::exp(t.b.x * grid.v_axis[a] +
                                        t.b.y * grid.v_axis[b] +
                                        t.b.z * grid.v_axis[c] +
                                        0.5 * t.c * grid.v_sq[iv]);
        for (int ii = 0; ii < grid.i_count; ++ii)
            ifac[ii] = std::exp(t.c * grid.i_energy[ii]);
        std::size_t k = 0;
        for (int ii = 0; ii < grid.i_count; ++ii)
            for (iv = 0; iv < nv; ++iv, ++k)
                s.values[k] = M.values[k] * ea * vfac[iv] * ifac[ii];
        s.moments = cell_invariants(s.values, grid);
        s.residual = 0.0;
        for (int i = 0; i < 5; ++i)
            s.residual = std::fmax(
                s.residual, std::abs(s.moments[i] - target[i]) / scale[i]);
        return s;
    };

    TiltState state = evaluate(lam);
    for (int iter = 0; iter < kMaxIter; ++iter) {
        if (state.residual <= kTol) {
            GaussianField out;
            out.values = std::move(state.values);
            out.m = M.m;
            out.params = M.params;
            lam.iterations = iter;
            out.tilt = lam;
            return out;
        }

        // Gram matrix of the invariants weighted by the current tilted field.
        double gram[5][5] = {};
        {
            const std::size_t stride = nv;
            for (int ii = 0; ii < grid.i_count; ++ii) {
                const double wi = grid.i_weights[ii];
                const double u = grid.i_energy[ii];
                const double* f = state.values.data() +
                                  static_cast<std::size_t>(ii) * stride;
                double acc[15] = {};
                std::size_t iv = 0;
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        for (std::size_t c = 0; c < n; ++c, ++iv) {
                            const double fv = f[iv];
                            const double psi[5] = {
                                1.0, grid.v_axis[a], grid.v_axis[b],
                                grid.v_axis[c], 0.5 * grid.v_sq[iv] + u};
                            int t = 0;
                            for (int i = 0; i < 5; ++i)
                                for (int j = i; j < 5; ++j, ++t)
                                    acc[t] += fv * psi[i] * psi[j];
                        }
                int t = 0;
                for (int i = 0; i < 5; ++i)
                    for (int j = i; j < 5; ++j, ++t) {
                        gram[i][j] += wi * acc[t];
                    }
            }
            for (int i = 0; i < 5; ++i)
                for (int j = i; j < 5; ++j) {
                    gram[i][j] *= grid.v_weight;
                    gram[j][i] = gram[i][j];
                }
        }

        double step[5];
        for (int i = 0; i < 5; ++i) step[i] = state.moments[i] - target[i];
        solve_spd5(gram, step);

        // Damped update: halve until the scaled residual decreases.
        double damping = 1.0;
        TiltState next;
        for (int half = 0; half < 12; ++half) {
            TiltCoefficients cand = lam;
            cand.a -= damping * step[0];
            cand.b.x -= damping * step[1];
            cand.b.y -= damping * step[2];
            cand.b.z -= damping * step[3];
            cand.c -= damping * step[4];
            next = evaluate(cand);
            if (next.residual < state.residual || half == 11) {
                lam = cand;
                break;
            }
            damping *= 0.5;
        }
        state = std::move(next);
    }
    throw CorrectionDiverged(
        "conservative correction did not converge in 50 iterations "
        "(grid too coarse for the requested moments)");
}

} // namespace polybgk
