#include "polybgk/moments.hpp"

#include <cmath>

namespace polybgk {

MacroFields compute_cell_moments(std::span<const double> cell,
                                 const PhaseSpaceGrid& grid) {
    const std::size_t nv = grid.n_v();
    const auto n = static_cast<std::size_t>(grid.v_count);

    // First pass: mass and momentum.
    double rho = 0.0;
    Vec3 mom{};
    for (int ii = 0; ii < grid.i_count; ++ii) {
        const double wi = grid.i_weights[ii];
        const double* f = cell.data() + static_cast<std::size_t>(ii) * nv;
        double m0 = 0.0, mx = 0.0, my = 0.0, mz = 0.0;
        std::size_t iv = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c, ++iv) {
                    const double fv = f[iv];
                    m0 += fv;
                    mx += fv * grid.v_axis[a];
                    my += fv * grid.v_axis[b];
                    mz += fv * grid.v_axis[c];
                }
        rho += wi * m0;
        mom.x += wi * mx;
        mom.y += wi * my;
        mom.z += wi * mz;
    }
    rho *= grid.v_weight;
    mom = mom * grid.v_weight;
    if (!(rho > kDensityFloor)) throw VacuumCell("cell density below floor");

    MacroFields m;
    m.rho = rho;
    m.U = mom * (1.0 / rho);

    // Second pass: central moments, so Theta is PSD and trace(Theta) equals
    // 3 T_tr by construction.
    Sym3 second{};
    double e_int = 0.0;
    for (int ii = 0; ii < grid.i_count; ++ii) {
        const double wi = grid.i_weights[ii];
        const double u = grid.i_energy[ii];
        const double* f = cell.data() + static_cast<std::size_t>(ii) * nv;
        double sxx = 0.0, syy = 0.0, szz = 0.0, sxy = 0.0, sxz = 0.0, syz = 0.0;
        double mass = 0.0;
        std::size_t iv = 0;
        for (std::size_t a = 0; a < n; ++a) {
            const double wx = grid.v_axis[a] - m.U.x;
            for (std::size_t b = 0; b < n; ++b) {
                const double wy = grid.v_axis[b] - m.U.y;
                for (std::size_t c = 0; c < n; ++c, ++iv) {
                    const double wz = grid.v_axis[c] - m.U.z;
                    const double fv = f[iv];
                    mass += fv;
                    sxx += fv * wx * wx;
                    syy += fv * wy * wy;
                    szz += fv * wz * wz;
                    sxy += fv * wx * wy;
                    sxz += fv * wx * wz;
                    syz += fv * wy * wz;
                }
            }
        }
        second.xx += wi * sxx;
        second.yy += wi * syy;
        second.zz += wi * szz;
        second.xy += wi * sxy;
        second.xz += wi * sxz;
        second.yz += wi * syz;
        e_int += wi * u * mass;
    }
    second = second * grid.v_weight;
    e_int *= grid.v_weight;

    m.Theta = second * (1.0 / rho);
    m.E_tr = 0.5 * second.trace();
    m.E_int = e_int;
    m.T_tr = m.Theta.trace() / 3.0;
    m.T_int = 2.0 * e_int / (grid.delta * rho);
    m.T_total = (3.0 * m.T_tr + grid.delta * m.T_int) / (3.0 + grid.delta);
    return m;
}

std::vector<MacroFields> compute_moments(const DistributionFunction& f,
                                         const PhaseSpaceGrid& grid) {
    std::vector<MacroFields> out;
    out.reserve(grid.x_count);
    for (int ix = 0; ix < grid.x_count; ++ix)
        out.push_back(compute_cell_moments(f.cell(grid, ix), grid));
    return out;
}

GaussianParams relaxation_fields(const MacroFields& m,
                                 const RelaxationParams& p) {
    if (!(m.rho > 0.0)) throw VacuumCell("relaxation fields need rho > 0");
    if (!(m.T_total > 0.0))
        throw NonSPDTensor("relaxation fields need T_total > 0");
    GaussianParams gp;
    gp.T_theta = p.theta * m.T_total + (1.0 - p.theta) * m.T_int;
    gp.Tensor = Sym3::scaled_identity(p.theta * m.T_total) +
                (1.0 - p.theta) *
                    (Sym3::scaled_identity((1.0 - p.nu) * m.T_tr) +
                     p.nu * m.Theta);
    gp.factor = Chol3::factor(gp.Tensor);
    return gp;
}

} // namespace polybgk
