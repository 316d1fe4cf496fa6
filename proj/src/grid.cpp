#include "polybgk/grid.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "polybgk/field_io.hpp"

namespace polybgk {

namespace {

void fill_gauss_laguerre(PhaseSpaceGrid& g) {
    if (g.i_count > 128)
        throw InvalidGrid("gauss internal grid supports at most 128 nodes");
    const double alpha = g.delta / 2.0 - 1.0;
    const double b = 1.0 / g.i_scale;
    using Table = std::unique_ptr<gsl_integration_fixed_workspace,
                                  decltype(&gsl_integration_fixed_free)>;
    Table ws(gsl_integration_fixed_alloc(gsl_integration_fixed_laguerre,
                                         static_cast<std::size_t>(g.i_count),
                                         0.0, b, alpha, 0.0),
             gsl_integration_fixed_free);
    if (!ws) throw InvalidGrid("failed to build gauss internal grid");
    const double* u = gsl_integration_fixed_nodes(ws.get());
    const double* w = gsl_integration_fixed_weights(ws.get());
    for (int j = 0; j < g.i_count; ++j) {
        if (!(w[j] > 0.0))
            throw InvalidGrid("gauss internal grid weight underflow; reduce i_count");
        // Convert measure weights u^alpha exp(-u/s) du to plain dI weights:
        // I = u^{delta/2}, dI = (delta/2) u^{delta/2-1} du. Assembled in log
        // space so the exp(+u/s) unwrapping cannot overflow.
        const double lw = std::log(w[j]) + u[j] / g.i_scale -
                          alpha * std::log(u[j]) +
                          std::log(g.delta / 2.0) +
                          (g.delta / 2.0 - 1.0) * std::log(u[j]);
        g.i_energy.push_back(u[j]);
        g.i_nodes.push_back(std::pow(u[j], g.delta / 2.0));
        g.i_weights.push_back(std::exp(lw));
    }
    g.i_max = g.i_nodes.back();
}

} // namespace

PhaseSpaceGrid build_grid(const GridConfig& config) {
    if (config.x_count < 1 || config.v_count < 2 || config.i_count < 1)
        throw InvalidGrid("grid counts must satisfy x >= 1, v >= 2, i >= 1");
    if (!(config.x_length > 0.0) || !(config.v_max > 0.0) ||
        !(config.delta > 0.0))
        throw InvalidGrid("grid cutoffs and delta must be positive");
    if (config.i_kind == InternalGridKind::Gauss && !(config.i_scale > 0.0))
        throw InvalidGrid("gauss internal grid needs i_scale > 0");

    PhaseSpaceGrid g;
    g.x_count = config.x_count;
    g.x_length = config.x_length;
    g.dx = config.x_length / config.x_count;
    g.v_count = config.v_count;
    g.v_max = config.v_max;
    g.dv = 2.0 * config.v_max / config.v_count;
    g.i_count = config.i_count;
    g.delta = config.delta;
    g.i_kind = config.i_kind;
    g.i_scale = config.i_scale;
    g.v_weight = g.dv * g.dv * g.dv;

    g.v_axis.resize(config.v_count);
    for (int j = 0; j < config.v_count; ++j)
        g.v_axis[j] = -config.v_max + (j + 0.5) * g.dv;

    g.v_sq.resize(g.n_v());
    const auto n = static_cast<std::size_t>(config.v_count);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                g.v_sq[(a * n + b) * n + c] = g.v_axis[a] * g.v_axis[a] +
                                              g.v_axis[b] * g.v_axis[b] +
                                              g.v_axis[c] * g.v_axis[c];

    switch (config.i_kind) {
    case InternalGridKind::Uniform: {
        // Default cutoff: exp(-i_max^{2/delta}) below 1e-12.
        g.i_max = config.i_max > 0.0
                      ? config.i_max
                      : std::pow(27.7, config.delta / 2.0);
        const double h = g.i_max / config.i_count;
        for (int j = 0; j < config.i_count; ++j) {
            const double node = (j + 0.5) * h;
            g.i_nodes.push_back(node);
            g.i_weights.push_back(h);
            g.i_energy.push_back(std::pow(node, 2.0 / config.delta));
        }
        break;
    }
    case InternalGridKind::Mapped: {
        g.i_max = config.i_max > 0.0
                      ? config.i_max
                      : std::pow(27.7, config.delta / 2.0);
        const double umax = std::pow(g.i_max, 2.0 / config.delta);
        const double hu = umax / config.i_count;
        for (int j = 0; j < config.i_count; ++j) {
            const double u = (j + 0.5) * hu;
            g.i_energy.push_back(u);
            g.i_nodes.push_back(std::pow(u, config.delta / 2.0));
            g.i_weights.push_back(config.delta / 2.0 *
                                  std::pow(u, config.delta / 2.0 - 1.0) * hu);
        }
        break;
    }
    case InternalGridKind::Gauss:
        fill_gauss_laguerre(g);
        break;
    }
    return g;
}

std::vector<double> norm_weight_table(const PhaseSpaceGrid& grid, double q) {
    std::vector<double> table(grid.cell_values());
    std::size_t k = 0;
    for (int ii = 0; ii < grid.i_count; ++ii) {
        const double u = grid.i_energy[ii];
        for (std::size_t iv = 0; iv < grid.n_v(); ++iv, ++k)
            table[k] = std::pow(1.0 + grid.v_sq[iv] + u, q / 2.0);
    }
    return table;
}

double weighted_sup_norm(const DistributionFunction& f,
                         const PhaseSpaceGrid& grid,
                         std::span<const double> weight_table) {
    double best = 0.0;
    const std::size_t cell = grid.cell_values();
    for (int ix = 0; ix < grid.x_count; ++ix) {
        const double* p = f.values.data() + static_cast<std::size_t>(ix) * cell;
        for (std::size_t k = 0; k < cell; ++k)
            best = std::fmax(best, p[k] * weight_table[k]);
    }
    return best;
}

double weighted_sup_norm(const DistributionFunction& f,
                         const PhaseSpaceGrid& grid, double q) {
    const auto table = norm_weight_table(grid, q);
    return weighted_sup_norm(f, grid, table);
}

namespace {

// Separable preset rho * Lambda (2 pi T_tr)^{-3/2} T_int^{-delta/2}
// exp(-|v-U|^2/(2 T_tr) - I^{2/delta}/T_int), optionally modulated in x.
DistributionFunction fill_preset(const PhaseSpaceGrid& g, double rho0,
                                 const Vec3& u0, double t_tr, double t_int,
                                 double lambda, double wave_amplitude,
                                 int wave_mode) {
    DistributionFunction f;
    f.values.assign(g.total_values(), 0.0);
    const double coef = rho0 * lambda *
                        std::pow(2.0 * M_PI * t_tr, -1.5) *
                        std::pow(t_int, -g.delta / 2.0);

    std::vector<double> vpart(g.n_v());
    const auto n = static_cast<std::size_t>(g.v_count);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                const Vec3 w{g.v_axis[a] - u0.x, g.v_axis[b] - u0.y,
                             g.v_axis[c] - u0.z};
                vpart[(a * n + b) * n + c] = std::exp(-w.norm2() / (2.0 * t_tr));
            }
    std::vector<double> ipart(g.i_count);
    for (int j = 0; j < g.i_count; ++j)
        ipart[j] = std::exp(-g.i_energy[j] / t_int);

    for (int ix = 0; ix < g.x_count; ++ix) {
        double density_factor = 1.0;
        if (wave_amplitude != 0.0)
            density_factor +=
                wave_amplitude *
                std::sin(2.0 * M_PI * wave_mode * g.x_center(ix) / g.x_length);
        double* cell = f.values.data() +
                       static_cast<std::size_t>(ix) * g.cell_values();
        std::size_t k = 0;
        for (int ii = 0; ii < g.i_count; ++ii)
            for (std::size_t iv = 0; iv < g.n_v(); ++iv, ++k)
                cell[k] = coef * density_factor * ipart[ii] * vpart[iv];
    }
    return f;
}

double gaussian_axis_tail(double cutoff, double center, double temperature) {
    // Mass fraction of a 1-D Maxwellian outside [-cutoff, cutoff].
    const double s = std::sqrt(2.0 * temperature);
    return 0.5 * (std::erfc((cutoff - center) / s) +
                  std::erfc((cutoff + center) / s));
}

double separable_tail_fraction(const PhaseSpaceGrid& g, const Vec3& u0,
                               double t_tr, double t_int) {
    double frac = gaussian_axis_tail(g.v_max, u0.x, t_tr) +
                  gaussian_axis_tail(g.v_max, u0.y, t_tr) +
                  gaussian_axis_tail(g.v_max, u0.z, t_tr);
    if (g.i_kind != InternalGridKind::Gauss) {
        // Internal mass beyond i_max: regularized upper incomplete gamma of
        // u_max / T_int.
        const double umax = std::pow(g.i_max, 2.0 / g.delta);
        frac += gsl_sf_gamma_inc_Q(g.delta / 2.0, umax / t_int);
    }
    return frac;
}

} // namespace

double preset_tail_fraction(const InitSpec& spec, const PhaseSpaceGrid& grid) {
    if (const auto* e = std::get_if<EquilibriumInit>(&spec))
        return separable_tail_fraction(grid, e->u0, e->T0, e->T0);
    if (const auto* t = std::get_if<TwoTemperatureInit>(&spec))
        return separable_tail_fraction(grid, t->u0, t->T_tr0, t->T_int0);
    if (const auto* w = std::get_if<SpatialWaveInit>(&spec))
        return separable_tail_fraction(grid, w->u0, w->T0, w->T0);
    return 0.0; // file data is taken as-is
}

DistributionFunction init_distribution(const InitSpec& spec,
                                       const PhaseSpaceGrid& grid,
                                       const RelaxationParams& params,
                                       double tail_limit) {
    const double tail = preset_tail_fraction(spec, grid);
    if (tail > tail_limit) {
        std::ostringstream os;
        os << "estimated tail mass fraction " << tail << " exceeds limit "
           << tail_limit << "; enlarge v_max/i_max";
        throw CutoffTooSmall(os.str());
    }
    const double lambda = lambda_delta(params.delta);

    if (const auto* e = std::get_if<EquilibriumInit>(&spec))
        return fill_preset(grid, e->rho0, e->u0, e->T0, e->T0, lambda, 0.0, 0);
    if (const auto* t = std::get_if<TwoTemperatureInit>(&spec))
        return fill_preset(grid, t->rho0, t->u0, t->T_tr0, t->T_int0, lambda,
                           0.0, 0);
    if (const auto* w = std::get_if<SpatialWaveInit>(&spec)) {
        if (std::abs(w->amplitude) >= 1.0)
            throw ValidationError("spatial_wave amplitude must stay below 1 "
                                  "to keep f nonnegative");
        return fill_preset(grid, w->rho0, w->u0, w->T0, w->T0, lambda,
                           w->amplitude, w->mode);
    }
    const auto& file = std::get<FileInit>(spec);
    auto loaded = load_field(file.path);
    if (loaded.grid.x_count != grid.x_count ||
        loaded.grid.v_count != grid.v_count ||
        loaded.grid.i_count != grid.i_count ||
        loaded.grid.v_max != grid.v_max || loaded.grid.i_max != grid.i_max ||
        loaded.grid.delta != grid.delta || loaded.grid.i_kind != grid.i_kind)
        throw ValidationError("field file header does not match the grid");
    for (double v : loaded.field.values)
        if (v < 0.0) throw NegativeInput("field file contains negative values");
    return std::move(loaded.field);
}

} // namespace polybgk
