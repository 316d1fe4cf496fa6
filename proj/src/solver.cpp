#include "polybgk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polybgk/diagnostics.hpp"
#include "polybgk/parallel.hpp"

namespace polybgk {

namespace {

int wrap(long i, int n) {
    long r = i % n;
    if (r < 0) r += n;
    return static_cast<int>(r);
}

} // namespace

DistributionFunction transport_step(const DistributionFunction& f, double dt,
                                    const PhaseSpaceGrid& grid,
                                    TransportInterp interp, int threads,
                                    double* clipped_mass) {
    if (grid.x_count == 1) return f;

    DistributionFunction out;
    out.values.resize(f.values.size());
    const auto n = static_cast<std::size_t>(grid.v_count);
    const std::size_t plane = n * n;       // contiguous (b, c) block per v_x
    const std::size_t cell = grid.cell_values();
    const int nx = grid.x_count;
    std::vector<double> clipped_per_axis(n, 0.0);

    parallel_for(n, threads, [&](std::size_t a) {
        const double shift = grid.v_axis[a] * dt / grid.dx; // in cell units
        const double frac_pos = -shift;
        const long off = static_cast<long>(std::floor(frac_pos));
        const double w = frac_pos - static_cast<double>(off);
        double clipped = 0.0;

        for (int ix = 0; ix < nx; ++ix) {
            for (int ii = 0; ii < grid.i_count; ++ii) {
                double* dst = out.values.data() +
                              static_cast<std::size_t>(ix) * cell +
                              static_cast<std::size_t>(ii) * n * plane +
                              a * plane;
                auto src = [&](long j) {
                    return f.values.data() +
                           static_cast<std::size_t>(wrap(ix + j, nx)) * cell +
                           static_cast<std::size_t>(ii) * n * plane + a * plane;
                };
                if (interp == TransportInterp::Linear) {
                    const double* s0 = src(off);
                    const double* s1 = src(off + 1);
                    const double c0 = 1.0 - w;
                    for (std::size_t k = 0; k < plane; ++k)
                        dst[k] = c0 * s0[k] + w * s1[k];
                } else {
                    // 4-point Lagrange stencil; may overshoot, clipped at 0.
                    const double* sm = src(off - 1);
                    const double* s0 = src(off);
                    const double* s1 = src(off + 1);
                    const double* s2 = src(off + 2);
                    const double lm = -w * (w - 1.0) * (w - 2.0) / 6.0;
                    const double l0 = (w + 1.0) * (w - 1.0) * (w - 2.0) / 2.0;
                    const double l1 = -(w + 1.0) * w * (w - 2.0) / 2.0;
                    const double l2 = (w + 1.0) * w * (w - 1.0) / 6.0;
                    const double wi = grid.i_weights[ii];
                    for (std::size_t k = 0; k < plane; ++k) {
                        double v = lm * sm[k] + l0 * s0[k] + l1 * s1[k] +
                                   l2 * s2[k];
                        if (v < 0.0) {
                            clipped += -v * wi;
                            v = 0.0;
                        }
                        dst[k] = v;
                    }
                }
            }
        }
        clipped_per_axis[a] = clipped;
    });

    if (clipped_mass) {
        // Fixed-order reduction; independent of the thread count.
        double total = 0.0;
        for (double c : clipped_per_axis) total += c;
        *clipped_mass += total * grid.v_weight * grid.dx;
    }
    return out;
}

std::vector<RelaxationCellInfo> relaxation_step(DistributionFunction& f,
                                                double dt,
                                                const RelaxationParams& params,
                                                const PhaseSpaceGrid& grid,
                                                bool conservation_fix,
                                                int threads) {
    std::vector<RelaxationCellInfo> infos(grid.x_count);
    const double decay = std::exp(-params.A * dt);
    const double gain = 1.0 - decay;
    std::vector<std::exception_ptr> errors(grid.x_count);

    parallel_for(static_cast<std::size_t>(grid.x_count), threads,
                 [&](std::size_t ix) {
        try {
            auto cell = f.cell(grid, static_cast<int>(ix));
            auto& info = infos[ix];
            info.m = compute_cell_moments(cell, grid);
            const GaussianParams gp = relaxation_fields(info.m, params);
            GaussianField M = evaluate_gaussian(info.m, gp, grid);
            info.defect = conservation_defect(cell, M, grid);
            if (conservation_fix) {
                const auto target = cell_invariants(cell, grid);
                M = conservative_correction(M, target, grid);
            }
            for (std::size_t k = 0; k < cell.size(); ++k)
                cell[k] = decay * cell[k] + gain * M.values[k];
        } catch (...) {
            errors[ix] = std::current_exception();
        }
    });

    for (int ix = 0; ix < grid.x_count; ++ix)
        if (errors[ix]) std::rethrow_exception(errors[ix]);
    return infos;
}

PhaseSpaceGrid marginal_grid(const PhaseSpaceGrid& grid) {
    PhaseSpaceGrid m = grid;
    m.i_count = 1;
    m.i_nodes = {1.0};
    m.i_weights = {1.0};
    m.i_energy = {0.0};
    return m;
}

MonatomicState marginalize_internal(const DistributionFunction& f,
                                    const PhaseSpaceGrid& grid) {
    MonatomicState s;
    const std::size_t nv = grid.n_v();
    s.g.values.assign(static_cast<std::size_t>(grid.x_count) * nv, 0.0);
    s.h.values.assign(static_cast<std::size_t>(grid.x_count) * nv, 0.0);
    for (int ix = 0; ix < grid.x_count; ++ix) {
        const double* cell = f.values.data() +
                             static_cast<std::size_t>(ix) * grid.cell_values();
        double* g = s.g.values.data() + static_cast<std::size_t>(ix) * nv;
        double* h = s.h.values.data() + static_cast<std::size_t>(ix) * nv;
        for (int ii = 0; ii < grid.i_count; ++ii) {
            const double wi = grid.i_weights[ii];
            const double wu = wi * grid.i_energy[ii];
            const double* p = cell + static_cast<std::size_t>(ii) * nv;
            for (std::size_t iv = 0; iv < nv; ++iv) {
                g[iv] += wi * p[iv];
                h[iv] += wu * p[iv];
            }
        }
    }
    return s;
}

namespace {

// rho det(2 pi T)^{-1/2} exp(-(v-U)^T T^{-1} (v-U)/2) on the marginal grid.
std::vector<double> evaluate_monatomic_gaussian(const MacroFields& m,
                                                const Chol3& factor,
                                                const PhaseSpaceGrid& mgrid) {
    std::vector<double> out(mgrid.n_v());
    const double log_coef = std::log(m.rho) -
                            0.5 * (3.0 * std::log(2.0 * M_PI) + factor.log_det);
    const double coef = std::exp(log_coef);
    const auto n = static_cast<std::size_t>(mgrid.v_count);
    std::size_t iv = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c, ++iv) {
                const Vec3 w{mgrid.v_axis[a] - m.U.x, mgrid.v_axis[b] - m.U.y,
                             mgrid.v_axis[c] - m.U.z};
                const double arg = 0.5 * factor.inv_quad(w);
                out[iv] = arg > -kUnderflowExponent ? 0.0 : coef * std::exp(-arg);
            }
    return out;
}

} // namespace

void monatomic_relaxation_step(MonatomicState& state, double dt, double nu,
                               const PhaseSpaceGrid& mgrid, double delta,
                               bool conservation_fix) {
    const double a0 = collision_frequency(nu, 0.0);
    const double decay = std::exp(-a0 * dt);
    const double gain = 1.0 - decay;
    const std::size_t nv = mgrid.n_v();

    for (int ix = 0; ix < mgrid.x_count; ++ix) {
        auto gcell = state.g.cell(mgrid, ix);
        auto hcell = state.h.cell(mgrid, ix);
        const MacroFields m = compute_cell_moments(gcell, mgrid);
        const Sym3 tensor = Sym3::scaled_identity((1.0 - nu) * m.T_tr) +
                            nu * m.Theta;
        const Chol3 factor = Chol3::factor(tensor);
        std::vector<double> target = evaluate_monatomic_gaussian(m, factor, mgrid);

        double e_int = 0.0;
        for (std::size_t iv = 0; iv < nv; ++iv) e_int += hcell[iv];
        e_int *= mgrid.v_weight;
        const double t_int = 2.0 * e_int / (delta * m.rho);

        if (conservation_fix) {
            // Tilt on g's invariants; h keeps its internal energy by an exact
            // rescale of the relaxation target.
            GaussianField wrapped;
            wrapped.values = target;
            wrapped.m = m;
            const auto inv = cell_invariants(gcell, mgrid);
            wrapped = conservative_correction(wrapped, inv, mgrid);
            target = std::move(wrapped.values);
        }
        double target_mass = 0.0;
        for (std::size_t iv = 0; iv < nv; ++iv) target_mass += target[iv];
        target_mass *= mgrid.v_weight;
        const double h_scale =
            conservation_fix ? e_int / target_mass : 0.5 * delta * t_int;

        for (std::size_t iv = 0; iv < nv; ++iv) {
            gcell[iv] = decay * gcell[iv] + gain * target[iv];
            hcell[iv] = decay * hcell[iv] + gain * h_scale * target[iv];
        }
    }
}

namespace {

long step_count(const SolverConfig& c) {
    if (!(c.dt > 0.0) || !(c.t_final >= c.dt))
        throw ValidationError("need 0 < dt <= t_final");
    const double ratio = c.t_final / c.dt;
    long n = std::lround(ratio);
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9)
        n = static_cast<long>(std::ceil(ratio));
    return n;
}

StepRecord make_record(const DistributionFunction& f,
                       const PhaseSpaceGrid& grid, long step, double t,
                       std::span<const double> norm_table,
                       const std::vector<ConservationDefect>& defects,
                       double clipped) {
    StepRecord rec;
    rec.step = step;
    rec.t = t;
    rec.clipped_mass = clipped;
    rec.norm_q = weighted_sup_norm(f, grid, norm_table);
    rec.cells.resize(grid.x_count);
    for (int ix = 0; ix < grid.x_count; ++ix) {
        auto cell = f.cell(grid, ix);
        rec.cells[ix].m = compute_cell_moments(cell, grid);
        rec.cells[ix].entropy = entropy_cell(cell, grid);
        rec.cells[ix].defect = defects[ix];
        rec.entropy_total += grid.x_weight() * rec.cells[ix].entropy;
    }
    return rec;
}

RunResult run_polyatomic(const SolverConfig& config,
                         const PhaseSpaceGrid& grid,
                         const RelaxationParams& params,
                         const DistributionFunction& f0) {
    RunResult result;
    const long n_steps = step_count(config);
    const auto norm_table = norm_weight_table(grid, params.q);

    DistributionFunction f = f0;
    double clipped = 0.0;

    // t = 0 record; the reported defect is of the initial field's Gaussian.
    std::vector<ConservationDefect> defects(grid.x_count);
    for (int ix = 0; ix < grid.x_count; ++ix) {
        auto cell = f.cell(grid, ix);
        const MacroFields m = compute_cell_moments(cell, grid);
        defects[ix] =
            conservation_defect(cell, evaluate_gaussian(m, relaxation_fields(m, params), grid), grid);
        result.initial_min_density =
            ix == 0 ? m.rho : std::fmin(result.initial_min_density, m.rho);
    }
    result.series.push_back(
        make_record(f, grid, 0, 0.0, norm_table, defects, clipped));

    for (long n = 1; n <= n_steps; ++n) {
        try {
            if (config.splitting == SplitScheme::Strang && grid.x_count > 1) {
                f = transport_step(f, 0.5 * config.dt, grid, config.interp,
                                   config.threads, &clipped);
            } else if (grid.x_count > 1) {
                f = transport_step(f, config.dt, grid, config.interp,
                                   config.threads, &clipped);
            }
            auto infos = relaxation_step(f, config.dt, params, grid,
                                         config.conservation_fix,
                                         config.threads);
            if (config.splitting == SplitScheme::Strang && grid.x_count > 1)
                f = transport_step(f, 0.5 * config.dt, grid, config.interp,
                                   config.threads, &clipped);
            for (int ix = 0; ix < grid.x_count; ++ix)
                defects[ix] = infos[ix].defect;
        } catch (const VacuumCell& e) {
            std::ostringstream os;
            os << e.what() << " [aborted at step " << n << "]";
            throw VacuumCell(os.str());
        } catch (const ModelError& e) {
            std::ostringstream os;
            os << e.what() << " [aborted at step " << n << "]";
            throw NonSPDTensor(os.str());
        }
        if (n % config.output_interval == 0 || n == n_steps)
            result.series.push_back(make_record(
                f, grid, n, static_cast<double>(n) * config.dt, norm_table,
                defects, clipped));
    }
    result.final_state = std::move(f);
    return result;
}

// theta = 0: the polyatomic Gaussian splits and the marginal closes under the
// monatomic system, so evolution runs on (g, h). Records report the marginal
// entropy and the marginal weighted norm.
RunResult run_monatomic(const SolverConfig& config, const PhaseSpaceGrid& grid,
                        const RelaxationParams& params,
                        const DistributionFunction& f0) {
    RunResult result;
    const long n_steps = step_count(config);
    const PhaseSpaceGrid mgrid = marginal_grid(grid);
    const auto norm_table = norm_weight_table(mgrid, params.q);

    MonatomicState state = marginalize_internal(f0, grid);
    double clipped = 0.0;

    auto record = [&](long step, double t) {
        StepRecord rec;
        rec.step = step;
        rec.t = t;
        rec.clipped_mass = clipped;
        rec.norm_q = weighted_sup_norm(state.g, mgrid, norm_table);
        rec.cells.resize(mgrid.x_count);
        for (int ix = 0; ix < mgrid.x_count; ++ix) {
            auto gcell = state.g.cell(mgrid, ix);
            auto hcell = state.h.cell(mgrid, ix);
            MacroFields m = compute_cell_moments(gcell, mgrid);
            double e_int = 0.0;
            for (double h : hcell) e_int += h;
            e_int *= mgrid.v_weight;
            m.E_int = e_int;
            m.T_int = 2.0 * e_int / (grid.delta * m.rho);
            m.T_total =
                (3.0 * m.T_tr + grid.delta * m.T_int) / (3.0 + grid.delta);
            rec.cells[ix].m = m;
            rec.cells[ix].entropy = entropy_cell(gcell, mgrid);
            rec.entropy_total += mgrid.x_weight() * rec.cells[ix].entropy;
        }
        result.series.push_back(std::move(rec));
    };

    for (int ix = 0; ix < mgrid.x_count; ++ix) {
        const double rho =
            compute_cell_moments(state.g.cell(mgrid, ix), mgrid).rho;
        result.initial_min_density =
            ix == 0 ? rho : std::fmin(result.initial_min_density, rho);
    }
    record(0, 0.0);

    for (long n = 1; n <= n_steps; ++n) {
        try {
            if (mgrid.x_count > 1) {
                const double dt_t = config.splitting == SplitScheme::Strang
                                        ? 0.5 * config.dt
                                        : config.dt;
                state.g = transport_step(state.g, dt_t, mgrid, config.interp,
                                         config.threads, &clipped);
                state.h = transport_step(state.h, dt_t, mgrid, config.interp,
                                         config.threads, nullptr);
            }
            monatomic_relaxation_step(state, config.dt, params.nu, mgrid,
                                      grid.delta, config.conservation_fix);
            if (config.splitting == SplitScheme::Strang && mgrid.x_count > 1) {
                state.g = transport_step(state.g, 0.5 * config.dt, mgrid,
                                         config.interp, config.threads,
                                         &clipped);
                state.h = transport_step(state.h, 0.5 * config.dt, mgrid,
                                         config.interp, config.threads,
                                         nullptr);
            }
        } catch (const VacuumCell& e) {
            std::ostringstream os;
            os << e.what() << " [aborted at step " << n << "]";
            throw VacuumCell(os.str());
        } catch (const ModelError& e) {
            std::ostringstream os;
            os << e.what() << " [aborted at step " << n << "]";
            throw NonSPDTensor(os.str());
        }
        if (n % config.output_interval == 0 || n == n_steps)
            record(n, static_cast<double>(n) * config.dt);
    }
    result.final_state = std::move(state.g);
    return result;
}

} // namespace

RunResult run_simulation(const SolverConfig& config,
                         const PhaseSpaceGrid& grid,
                         const RelaxationParams& params,
                         const DistributionFunction& f0) {
    if (config.output_interval < 1)
        throw ValidationError("output_interval must be >= 1");
    if (params.theta == 0.0)
        return run_monatomic(config, grid, params, f0);
    return run_polyatomic(config, grid, params, f0);
}

PicardResult picard_iterate(const DistributionFunction& f0, double t,
                            const RelaxationParams& params,
                            const PhaseSpaceGrid& grid, int iterations,
                            int time_nodes, PicardStart start) {
    if (grid.x_count != 1)
        throw ValidationError("picard iteration requires homogeneous mode");
    if (iterations < 1 || time_nodes < 2)
        throw ValidationError("picard needs iterations >= 1, time_nodes >= 2");
    if (!(t > 0.0)) throw ValidationError("picard needs t > 0");

    const int s = time_nodes;
    const double dt = t / (s - 1);
    const std::size_t cell = grid.cell_values();
    const auto norm_table = norm_weight_table(grid, params.q);

    std::vector<std::vector<double>> prev(s), next(s);
    for (int j = 0; j < s; ++j) {
        prev[j].assign(cell, 0.0);
        next[j].assign(cell, 0.0);
        if (start == PicardStart::InitialData) prev[j] = f0.values;
    }

    PicardResult result;
    for (int k = 0; k < iterations; ++k) {
        for (int j = 0; j < s; ++j) {
            const double decay = std::exp(-params.A * j * dt);
            for (std::size_t q = 0; q < cell; ++q)
                next[j][q] = decay * f0.values[q];
        }
        const bool zero_gaussian = (k == 0 && start == PicardStart::Zero);
        if (!zero_gaussian) {
            for (int m = 0; m < s; ++m) {
                const MacroFields mom = compute_cell_moments(prev[m], grid);
                const GaussianField M =
                    evaluate_gaussian(mom, relaxation_fields(mom, params), grid);
                for (int j = std::max(m, 1); j < s; ++j) {
                    const double w = (m == 0 || m == j) ? 0.5 * dt : dt;
                    const double factor =
                        params.A * w * std::exp(-params.A * (j - m) * dt);
                    double* dst = next[j].data();
                    const double* src = M.values.data();
                    for (std::size_t q = 0; q < cell; ++q)
                        dst[q] += factor * src[q];
                }
            }
        }
        double d = 0.0, norm = 0.0;
        for (std::size_t q = 0; q < cell; ++q) {
            d = std::fmax(d, std::abs(next[s - 1][q] - prev[s - 1][q]) *
                                 norm_table[q]);
            norm = std::fmax(norm, next[s - 1][q] * norm_table[q]);
        }
        result.d.push_back(d);
        result.norms.push_back(norm);
        std::swap(prev, next);
    }
    return result;
}

} // namespace polybgk
