#include "polybgk/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace polybgk {

double entropy_cell(std::span<const double> cell, const PhaseSpaceGrid& grid) {
    const std::size_t nv = grid.n_v();
    double total = 0.0;
    for (int ii = 0; ii < grid.i_count; ++ii) {
        const double* f = cell.data() + static_cast<std::size_t>(ii) * nv;
        double s = 0.0;
        for (std::size_t iv = 0; iv < nv; ++iv)
            if (f[iv] > 0.0) s += f[iv] * std::log(f[iv]); // 0 ln 0 = 0
        total += grid.i_weights[ii] * s;
    }
    return total * grid.v_weight;
}

double entropy(const DistributionFunction& f, const PhaseSpaceGrid& grid) {
    double total = 0.0;
    for (int ix = 0; ix < grid.x_count; ++ix)
        total += grid.x_weight() * entropy_cell(f.cell(grid, ix), grid);
    return total;
}

bool DiagnosticsReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.skipped && !c.pass) return false;
    return true;
}

namespace {

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void add_check(DiagnosticsReport& report, const std::string& name,
               double measured, double bound) {
    CheckResult c;
    c.name = name;
    c.measured = measured;
    c.bound = bound;
    c.margin = measured == 0.0
                   ? std::numeric_limits<double>::infinity()
                   : bound / measured;
    c.pass = measured <= bound;
    report.checks.push_back(std::move(c));
}

void add_skipped(DiagnosticsReport& report, const std::string& name,
                 const std::string& note) {
    CheckResult c;
    c.name = name;
    c.skipped = true;
    c.note = note;
    report.checks.push_back(std::move(c));
}

} // namespace

DiagnosticsReport check_lemma_suite(const DistributionFunction& f,
                                    const RelaxationParams& p,
                                    const PhaseSpaceGrid& grid) {
    DiagnosticsReport report;
    const auto table = norm_weight_table(grid, p.q);
    const double norm_q = weighted_sup_norm(f, grid, table);
    const double c_nu = lemma_cnu(p.nu);
    const double c_density = lemma_density_constant(p.delta);
    const double c_tail = lemma_tail_constant(p.delta, p.q);
    const double c_momentum = lemma_momentum_constant(p.delta, p.q);

    // Worst cell per check. Upper bounds compare measured <= bound; the two
    // lower bounds are folded into the same convention by swapping sides.
    double tensor_low_measured = 0.0, tensor_low_bound = 0.0;
    double tensor_up_measured = 0.0, tensor_up_bound = 0.0;
    double ttheta_low_measured = 0.0, ttheta_low_bound = 0.0;
    double ttheta_up_measured = 0.0, ttheta_up_bound = 0.0;
    double density_measured = 0.0, density_bound = 0.0;
    double tail_measured = 0.0, tail_bound = 0.0;
    double momentum_measured = 0.0, momentum_bound = 0.0;
    double gauss_measured = 0.0, gauss_bound = 0.0;
    bool first = true;

    report.min_rho = 0.0;
    report.min_T = 0.0;
    report.max_rho_u_T = 0.0;

    for (int ix = 0; ix < grid.x_count; ++ix) {
        const MacroFields m = compute_cell_moments(f.cell(grid, ix), grid);
        const GaussianParams gp = relaxation_fields(m, p);
        const auto eig = sym3_eigenvalues(gp.Tensor);
        const double t_delta = m.T_total;

        // Equivalence estimates: theta T Id <= Tensor <= C (nu, delta) T Id
        // and the matching relaxation-temperature sandwich.
        const double lo_bound = p.theta * t_delta;
        const double up_bound =
            c_nu * (3.0 + p.delta * (1.0 - p.theta)) / 3.0 * t_delta;
        const double tt_up_bound =
            (p.delta + 3.0 * (1.0 - p.theta)) / p.delta * t_delta;

        const double rho_ut = m.rho + m.U.norm() + t_delta;
        if (first) {
            report.min_rho = m.rho;
            report.min_T = t_delta;
            report.max_rho_u_T = rho_ut;
        } else {
            report.min_rho = std::fmin(report.min_rho, m.rho);
            report.min_T = std::fmin(report.min_T, t_delta);
            report.max_rho_u_T = std::fmax(report.max_rho_u_T, rho_ut);
        }

        auto worse = [](double measured, double bound, double& wm, double& wb,
                        bool init) {
            // keep the pair with the smallest margin
            if (init || measured * wb > wm * bound) {
                wm = measured;
                wb = bound;
            }
        };
        worse(lo_bound, eig[2], tensor_low_measured, tensor_low_bound, first);
        worse(eig[0], up_bound, tensor_up_measured, tensor_up_bound, first);
        worse(lo_bound, gp.T_theta, ttheta_low_measured, ttheta_low_bound,
              first);
        worse(gp.T_theta, tt_up_bound, ttheta_up_measured, ttheta_up_bound,
              first);
        worse(m.rho,
              c_density * norm_q * std::pow(t_delta, (3.0 + p.delta) / 2.0),
              density_measured, density_bound, first);
        worse(m.rho * std::pow(t_delta + m.U.norm2(),
                               (p.q - p.delta - 3.0) / 2.0),
              c_tail * norm_q, tail_measured, tail_bound, first);
        worse(m.rho * std::pow(m.U.norm(), 3.0 + p.delta + p.q) /
                  std::pow((t_delta + m.U.norm2()) * t_delta,
                           (3.0 + p.delta) / 2.0),
              c_momentum * norm_q, momentum_measured, momentum_bound, first);

        if (p.theta > 0.0) {
            const GaussianField M = evaluate_gaussian(m, gp, grid);
            double mg = 0.0;
            for (std::size_t k = 0; k < M.values.size(); ++k)
                mg = std::fmax(mg, M.values[k] * table[k]);
            worse(mg, gaussian_norm_constant(p) * norm_q, gauss_measured,
                  gauss_bound, first);
        }
        first = false;
    }

    add_check(report, "tensor_lower", tensor_low_measured, tensor_low_bound);
    add_check(report, "tensor_upper", tensor_up_measured, tensor_up_bound);
    add_check(report, "relax_temp_lower", ttheta_low_measured,
              ttheta_low_bound);
    add_check(report, "relax_temp_upper", ttheta_up_measured, ttheta_up_bound);
    add_check(report, "density_bound", density_measured, density_bound);
    add_check(report, "tail_bound", tail_measured, tail_bound);
    add_check(report, "momentum_bound", momentum_measured, momentum_bound);
    if (p.theta > 0.0)
        add_check(report, "gaussian_norm_bound", gauss_measured, gauss_bound);
    else
        add_skipped(report, "gaussian_norm_bound",
                    "hypothesis violated: theta = 0 (bound diverges)");
    return report;
}

std::string DiagnosticsReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << "check: " << c.name << "\n";
        if (c.skipped) {
            os << "  status: skipped\n  note: " << c.note << "\n";
            continue;
        }
        os << "  measured: " << format_g(c.measured) << "\n"
           << "  bound: " << format_g(c.bound) << "\n"
           << "  margin: " << format_g(c.margin) << "\n"
           << "  status: " << (c.pass ? "pass" : "FAIL") << "\n";
    }
    os << "record: min_rho = " << format_g(min_rho)
       << ", min_T = " << format_g(min_T)
       << ", max_rho_u_T = " << format_g(max_rho_u_T) << "\n";
    return os.str();
}

std::string DiagnosticsReport::to_csv() const {
    std::ostringstream os;
    os << "name,measured,bound,margin,status\n";
    for (const auto& c : checks) {
        if (c.skipped) {
            os << c.name << ",,,,skipped\n";
            continue;
        }
        os << c.name << ',' << format_g(c.measured) << ',' << format_g(c.bound)
           << ',' << format_g(c.margin) << ','
           << (c.pass ? "pass" : "fail") << "\n";
    }
    return os.str();
}

HMonotonicityResult check_h_monotonicity(const std::vector<double>& h_series,
                                         double tol) {
    HMonotonicityResult r;
    r.tolerance = tol;
    r.worst_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < h_series.size(); ++i)
        r.worst_increase =
            std::fmax(r.worst_increase, h_series[i] - h_series[i - 1]);
    if (h_series.size() < 2) r.worst_increase = 0.0;
    r.pass = r.worst_increase <= tol;
    return r;
}

} // namespace polybgk
