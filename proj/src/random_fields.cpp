#include "polybgk/random_fields.hpp"

#include <cmath>

namespace polybgk {

double BumpFieldGenerator::uniform(double lo, double hi) {
    const double u =
        static_cast<double>(engine_() >> 11) * 0x1.0p-53; // [0, 1)
    return lo + (hi - lo) * u;
}

DistributionFunction BumpFieldGenerator::sample(const PhaseSpaceGrid& grid) {
    const int bumps = 1 + static_cast<int>(engine_() % 4);
    const double center_radius = std::fmin(1.5, 0.5 * grid.v_max);

    struct Bump {
        double weight;
        Vec3 center;
        Vec3 inv_two_var; // 1/(2 s_i^2) per axis
        double inv_t_int;
        double poly;      // linear coefficient in I^{2/delta}
    };
    std::vector<Bump> spec(bumps);
    for (auto& b : spec) {
        b.weight = uniform(0.5, 1.0);
        do {
            b.center = {uniform(-center_radius, center_radius),
                        uniform(-center_radius, center_radius),
                        uniform(-center_radius, center_radius)};
        } while (b.center.norm() > center_radius);
        const Vec3 var{uniform(0.6, 1.4), uniform(0.6, 1.4),
                       uniform(0.6, 1.4)};
        b.inv_two_var = {0.5 / var.x, 0.5 / var.y, 0.5 / var.z};
        b.inv_t_int = 1.0 / uniform(0.7, 1.4);
        b.poly = uniform(0.0, 0.4);
    }

    DistributionFunction f;
    f.values.assign(grid.total_values(), 0.0);
    const auto n = static_cast<std::size_t>(grid.v_count);
    std::vector<double> vpart(grid.n_v());
    std::vector<double> cell0(grid.cell_values(), 0.0);

    for (const auto& b : spec) {
        std::size_t iv = 0;
        for (std::size_t a = 0; a < n; ++a) {
            const double ax = grid.v_axis[a] - b.center.x;
            for (std::size_t bb = 0; bb < n; ++bb) {
                const double ay = grid.v_axis[bb] - b.center.y;
                const double partial =
                    ax * ax * b.inv_two_var.x + ay * ay * b.inv_two_var.y;
                for (std::size_t c = 0; c < n; ++c, ++iv) {
                    const double az = grid.v_axis[c] - b.center.z;
                    vpart[iv] = b.weight *
                                std::exp(-(partial +
                                           az * az * b.inv_two_var.z));
                }
            }
        }
        std::size_t k = 0;
        for (int ii = 0; ii < grid.i_count; ++ii) {
            const double u = grid.i_energy[ii];
            const double ipart =
                std::exp(-u * b.inv_t_int) * (1.0 + b.poly * u);
            for (iv = 0; iv < grid.n_v(); ++iv, ++k)
                cell0[k] += ipart * vpart[iv];
        }
    }

    for (int ix = 0; ix < grid.x_count; ++ix) {
        double* dst = f.values.data() +
                      static_cast<std::size_t>(ix) * grid.cell_values();
        for (std::size_t k = 0; k < cell0.size(); ++k) dst[k] = cell0[k];
    }
    return f;
}

} // namespace polybgk
