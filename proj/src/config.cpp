#include "polybgk/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace polybgk {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool consumed = false;
};

using Section = std::map<std::string, Entry>;

struct RawConfig {
    std::map<std::string, Section> sections;
    std::vector<std::string>* log = nullptr;

    Entry* find(const std::string& sec, const std::string& key) {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.consumed = true;
        return &k->second;
    }

    void log_default(const std::string& sec, const std::string& key,
                     const std::string& value) {
        if (log) log->push_back(sec + "." + key + " = " + value + " (default)");
    }

    double get_double(const std::string& sec, const std::string& key,
                      double def) {
        Entry* e = find(sec, key);
        if (!e) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%g", def);
            log_default(sec, key, buf);
            return def;
        }
        try {
            std::size_t pos = 0;
            const double v = std::stod(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument(e->value);
            return v;
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(e->line) +
                             ": expected a number for " + sec + "." + key);
        }
    }

    long get_int(const std::string& sec, const std::string& key, long def) {
        const double v = get_double(sec, key, static_cast<double>(def));
        const long r = std::lround(v);
        if (static_cast<double>(r) != v)
            throw ValidationError(sec + "." + key + " must be an integer");
        return r;
    }

    bool get_bool(const std::string& sec, const std::string& key, bool def) {
        Entry* e = find(sec, key);
        if (!e) {
            log_default(sec, key, def ? "true" : "false");
            return def;
        }
        if (e->value == "true" || e->value == "1" || e->value == "yes")
            return true;
        if (e->value == "false" || e->value == "0" || e->value == "no")
            return false;
        throw ParseError("line " + std::to_string(e->line) +
                         ": expected a boolean for " + sec + "." + key);
    }

    std::string get_string(const std::string& sec, const std::string& key,
                           const std::string& def) {
        Entry* e = find(sec, key);
        if (!e) {
            log_default(sec, key, def.empty() ? "\"\"" : def);
            return def;
        }
        return e->value;
    }

    void reject_unconsumed() const {
        for (const auto& [sec, entries] : sections)
            for (const auto& [key, e] : entries)
                if (!e.consumed)
                    throw ParseError("line " + std::to_string(e.line) +
                                     ": unknown key " + sec + "." + key);
    }
};

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

RawConfig tokenize(const std::string& text) {
    static const char* kSections[] = {"model", "grid", "solver", "init",
                                      "output"};
    RawConfig raw;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("line " + std::to_string(lineno) +
                                 ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (std::find_if(std::begin(kSections), std::end(kSections),
                             [&](const char* s) { return section == s; }) ==
                std::end(kSections))
                throw ParseError("line " + std::to_string(lineno) +
                                 ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected key = value");
        if (section.empty())
            throw ParseError("line " + std::to_string(lineno) +
                             ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("line " + std::to_string(lineno) +
                             ": empty key or value");
        auto [it, fresh] =
            raw.sections[section].insert({key, Entry{value, lineno, false}});
        if (!fresh)
            throw ParseError("line " + std::to_string(lineno) +
                             ": duplicate key " + key);
    }
    return raw;
}

} // namespace

RunConfig parse_config(const std::string& text,
                       std::vector<std::string>* defaults_log) {
    RawConfig raw = tokenize(text);
    raw.log = defaults_log;
    RunConfig c;

    const double nu = raw.get_double("model", "nu", 0.0);
    const double theta = raw.get_double("model", "theta", 1.0);
    const double delta = raw.get_double("model", "delta", 2.0);
    const double q = raw.get_double("model", "q", delta + 6.0);
    c.params = RelaxationParams::make(nu, theta, delta, q); // range checks

    // Init first: grid cutoff defaults derive from the preset's scales.
    const std::string preset =
        raw.get_string("init", "preset", "equilibrium");
    const Vec3 u0{raw.get_double("init", "ux", 0.0),
                  raw.get_double("init", "uy", 0.0),
                  raw.get_double("init", "uz", 0.0)};
    const double rho0 = raw.get_double("init", "rho0", 1.0);
    const double t0 = raw.get_double("init", "T0", 1.0);
    const double t_tr0 = raw.get_double("init", "T_tr0", t0);
    const double t_int0 = raw.get_double("init", "T_int0", t0);
    const double amplitude = raw.get_double("init", "amplitude", 0.1);
    const long wave_mode = raw.get_int("init", "wave_mode", 1);
    const std::string init_path = raw.get_string("init", "path", "");
    c.tail_limit = raw.get_double("init", "tail_limit", 1e-9);
    if (!(rho0 > 0.0))
        throw ValidationError("init.rho0 must be positive");

    double t_max = t0, u_max = std::fmax(std::fmax(std::abs(u0.x),
                                                   std::abs(u0.y)),
                                         std::abs(u0.z));
    if (preset == "equilibrium") {
        if (!(t0 > 0.0)) throw ValidationError("init.T0 must be positive");
        c.init = EquilibriumInit{rho0, u0, t0};
    } else if (preset == "two_temperature") {
        if (!(t_tr0 > 0.0) || !(t_int0 > 0.0))
            throw ValidationError("init temperatures must be positive");
        c.init = TwoTemperatureInit{rho0, u0, t_tr0, t_int0};
        t_max = std::fmax(t_tr0, t_int0);
    } else if (preset == "spatial_wave") {
        if (!(t0 > 0.0)) throw ValidationError("init.T0 must be positive");
        if (!(std::abs(amplitude) < 1.0))
            throw ValidationError("init.amplitude must lie in (-1, 1)");
        c.init = SpatialWaveInit{amplitude, static_cast<int>(wave_mode), rho0,
                                 u0, t0};
    } else if (preset == "file") {
        if (init_path.empty())
            throw ValidationError("init.path required for the file preset");
        c.init = FileInit{init_path};
    } else {
        throw ValidationError("unknown init.preset: " + preset);
    }

    c.grid.x_count = static_cast<int>(raw.get_int("grid", "x_count", 1));
    c.grid.x_length = raw.get_double("grid", "x_length", 1.0);
    c.grid.v_count = static_cast<int>(raw.get_int("grid", "v_count", 32));
    c.grid.v_max =
        raw.get_double("grid", "v_max", u_max + 8.0 * std::sqrt(t_max));
    c.grid.i_count = static_cast<int>(raw.get_int("grid", "i_count", 32));
    c.grid.i_max = raw.get_double(
        "grid", "i_max", std::pow(27.7 * t_max, c.params.delta / 2.0));
    c.grid.delta = c.params.delta;
    const std::string ikind = raw.get_string("grid", "i_grid", "uniform");
    if (ikind == "uniform") c.grid.i_kind = InternalGridKind::Uniform;
    else if (ikind == "mapped") c.grid.i_kind = InternalGridKind::Mapped;
    else if (ikind == "gauss") c.grid.i_kind = InternalGridKind::Gauss;
    else throw ValidationError("grid.i_grid must be uniform, mapped or gauss");
    c.grid.i_scale = raw.get_double("grid", "i_scale", t_max);
    if (c.grid.x_count < 1 || c.grid.v_count < 2 || c.grid.i_count < 1)
        throw ValidationError("grid counts must satisfy x >= 1, v >= 2, i >= 1");

    c.solver.dt = raw.get_double("solver", "dt", 0.01);
    c.solver.t_final = raw.get_double("solver", "t_final", 1.0);
    if (!(c.solver.dt > 0.0) || c.solver.dt > c.solver.t_final)
        throw ValidationError("solver requires 0 < dt <= t_final");
    const std::string interp =
        raw.get_string("solver", "transport_interp", "linear");
    if (interp == "linear") c.solver.interp = TransportInterp::Linear;
    else if (interp == "cubic") c.solver.interp = TransportInterp::Cubic;
    else throw ValidationError("solver.transport_interp must be linear|cubic");
    const std::string split = raw.get_string("solver", "splitting", "lie");
    if (split == "lie") c.solver.splitting = SplitScheme::Lie;
    else if (split == "strang") c.solver.splitting = SplitScheme::Strang;
    else throw ValidationError("solver.splitting must be lie|strang");
    c.solver.conservation_fix =
        raw.get_bool("solver", "conservation_fix", false);
    const std::string mode = raw.get_string("solver", "mode", "evolve");
    if (mode == "evolve") c.solver.mode = RunMode::Evolve;
    else if (mode == "picard") c.solver.mode = RunMode::Picard;
    else throw ValidationError("solver.mode must be evolve|picard");
    c.solver.picard_iterations =
        static_cast<int>(raw.get_int("solver", "picard_iterations", 8));
    c.solver.picard_time_nodes =
        static_cast<int>(raw.get_int("solver", "picard_time_nodes", 33));
    if (c.solver.picard_iterations < 1 || c.solver.picard_time_nodes < 2)
        throw ValidationError(
            "picard needs iterations >= 1 and time_nodes >= 2");
    const std::string pstart =
        raw.get_string("solver", "picard_start", "zero");
    if (pstart == "zero") c.solver.picard_start = PicardStart::Zero;
    else if (pstart == "initial")
        c.solver.picard_start = PicardStart::InitialData;
    else throw ValidationError("solver.picard_start must be zero|initial");
    c.solver.threads =
        static_cast<int>(raw.get_int("solver", "threads", 1));
    if (c.solver.threads < 1)
        throw ValidationError("solver.threads must be >= 1");
    c.seed = static_cast<std::uint64_t>(
        raw.get_int("solver", "seed", 12345));
    c.check_samples =
        static_cast<int>(raw.get_int("solver", "check_samples", 500));
    if (c.check_samples < 1)
        throw ValidationError("solver.check_samples must be >= 1");

    c.out_path = raw.get_string("output", "path", "");
    c.solver.output_interval =
        static_cast<int>(raw.get_int("output", "interval", 1));
    if (c.solver.output_interval < 1)
        throw ValidationError("output.interval must be >= 1");

    // Startup cross-check of the closed-form normalization constant.
    const double quad = lambda_delta_quadrature(c.params.delta, 400000);
    const double closed = lambda_delta(c.params.delta);
    if (std::abs(quad / closed - 1.0) > 1e-6)
        throw ValidationError(
            "internal-energy normalization cross-check failed");

    raw.reject_unconsumed();
    return c;
}

RunConfig parse_config_file(const std::string& path,
                            std::vector<std::string>* defaults_log) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), defaults_log);
}

void write_run_csv(std::ostream& os, const RunResult& result,
                   const PhaseSpaceGrid& grid) {
    os << "t,x,rho,ux,uy,uz,T_tr,T_int,T_total,H,mass_defect,"
          "momentum_defect,energy_defect,linf_q_norm\n";
    char buf[520];
    for (const auto& rec : result.series) {
        for (int ix = 0; ix < grid.x_count; ++ix) {
            const auto& cell = rec.cells[ix];
            const auto& d = cell.defect.relative;
            const double mom_defect =
                std::sqrt(d[1] * d[1] + d[2] * d[2] + d[3] * d[3]);
            std::snprintf(
                buf, sizeof buf,
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                rec.t, grid.x_center(ix), cell.m.rho, cell.m.U.x, cell.m.U.y,
                cell.m.U.z, cell.m.T_tr, cell.m.T_int, cell.m.T_total,
                cell.entropy, d[0], mom_defect, d[4], rec.norm_q);
            os << buf;
        }
    }
}

} // namespace polybgk
