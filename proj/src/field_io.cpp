#include "polybgk/field_io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace polybgk {

namespace {

void require_little_endian() {
    if constexpr (std::endian::native != std::endian::little)
        throw IoError("field dump format requires a little-endian host");
}

bool has_csv_suffix(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

const char* kind_token(InternalGridKind k) {
    switch (k) {
    case InternalGridKind::Uniform: return "uniform";
    case InternalGridKind::Mapped: return "mapped";
    case InternalGridKind::Gauss: return "gauss";
    }
    return "uniform";
}

InternalGridKind kind_from_token(const std::string& s) {
    if (s == "uniform") return InternalGridKind::Uniform;
    if (s == "mapped") return InternalGridKind::Mapped;
    if (s == "gauss") return InternalGridKind::Gauss;
    throw IoError("unknown internal grid token: " + s);
}

std::string header_line(const PhaseSpaceGrid& g) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "POLYBGK1 %d %d %d %.17g %.17g %.17g", g.x_count, g.v_count,
                  g.i_count, g.v_max, g.i_max, g.delta);
    std::string line = buf;
    if (g.i_kind != InternalGridKind::Uniform) {
        line += " igrid=";
        line += kind_token(g.i_kind);
    }
    if (g.i_kind == InternalGridKind::Gauss) {
        std::snprintf(buf, sizeof buf, " iscale=%.17g", g.i_scale);
        line += buf;
    }
    if (g.x_count > 1) {
        std::snprintf(buf, sizeof buf, " xlength=%.17g", g.x_length);
        line += buf;
    }
    return line;
}

} // namespace

void dump_field(const DistributionFunction& f, const PhaseSpaceGrid& grid,
                const std::string& path) {
    require_little_endian();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << header_line(grid) << '\n';
    if (has_csv_suffix(path)) {
        char buf[64];
        for (double v : f.values) {
            std::snprintf(buf, sizeof buf, "%.17g\n", v);
            out << buf;
        }
    } else {
        out.write(reinterpret_cast<const char*>(f.values.data()),
                  static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    }
    if (!out) throw IoError("write failed: " + path);
}

LoadedField load_field(const std::string& path) {
    require_little_endian();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string magic;
    GridConfig config;
    double imax = 0.0;
    hs >> magic >> config.x_count >> config.v_count >> config.i_count >>
        config.v_max >> imax >> config.delta;
    if (!hs || magic != "POLYBGK1")
        throw IoError("bad field header in " + path);
    config.i_max = imax;
    std::string token;
    while (hs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw IoError("bad header token: " + token);
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "igrid") config.i_kind = kind_from_token(value);
        else if (key == "iscale") config.i_scale = std::stod(value);
        else if (key == "xlength") config.x_length = std::stod(value);
        else throw IoError("unknown header token: " + key);
    }
    if (config.i_kind == InternalGridKind::Gauss) config.i_max = 0.0;

    LoadedField result;
    result.grid = build_grid(config);
    result.field.values.resize(result.grid.total_values());
    if (has_csv_suffix(path)) {
        for (double& v : result.field.values)
            if (!(in >> v)) throw IoError("truncated csv field in " + path);
    } else {
        in.read(reinterpret_cast<char*>(result.field.values.data()),
                static_cast<std::streamsize>(result.field.values.size() *
                                             sizeof(double)));
        if (in.gcount() != static_cast<std::streamsize>(
                               result.field.values.size() * sizeof(double)))
            throw IoError("truncated field data in " + path);
    }
    return result;
}

} // namespace polybgk
