#pragma once

#include <string>

#include "polybgk/grid.hpp"

namespace polybgk {

// Field dump format, bit-exact for round-tripping:
//   one ASCII header line
//     POLYBGK1 xcount vcount icount vmax imax delta [igrid=...] [iscale=...]
//              [xlength=...]
//   followed by the values as little-endian 64-bit floats in storage order
//   (x-major, then I, then v with the z velocity axis fastest). Files ending
//   in .csv carry the same header followed by one ASCII value per line.
struct LoadedField {
    PhaseSpaceGrid grid;
    DistributionFunction field;
};

void dump_field(const DistributionFunction& f, const PhaseSpaceGrid& grid,
                const std::string& path);

LoadedField load_field(const std::string& path);

} // namespace polybgk
