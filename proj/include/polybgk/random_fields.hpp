#pragma once

#include <cstdint>
#include <random>

#include "polybgk/grid.hpp"

namespace polybgk {

// Randomized smooth nonnegative fields for the property suites: sums of 1-4
// anisotropic velocity Gaussians with centers inside half the cutoffs, each
// carrying an exponential internal-energy profile with an optional linear
// factor in I^{2/delta}, so translational and internal temperatures decouple.
// The mapping from engine draws to numbers is hand-rolled, keeping sampled
// fields identical across standard library implementations.
class BumpFieldGenerator {
  public:
    // center_cap bounds the bump centers (always additionally capped at half
    // the velocity cutoff); tighter caps keep every relaxation Gaussian of
    // the parameter matrix resolvable on a fixed grid.
    explicit BumpFieldGenerator(std::uint64_t seed, double center_cap = 1.5)
        : engine_(seed), center_cap_(center_cap) {}

    DistributionFunction sample(const PhaseSpaceGrid& grid);

  private:
    double uniform(double lo, double hi);
    std::mt19937_64 engine_;
    double center_cap_;
};

} // namespace polybgk
