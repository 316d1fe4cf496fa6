#include <doctest.h>

#include <cmath>

#include "polybgk/params.hpp"

#include "reference/reference_constants.inc"

using namespace polybgk;

namespace {
bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::abs(b);
}
} // namespace

TEST_CASE("collision frequency closed form") {
    CHECK(collision_frequency(0.0, 0.5) == 1.0);
    CHECK(collision_frequency(0.5, 1.0) == 1.0);
    CHECK(close_rel(collision_frequency(-0.4, 0.5), 1.0 / 1.2, 1e-15));
    CHECK_THROWS_AS(collision_frequency(1.0 - 1e-15, 0.0), DegenerateFrequency);
}

TEST_CASE("collision frequency monotone in theta") {
    double prev_pos = collision_frequency(0.5, 0.0);
    double prev_neg = collision_frequency(-0.4, 0.0);
    for (double theta = 0.1; theta <= 1.0; theta += 0.1) {
        const double a_pos = collision_frequency(0.5, theta);
        const double a_neg = collision_frequency(-0.4, theta);
        CHECK(a_pos < prev_pos);  // decreasing for nu > 0
        CHECK(a_neg > prev_neg);  // increasing for nu < 0
        CHECK(collision_frequency(0.0, theta) == 1.0);
        prev_pos = a_pos;
        prev_neg = a_neg;
    }
}

TEST_CASE("internal-energy normalization") {
    CHECK(close_rel(lambda_delta(2.0), 1.0, 1e-15));
    CHECK(close_rel(lambda_delta(1.0), 2.0 / std::sqrt(M_PI), 1e-14));
    CHECK(close_rel(lambda_delta(3.0), 1.0 / std::tgamma(2.5), 1e-14));
}

TEST_CASE("normalization closed form matches quadrature") {
    for (double delta : {0.5, 1.0, 2.0, 3.0, 5.0}) {
        const double quad = lambda_delta_quadrature(delta, 2000000);
        CHECK(close_rel(lambda_delta(delta), quad, 1e-10));
    }
}

TEST_CASE("lemma constant spot values") {
    CHECK(lemma_cnu(0.0) == 1.0);
    CHECK(lemma_cnu(0.5) == 2.0);
    // delta = 2: 2^{7/2} pi^2 5^{3/2} 2
    CHECK(close_rel(lemma_density_constant(2.0), 2496.7939865754159, 1e-12));
}

TEST_CASE("all constants match the high-precision reference") {
    for (int r = 0; r < kReferenceConstantsCount; ++r) {
        const double* row = kReferenceConstants[r];
        const auto p = RelaxationParams::make(row[2], row[3], row[0], row[1]);
        const LemmaConstants c = lemma_constants(p);
        CHECK(close_rel(p.A, row[4], 1e-12));
        CHECK(close_rel(lambda_delta(p.delta), row[5], 1e-12));
        CHECK(close_rel(c.c_nu, row[6], 1e-12));
        CHECK(close_rel(c.c_density, row[7], 1e-12));
        CHECK(close_rel(c.c_tail, row[8], 1e-12));
        CHECK(close_rel(c.c_momentum, row[9], 1e-12));
        CHECK(close_rel(c.c_gaussian, row[10], 1e-12));
        CHECK(close_rel(c.c_growth, row[11], 1e-12));
        CHECK(c.c_nu > 0.0);
        CHECK(c.c_density > 0.0);
        CHECK(c.c_tail > 0.0);
        CHECK(c.c_momentum > 0.0);
        CHECK(c.c_gaussian > 0.0);
        CHECK(c.c_growth > 0.0);
    }
}

TEST_CASE("gaussian constant diverges toward theta = 0") {
    const auto lo = RelaxationParams::make(0.5, 1e-3, 2.0, 8.0);
    const auto hi = RelaxationParams::make(0.5, 1e-1, 2.0, 8.0);
    CHECK(gaussian_norm_constant(lo) > gaussian_norm_constant(hi));
    CHECK_THROWS_AS(gaussian_norm_constant(RelaxationParams::make(0.5, 0.0, 2.0, 8.0)),
                    ThetaZero);
}

TEST_CASE("parameter range validation") {
    CHECK_THROWS_AS(RelaxationParams::make(0.0, 1.5, 2.0, 8.0), ValidationError);
    CHECK_THROWS_AS(RelaxationParams::make(-0.6, 0.5, 2.0, 8.0), ValidationError);
    CHECK_THROWS_WITH_AS(RelaxationParams::make(0.0, 1.0, 2.0, 6.0),
                         doctest::Contains("q must exceed 5+delta"),
                         ValidationError);
}
