#pragma once

#include <array>
#include <cmath>

#include "polybgk/errors.hpp"

namespace polybgk {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Symmetric 3x3 matrix, unique entries only.
struct Sym3 {
    double xx = 0.0, yy = 0.0, zz = 0.0;
    double xy = 0.0, xz = 0.0, yz = 0.0;

    static Sym3 identity() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
    static Sym3 scaled_identity(double s) { return {s, s, s, 0.0, 0.0, 0.0}; }

    double trace() const { return xx + yy + zz; }

    double det() const {
        return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) +
               xz * (xy * yz - yy * xz);
    }

    Sym3 operator+(const Sym3& o) const {
        return {xx + o.xx, yy + o.yy, zz + o.zz, xy + o.xy, xz + o.xz, yz + o.yz};
    }
    Sym3 operator*(double s) const {
        return {xx * s, yy * s, zz * s, xy * s, xz * s, yz * s};
    }

    Vec3 apply(const Vec3& v) const {
        return {xx * v.x + xy * v.y + xz * v.z,
                xy * v.x + yy * v.y + yz * v.z,
                xz * v.x + yz * v.y + zz * v.z};
    }

    double quad(const Vec3& v) const { return v.dot(apply(v)); }
};

inline Sym3 operator*(double s, const Sym3& m) { return m * s; }

// Outer product v (x) v.
inline Sym3 outer(const Vec3& v) {
    return {v.x * v.x, v.y * v.y, v.z * v.z, v.x * v.y, v.x * v.z, v.y * v.z};
}

// Closed-form eigenvalues of a symmetric 3x3 matrix (trigonometric method),
// returned in descending order. No iteration, so results are deterministic
// and tolerance-free.
inline std::array<double, 3> sym3_eigenvalues(const Sym3& a) {
    const double p1 = a.xy * a.xy + a.xz * a.xz + a.yz * a.yz;
    if (p1 == 0.0) {
        std::array<double, 3> e = {a.xx, a.yy, a.zz};
        if (e[0] < e[1]) std::swap(e[0], e[1]);
        if (e[1] < e[2]) std::swap(e[1], e[2]);
        if (e[0] < e[1]) std::swap(e[0], e[1]);
        return e;
    }
    const double q = a.trace() / 3.0;
    const double dxx = a.xx - q, dyy = a.yy - q, dzz = a.zz - q;
    const double p2 = dxx * dxx + dyy * dyy + dzz * dzz + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Sym3 b{dxx / p, dyy / p, dzz / p, a.xy / p, a.xz / p, a.yz / p};
    double r = b.det() / 2.0;
    r = std::fmin(1.0, std::fmax(-1.0, r));
    const double phi = std::acos(r) / 3.0;
    const double e0 = q + 2.0 * p * std::cos(phi);
    const double e2 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    return {e0, 3.0 * q - e0 - e2, e2};
}

// Lower-triangular Cholesky factor of an SPD Sym3. log_det is of the original
// matrix. Throws NonSPDTensor when a pivot is not strictly positive.
struct Chol3 {
    double l00 = 0.0, l10 = 0.0, l11 = 0.0, l20 = 0.0, l21 = 0.0, l22 = 0.0;
    double log_det = 0.0;

    static Chol3 factor(const Sym3& a) {
        Chol3 c;
        if (!(a.xx > 0.0)) throw NonSPDTensor("tensor not SPD: leading entry <= 0");
        c.l00 = std::sqrt(a.xx);
        c.l10 = a.xy / c.l00;
        c.l20 = a.xz / c.l00;
        const double d1 = a.yy - c.l10 * c.l10;
        if (!(d1 > 0.0)) throw NonSPDTensor("tensor not SPD: second pivot <= 0");
        c.l11 = std::sqrt(d1);
        c.l21 = (a.yz - c.l20 * c.l10) / c.l11;
        const double d2 = a.zz - c.l20 * c.l20 - c.l21 * c.l21;
        if (!(d2 > 0.0)) throw NonSPDTensor("tensor not SPD: third pivot <= 0");
        c.l22 = std::sqrt(d2);
        c.log_det = 2.0 * (std::log(c.l00) + std::log(c.l11) + std::log(c.l22));
        return c;
    }

    // Solves L y = v; |y|^2 is then the quadratic form v^T A^{-1} v.
    Vec3 forward_solve(const Vec3& v) const {
        Vec3 y;
        y.x = v.x / l00;
        y.y = (v.y - l10 * y.x) / l11;
        y.z = (v.z - l20 * y.x - l21 * y.y) / l22;
        return y;
    }

    double inv_quad(const Vec3& v) const { return forward_solve(v).norm2(); }
};

} // namespace polybgk
