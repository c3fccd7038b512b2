#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace chiralforce {

using cplx = std::complex<double>;

/// Complex Cartesian 3-vector (x, y, z).
using Vec3c = std::array<cplx, 3>;

inline Vec3c cylindrical_to_cartesian(cplx v_r, cplx v_phi, cplx v_z, double phi)
{
    const double c = std::cos(phi), s = std::sin(phi);
    return {v_r * c - v_phi * s, v_r * s + v_phi * c, v_z};
}

/// Bilinear product a . b (no conjugation).
inline cplx dot(const Vec3c& a, const Vec3c& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline double norm(const Vec3c& a) { return std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2])); }

}  // namespace chiralforce
