#pragma once

#include <complex>

#include "chiralforce/constants.hpp"

namespace chiralforce::detail {

using cplx = std::complex<double>;

/// Axial fields and their radial derivatives at one radius, for a field
/// varying as exp(i(beta z + l phi)).
struct Longitudinal {
    cplx ez, dez, hz, dhz;
};

struct Cylindrical6 {
    cplx e_r, e_phi, e_z, h_r, h_phi, h_z;
};

/// Transverse components from Maxwell's curl equations in a homogeneous
/// region of index n, with kappa2 = n^2 k^2 - beta^2 (negative in an
/// evanescent region). Time dependence exp(-i omega t).
inline Cylindrical6 transverse_fields(const Longitudinal& f, int l, double beta, double omega,
                                      double n, double kappa2, double r)
{
    using namespace chiralforce::phys;
    const cplx i{0.0, 1.0};
    const double wmu = omega * mu0;
    const double weps = omega * eps0 * n * n;
    const double lr = l / r;
    const double inv = 1.0 / kappa2;
    Cylindrical6 out;
    out.e_z = f.ez;
    out.h_z = f.hz;
    out.e_r = inv * (i * beta * f.dez - wmu * lr * f.hz);
    out.e_phi = -inv * (beta * lr * f.ez + i * wmu * f.dhz);
    out.h_r = inv * (i * beta * f.dhz + weps * lr * f.ez);
    out.h_phi = -inv * (beta * lr * f.hz - i * weps * f.dez);
    return out;
}

}  // namespace chiralforce::detail
