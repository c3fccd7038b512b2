#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "chiralforce/constants.hpp"
#include "chiralforce/waveguide.hpp"

namespace testing {

// Fiber and atom parameters of the reference configuration.
inline constexpr double kRadius = 350e-9;
inline constexpr double kLambda = 780e-9;
inline constexpr double kN1 = 1.4537;
inline constexpr double kN2 = 1.0;

inline chiralforce::FiberSpec reference_fiber(double a = kRadius) { return {a, kN1, kN2}; }
inline double reference_omega() { return chiralforce::phys::omega_from_wavelength(kLambda); }

inline double rel_err(double got, double want)
{
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

inline double rel_err(std::complex<double> got, std::complex<double> want)
{
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

}  // namespace testing
