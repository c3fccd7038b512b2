#pragma once

#include <numbers>

namespace chiralforce::phys {

inline constexpr double pi = std::numbers::pi;

// CODATA 2018
inline constexpr double c = 299792458.0;           // m/s
inline constexpr double mu0 = 1.25663706212e-6;    // N/A^2
inline constexpr double eps0 = 1.0 / (mu0 * c * c);  // F/m
inline constexpr double hbar = 1.054571817e-34;    // J s

inline constexpr double omega_from_wavelength(double lambda) { return 2.0 * pi * c / lambda; }
inline constexpr double wavelength_from_omega(double omega) { return 2.0 * pi * c / omega; }

}  // namespace chiralforce::phys
