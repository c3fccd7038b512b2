#pragma once

#include <complex>
#include <optional>

#include "chiralforce/coupling.hpp"
#include "chiralforce/waveguide.hpp"

namespace chiralforce {

struct SteadyState {
    double rho_ee;
    cplx rho_eg;
};

/// Two-level steady state under drive Omega, detuning Delta = omega_L - omega0
/// and decay rate Gamma > 0 (all rad/s).
SteadyState steady_state(cplx Omega, double Delta, double Gamma);

struct ForceResult {
    double F_z;                 // N
    double F_absorption;        // hbar f_L beta_L Gamma rho_ee
    double F_guided_recoil;     // -hbar rho_ee sum_N beta0 (gamma+ - gamma-)
    double F_radiation_recoil;  // -hbar rho_ee int beta gamma_r dbeta
    double F_absorption_coherence;  // (i hbar f_L beta_L / 2)(Omega rho_ge - Omega* rho_eg)
    double rho_ee;
    double Gamma, gamma_g, gamma_r;  // rad/s
    double Omega_abs;                // rad/s
    double beta_L, q_L;              // drive mode at omega_L, rad/m
    int l_max;
    int beta_nodes;
};

/// Axial force on the atom in the steady state of the guided drive.
ForceResult axial_force(const AtomConfig& atom, const DriveConfig& drive, const FiberSpec& fiber);

/// Same, reusing emission rates already computed for this atom.
ForceResult axial_force(const AtomConfig& atom, const DriveConfig& drive, const FiberSpec& fiber,
                        const EmissionRates& rates);

/// (|F+| - |F-|) / (|F+| + |F-|); empty when both forces vanish.
std::optional<double> asymmetry(double F_plus, double F_minus);

/// 2 beta q / (beta^2 + q^2)
double eta_infinity(double beta_L, double q_L);

/// 2 n1 sqrt(n1^2 - n2^2) / (2 n1^2 - n2^2), the largest eta_infinity any guided mode can reach.
double eta_infinity_bound(double n1, double n2);

/// 2 Im(e_r e_z^*) / (|e_r|^2 + |e_z|^2) of a field at phi = 0.
double local_field_asymmetry(const VectorField& field);

/// (eps0 / 4 omega) Im[E^* x E] . y for a field evaluated at phi = 0, J s / m^3.
double transverse_spin_density(const VectorField& field, double omega);

}  // namespace chiralforce
