#pragma once

#include <complex>
#include <vector>

#include "chiralforce/vector3.hpp"
#include "chiralforce/waveguide.hpp"

namespace chiralforce {

/// Dipole orientations in the Cartesian basis (x toward the atom, z along the fiber).
Vec3c dipole_sigma_plus();   // (i x - z) / sqrt(2)
Vec3c dipole_sigma_minus();  // (-i x - z) / sqrt(2)
Vec3c dipole_linear_x();

/// gamma0 = omega0^3 d^2 / (3 pi eps0 hbar c^3), rates in rad/s.
double linewidth_from_dipole(double d, double lambda0);
double dipole_from_linewidth(double gamma0, double lambda0);

struct AtomConfig {
    double r;        // radial position, m
    double phi;      // azimuth, rad
    Vec3c dipole;    // unit vector
    double lambda0;  // transition wavelength, m
    double d;        // dipole magnitude, C m

    static AtomConfig with_linewidth(double r, double phi, const Vec3c& dipole, double lambda0, double gamma0);

    double omega0() const;
    double gamma0() const;
};

struct DriveConfig {
    ModeKind kind;
    double orientation;  // polarization angle of HE/EH drives, rad (0 = x)
    Direction f;
    double power;     // W
    double detuning;  // omega_L - omega0, rad/s
};

/// Omega = d_eg . E(r, phi) / hbar for the quasilinearly polarized drive at
/// omega_L = omega0 + detuning. Throws NotGuidedError if the drive mode is cut off.
cplx rabi_frequency(const AtomConfig& atom, const DriveConfig& drive, const FiberSpec& fiber);

struct GuidedRate {
    double rate;  // rad/s
    bool guided;  // false: mode below cutoff at omega0, rate reported as 0
};

/// Spontaneous emission rate into guided mode `kind` propagating in direction f,
/// summed over circulations (a single mode for TE/TM).
GuidedRate guided_emission_rate(const AtomConfig& atom, const FiberSpec& fiber, const ModeKind& kind, Direction f);

/// Same, for an already solved mode at omega0.
double guided_emission_rate(const AtomConfig& atom, const GuidedMode& mode, Direction f);

/// Radiation-mode emission rate per unit axial wavenumber at beta, summed over
/// l and polarization; |l| <= l_max doubled from 10 until the sum changes by
/// less than 1e-4.
double radiation_rate_density(const AtomConfig& atom, const FiberSpec& fiber, double beta);

struct RateOptions {
    int l_start = 10;          // first azimuthal cutoff
    int base_panels = 8;       // uniform panels in ln(1 - |beta| / k n2)
    int order_start = 8;       // Gauss-Legendre nodes per panel, doubled until converged
    double tolerance = 1e-4;   // relative change accepted on doubling
    int l_limit = 1280;
    int order_limit = 512;
    unsigned threads = 0;      // 0: hardware concurrency
};

struct GuidedChannel {
    ModeKind kind;
    double beta0;     // propagation constant at omega0, rad/m
    double forward;   // gamma_gN^(+), rad/s
    double backward;  // gamma_gN^(-), rad/s
};

struct EmissionRates {
    std::vector<GuidedChannel> guided;
    double gamma_g;         // sum of all guided channels
    double gamma_r;         // integral of the radiation density
    double Gamma;           // gamma_g + gamma_r
    double guided_moment;   // sum_N beta0 (gamma+ - gamma-), rad/(s m)
    double radiation_moment;  // integral of beta gamma_r(beta), rad/(s m)
    int l_max;              // azimuthal truncation reached
    int beta_nodes;         // quadrature nodes on each half of (-k n2, k n2)
};

/// All emission rates of the atom next to the fiber. Throws ConvergenceError
/// if the radiation integral does not settle within the option limits.
EmissionRates emission_rates(const AtomConfig& atom, const FiberSpec& fiber, const RateOptions& options = {});

struct TotalRates {
    double gamma_g, gamma_r, Gamma;
};

TotalRates total_rates(const AtomConfig& atom, const FiberSpec& fiber);

}  // namespace chiralforce
