#pragma once

#include <complex>
#include <vector>

#include "chiralforce/vector3.hpp"
#include "chiralforce/waveguide.hpp"

namespace chiralforce {

/// Radiation mode label (omega, beta, l, p) with |beta| < n2 omega / c.
struct RadModeSpec {
    double omega;
    double beta;
    int l;
    int p;  // +1 or -1
};

struct RadField {
    cplx e_r, e_phi, e_z;
    cplx h_r, h_phi, h_z;
};

/// Radiation-mode profile at (r, phi, z = 0), including exp(i l phi).
/// Interior J_l(h r); exterior J_l(q r), Y_l(q r) with q = sqrt(n2^2 k^2 - beta^2).
/// The two polarizations diagonalize the asymptotic Gram matrix of the
/// boundary-condition solutions, and each is normalized so that
/// int n^2 e_nu . e_nu'^* dA = delta(omega - omega') delta_ll' delta_pp'.
/// Throws DomainError for |beta| >= n2 k or p not in {+1, -1}.
RadField radiation_profile(const FiberSpec& fiber, const RadModeSpec& spec, double r, double phi,
                           Side side = Side::Auto);

/// sum_p |u . e_{omega beta l p}(r, phi)|^2 for l = -lmax..lmax, element l + lmax.
/// Orders whose Neumann functions overflow at q a use the fiber-free solution.
std::vector<double> radiation_coupling_by_order(const FiberSpec& fiber, double omega, double beta, const Vec3c& u,
                                                double r, double phi, int lmax);

struct RadiationResonance {
    int l;              // azimuthal order, >= 0 (orders -l and l resonate together)
    double beta;        // centre, 0 < beta < n2 k
    double half_width;  // Lorentzian half width in beta
};

/// Leaky-mode resonances of the radiation continuum at omega. Below the cutoff
/// of a mode with a centrifugal barrier the radiation density develops a
/// Lorentzian peak whose width shrinks to zero at cutoff while its area stays
/// finite. Each is located as a minimum of the smallest-to-largest eigenvalue
/// ratio of the order's Gram matrix (interior amplitudes balanced by the vacuum
/// impedance), refined by Brent's method. Only peaks narrower than the scan grid
/// are reported; results are symmetric under beta -> -beta.
std::vector<RadiationResonance> radiation_resonances(const FiberSpec& fiber, double omega);

}  // namespace chiralforce
