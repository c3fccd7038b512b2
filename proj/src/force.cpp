#include "chiralforce/force.hpp"

#include <cmath>

#include "chiralforce/constants.hpp"
#include "chiralforce/errors.hpp"

namespace chiralforce {

SteadyState steady_state(cplx Omega, double Delta, double Gamma)
{
    if (!(Gamma > 0.0))
        throw DomainError("steady state requires Gamma > 0");
    const double om2 = std::norm(Omega);
    const double off = Delta * Delta + Gamma * Gamma / 4.0;
    const double den = off + om2 / 2.0;
    const double rho_ee = (om2 / 4.0) / den;
    // population inversion 1 - 2 rho_ee, without the cancellation near saturation
    const double inversion = off / den;
    const cplx rho_eg = cplx(0.0, 1.0) * Omega * inversion / cplx(Gamma, -2.0 * Delta);
    return {rho_ee, rho_eg};
}

ForceResult axial_force(const AtomConfig& atom, const DriveConfig& drive, const FiberSpec& fiber,
                        const EmissionRates& rates)
{
    const double omega_l = atom.omega0() + drive.detuning;
    const auto mode = solve_dispersion(fiber, drive.kind, omega_l);
    if (!mode)
        throw NotGuidedError(drive.kind.label() + " is not guided at the drive frequency");
    const cplx Omega = rabi_frequency(atom, drive, fiber);
    const auto ss = steady_state(Omega, drive.detuning, rates.Gamma);
    const double fL = sign(drive.f);
    const double hb = phys::hbar;

    ForceResult out{};
    out.rho_ee = ss.rho_ee;
    out.Gamma = rates.Gamma;
    out.gamma_g = rates.gamma_g;
    out.gamma_r = rates.gamma_r;
    out.Omega_abs = std::abs(Omega);
    out.beta_L = mode->beta;
    out.q_L = mode->q;
    out.l_max = rates.l_max;
    out.beta_nodes = rates.beta_nodes;
    out.F_absorption = hb * fL * mode->beta * rates.Gamma * ss.rho_ee;
    const cplx coherence = Omega * std::conj(ss.rho_eg) - std::conj(Omega) * ss.rho_eg;
    out.F_absorption_coherence = (cplx(0.0, 0.5 * hb * fL * mode->beta) * coherence).real();
    out.F_guided_recoil = -hb * ss.rho_ee * rates.guided_moment;
    out.F_radiation_recoil = -hb * ss.rho_ee * rates.radiation_moment;
    out.F_z = out.F_absorption + out.F_guided_recoil + out.F_radiation_recoil;
    return out;
}

ForceResult axial_force(const AtomConfig& atom, const DriveConfig& drive, const FiberSpec& fiber)
{
    return axial_force(atom, drive, fiber, emission_rates(atom, fiber));
}

std::optional<double> asymmetry(double F_plus, double F_minus)
{
    const double p = std::abs(F_plus), m = std::abs(F_minus);
    if (p + m == 0.0)
        return std::nullopt;
    return (p - m) / (p + m);
}

double eta_infinity(double beta_L, double q_L)
{
    if (!(beta_L > 0.0) || !(q_L >= 0.0))
        throw DomainError("eta_infinity requires beta > 0 and q >= 0");
    return 2.0 * beta_L * q_L / (beta_L * beta_L + q_L * q_L);
}

double eta_infinity_bound(double n1, double n2)
{
    if (!(n1 > n2) || !(n2 >= 1.0))
        throw DomainError("eta_infinity_bound requires n1 > n2 >= 1");
    return 2.0 * n1 * std::sqrt(n1 * n1 - n2 * n2) / (2.0 * n1 * n1 - n2 * n2);
}

double local_field_asymmetry(const VectorField& field)
{
    const double den = std::norm(field.e_r) + std::norm(field.e_z);
    if (den == 0.0)
        return 0.0;
    return 2.0 * (field.e_r * std::conj(field.e_z)).imag() / den;
}

double transverse_spin_density(const VectorField& field, double omega)
{
    // at phi = 0: x = r, y = phi
    const cplx ex = field.e_r, ez = field.e_z;
    const cplx cross_y = std::conj(ez) * ex - std::conj(ex) * ez;
    return phys::eps0 / (4.0 * omega) * cross_y.imag();
}

}  // namespace chiralforce
