#include "chiralforce/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chiralforce/constants.hpp"
#include "chiralforce/detail/parallel.hpp"
#include "chiralforce/errors.hpp"
#include "chiralforce/quadrature.hpp"
#include "chiralforce/radiation.hpp"

namespace chiralforce {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void validate(const AtomConfig& atom, const FiberSpec& fiber)
{
    if (!(atom.lambda0 > 0.0))
        throw DomainError("transition wavelength must be positive");
    if (!(atom.d >= 0.0))
        throw DomainError("dipole magnitude must be non-negative");
    if (std::abs(norm(atom.dipole) - 1.0) > 1e-12)
        throw DomainError("dipole orientation must be a unit vector");
    if (!(atom.r > fiber.a))
        throw PhysicsError("atom must sit outside the fiber (r > a)");
}

// omega0 d^2 / (2 eps0 hbar)
double rate_prefactor(const AtomConfig& atom)
{
    return atom.omega0() * atom.d * atom.d / (2.0 * phys::eps0 * phys::hbar);
}

double polarization_sum(const AtomConfig& atom, const GuidedMode& mode, Direction f)
{
    double sum = 0.0;
    for (auto p : {Circulation::Plus, Circulation::Minus}) {
        const auto e = mode_profile(mode, atom.r, atom.phi, f, p, Normalization::Quantum);
        sum += std::norm(dot(atom.dipole, cylindrical_to_cartesian(e.e_r, e.e_phi, e.e_z, atom.phi)));
        if (mode.kind.l == 0)
            break;  // TE/TM: one mode per direction
    }
    return sum;
}

struct OrderSums {
    double full = 0.0;  // |l| <= L
    double half = 0.0;  // |l| <= L/2
};

OrderSums sum_orders(const std::vector<double>& c, int L)
{
    OrderSums s;
    for (int l = -L; l <= L; ++l) {
        const double v = c[static_cast<std::size_t>(l + L)];
        s.full += v;
        if (2 * std::abs(l) <= L)
            s.half += v;
    }
    return s;
}

// Panels of t = ln(1 - beta / (k n2)) over [ln 1e-12, 0]. Near-cutoff guided
// modes leave structure just below the light line whose width scales with the
// distance to it, so uniform panels in t grade the nodes geometrically toward
// it. Each sharp leaky-mode resonance adds breakpoints at its centre and at
// 4^k half widths on either side.
std::vector<double> t_breakpoints(const FiberSpec& fiber, double omega, int base_panels)
{
    const double t_min = std::log(1e-12);
    const double kn2 = omega / phys::c * fiber.n2;
    const double spacing = -t_min / base_panels;
    std::vector<double> bp;
    for (int i = 0; i <= base_panels; ++i)
        bp.push_back(i == base_panels ? 0.0 : t_min + i * spacing);
    for (const auto& res : radiation_resonances(fiber, omega)) {
        const double t0 = std::log1p(-res.beta / kn2);
        const double wt = res.half_width / (kn2 * std::exp(t0));
        bp.push_back(t0);
        for (double d = 0.25 * wt; d < spacing; d *= 4.0) {
            bp.push_back(t0 - d);
            bp.push_back(t0 + d);
        }
    }
    std::sort(bp.begin(), bp.end());
    std::vector<double> out;
    for (double t : bp) {
        if (t < t_min || t > 0.0)
            continue;
        if (!out.empty() && t - out.back() <= 1e-14 * std::abs(t))
            continue;
        out.push_back(t);
    }
    return out;
}

// n-point Gauss-Legendre on each t panel, mapped to beta in (0, k n2).
QuadratureRule panel_rule(const std::vector<double>& bp, int n, double kn2)
{
    const QuadratureRule unit = gauss_legendre(n);
    QuadratureRule rule;
    for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
        const double mid = 0.5 * (bp[p] + bp[p + 1]), half = 0.5 * (bp[p + 1] - bp[p]);
        for (int i = 0; i < n; ++i) {
            const double t = mid + half * unit.nodes[i];
            rule.nodes.push_back(-kn2 * std::expm1(t));
            rule.weights.push_back(half * unit.weights[i] * kn2 * std::exp(t));
        }
    }
    return rule;
}

}  // namespace

Vec3c dipole_sigma_plus() { return {cplx(0.0, kInvSqrt2), 0.0, -kInvSqrt2}; }
Vec3c dipole_sigma_minus() { return {cplx(0.0, -kInvSqrt2), 0.0, -kInvSqrt2}; }
Vec3c dipole_linear_x() { return {1.0, 0.0, 0.0}; }

double linewidth_from_dipole(double d, double lambda0)
{
    const double w = phys::omega_from_wavelength(lambda0);
    return w * w * w * d * d / (3.0 * phys::pi * phys::eps0 * phys::hbar * phys::c * phys::c * phys::c);
}

double dipole_from_linewidth(double gamma0, double lambda0)
{
    if (!(gamma0 >= 0.0))
        throw DomainError("linewidth must be non-negative");
    return std::sqrt(gamma0 / linewidth_from_dipole(1.0, lambda0));
}

AtomConfig AtomConfig::with_linewidth(double r, double phi, const Vec3c& dipole, double lambda0, double gamma0)
{
    return {r, phi, dipole, lambda0, dipole_from_linewidth(gamma0, lambda0)};
}

double AtomConfig::omega0() const { return phys::omega_from_wavelength(lambda0); }
double AtomConfig::gamma0() const { return linewidth_from_dipole(d, lambda0); }

cplx rabi_frequency(const AtomConfig& atom, const DriveConfig& drive, const FiberSpec& fiber)
{
    validate(atom, fiber);
    if (!(drive.power >= 0.0))
        throw DomainError("drive power must be non-negative");
    const double omega_l = atom.omega0() + drive.detuning;
    const auto mode = solve_dispersion(fiber, drive.kind, omega_l);
    if (!mode)
        throw NotGuidedError(drive.kind.label() + " is not guided at the drive frequency");
    const auto e = quasilinear_drive_field(*mode, drive.orientation, drive.f, drive.power, atom.r, atom.phi);
    return atom.d * dot(atom.dipole, cylindrical_to_cartesian(e.e_r, e.e_phi, e.e_z, atom.phi)) / phys::hbar;
}

double guided_emission_rate(const AtomConfig& atom, const GuidedMode& mode, Direction f)
{
    validate(atom, mode.fiber);
    return rate_prefactor(atom) * mode.beta_prime * polarization_sum(atom, mode, f);
}

GuidedRate guided_emission_rate(const AtomConfig& atom, const FiberSpec& fiber, const ModeKind& kind, Direction f)
{
    validate(atom, fiber);
    const auto mode = solve_dispersion(fiber, kind, atom.omega0());
    if (!mode)
        return {0.0, false};
    return {guided_emission_rate(atom, *mode, f), true};
}

double radiation_rate_density(const AtomConfig& atom, const FiberSpec& fiber, double beta)
{
    validate(atom, fiber);
    const double w0 = atom.omega0();
    for (int L = 20; L <= 1280; L *= 2) {
        const auto c = radiation_coupling_by_order(fiber, w0, beta, atom.dipole, atom.r, atom.phi, L);
        const auto s = sum_orders(c, L);
        if (std::abs(s.full - s.half) <= 1e-4 * s.full)
            return rate_prefactor(atom) * s.full;
    }
    throw ConvergenceError("azimuthal sum of the radiation density did not converge by |l| = 1280");
}

EmissionRates emission_rates(const AtomConfig& atom, const FiberSpec& fiber, const RateOptions& opt)
{
    validate(atom, fiber);
    const double w0 = atom.omega0();
    const double pre = rate_prefactor(atom);
    EmissionRates out{};

    for (const auto& mode : guided_modes(fiber, w0)) {
        GuidedChannel ch{mode.kind, mode.beta, guided_emission_rate(atom, mode, Direction::Forward),
                         guided_emission_rate(atom, mode, Direction::Backward)};
        out.gamma_g += ch.forward + ch.backward;
        out.guided_moment += ch.beta0 * (ch.forward - ch.backward);
        out.guided.push_back(ch);
    }

    // Radiation continuum: nodes on (0, k n2) mirrored onto (-k n2, 0); pairs are combined as gamma(b) + gamma(-b) and
    // b (gamma(b) - gamma(-b)) so the sums are exactly antisymmetric under
    // beta -> -beta.
    const double kn2 = w0 / phys::c * fiber.n2;
    const auto bp = t_breakpoints(fiber, w0, opt.base_panels);
    int L = 2 * opt.l_start;
    double prev_total = 0.0, prev_moment = 0.0;
    bool have_prev = false;
    for (int order = opt.order_start;; order *= 2) {
        if (order > opt.order_limit) {
            std::ostringstream msg;
            msg << "radiation beta quadrature not converged at " << order / 2 << " nodes per panel (last total "
                << pre * prev_total << " rad/s)";
            throw ConvergenceError(msg.str());
        }
        const auto rule = panel_rule(bp, order, kn2);
        const int n = static_cast<int>(rule.nodes.size());
        std::vector<OrderSums> plus(n), minus(n);
        for (;;) {
            detail::parallel_for(static_cast<std::size_t>(n), opt.threads, [&](std::size_t i) {
                const double b = rule.nodes[i];
                plus[i] = sum_orders(radiation_coupling_by_order(fiber, w0, b, atom.dipole, atom.r, atom.phi, L), L);
                minus[i] = sum_orders(radiation_coupling_by_order(fiber, w0, -b, atom.dipole, atom.r, atom.phi, L), L);
            });
            double full = 0.0, half = 0.0;
            for (int i = 0; i < n; ++i) {
                full += rule.weights[i] * (plus[i].full + minus[i].full);
                half += rule.weights[i] * (plus[i].half + minus[i].half);
            }
            if (std::abs(full - half) <= opt.tolerance * full)
                break;
            L *= 2;
            if (L > opt.l_limit) {
                std::ostringstream msg;
                msg << "azimuthal sum not converged at |l| = " << L / 2 << " (relative change "
                    << std::abs(full - half) / full << ")";
                throw ConvergenceError(msg.str());
            }
        }
        double total = 0.0, moment = 0.0;
        for (int i = 0; i < n; ++i) {
            total += rule.weights[i] * (plus[i].full + minus[i].full);
            moment += rule.weights[i] * rule.nodes[i] * (plus[i].full - minus[i].full);
        }
        if (have_prev && std::abs(total - prev_total) <= opt.tolerance * total
            && std::abs(moment - prev_moment) <= opt.tolerance * kn2 * total) {
            out.gamma_r = pre * total;
            out.radiation_moment = pre * moment;
            out.l_max = L;
            out.beta_nodes = n;
            break;
        }
        prev_total = total;
        prev_moment = moment;
        have_prev = true;
    }
    out.Gamma = out.gamma_g + out.gamma_r;
    return out;
}

TotalRates total_rates(const AtomConfig& atom, const FiberSpec& fiber)
{
    const auto r = emission_rates(atom, fiber);
    return {r.gamma_g, r.gamma_r, r.Gamma};
}

}  // namespace chiralforce
