#include "chiralforce/waveguide.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "chiralforce/constants.hpp"
#include "chiralforce/detail/longitudinal.hpp"
#include "chiralforce/errors.hpp"
#include "chiralforce/quadrature.hpp"
#include "chiralforce/specfun.hpp"

namespace chiralforce {

using phys::pi;

FiberSpec::FiberSpec(double radius, double n_core, double n_clad) : a(radius), n1(n_core), n2(n_clad)
{
    if (!(a > 0.0) || !std::isfinite(a))
        throw DomainError("fiber radius must be positive");
    if (!(n2 >= 1.0) || !(n1 >= n2) || !std::isfinite(n1))
        throw DomainError("fiber indices must satisfy n1 >= n2 >= 1");
}

ModeKind::ModeKind(ModeFamily fam, int az, int rad) : family(fam), l(az), m(rad)
{
    if (m < 1)
        throw DomainError("radial mode order must be >= 1");
    const bool meridional = family == ModeFamily::TE || family == ModeFamily::TM;
    if (meridional && l != 0)
        throw DomainError("TE/TM modes have azimuthal order 0");
    if (!meridional && l < 1)
        throw DomainError("HE/EH modes need azimuthal order >= 1");
}

std::string ModeKind::label() const
{
    static constexpr const char* names[] = {"HE", "EH", "TE", "TM"};
    std::string s = names[static_cast<int>(family)];
    if (l < 10 && m < 10)
        return s + std::to_string(l) + std::to_string(m);
    return s + "_" + std::to_string(l) + "_" + std::to_string(m);
}

ModeKind parse_mode_kind(std::string_view text)
{
    auto fail = [&]() -> ModeKind { throw DomainError("cannot parse mode name '" + std::string(text) + "'"); };
    if (text.size() < 4)
        return fail();
    std::string fam{text.substr(0, 2)};
    std::transform(fam.begin(), fam.end(), fam.begin(), [](unsigned char c) { return std::toupper(c); });
    ModeFamily family;
    if (fam == "HE") family = ModeFamily::HE;
    else if (fam == "EH") family = ModeFamily::EH;
    else if (fam == "TE") family = ModeFamily::TE;
    else if (fam == "TM") family = ModeFamily::TM;
    else return fail();

    std::string_view rest = text.substr(2);
    int l = 0, m = 0;
    if (rest.size() == 2 && std::isdigit(static_cast<unsigned char>(rest[0]))
        && std::isdigit(static_cast<unsigned char>(rest[1]))) {
        l = rest[0] - '0';
        m = rest[1] - '0';
    } else if (!rest.empty() && rest[0] == '_') {
        const auto sep = rest.find('_', 1);
        if (sep == std::string_view::npos)
            return fail();
        auto num = [&](std::string_view s, int& out) {
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            return ec == std::errc{} && p == s.data() + s.size();
        };
        if (!num(rest.substr(1, sep - 1), l) || !num(rest.substr(sep + 1), m))
            return fail();
    } else {
        return fail();
    }
    return ModeKind(family, l, m);
}

double GuidedMode::k() const { return omega / phys::c; }

double v_number(const FiberSpec& fiber, double lambda)
{
    if (!(lambda > 0.0))
        throw DomainError("wavelength must be positive");
    return 2.0 * pi / lambda * fiber.a * std::sqrt(fiber.n1 * fiber.n1 - fiber.n2 * fiber.n2);
}

namespace {

// Below this w = qa a root is treated as sitting at cutoff.
constexpr double kCutoffGuard = 1e-8;
constexpr int kScanSamples = 2048;

struct Branch {
    ModeFamily family;
    int l;
};

// Point on the guided interval, parametrized by psi in (0, pi/2):
// w = V sin psi (cladding), u = V cos psi (core). psi -> 0 is cutoff.
struct UW {
    double u, w;
};

UW at_angle(double V, double psi) { return {V * std::cos(psi), V * std::sin(psi)}; }

// Bessel values entering the characteristic equation at one (u, w):
// J_l(u), J_{l+1}(u), K_{l-1}(w), K_l(w), K_{l+1}(w). Neighbouring orders are
// evaluated directly rather than through recurrences, which would cancel.
struct Kernel {
    double u, w;
    double jl, jp;
    double km, kl, kp;

    // X = J_l'(u) / (u J_l(u)) = l/u^2 + xi
    double xi() const { return -jp / (u * jl); }
    // Kt = K_l'(w) / (w K_l(w)) = l/w^2 + eta = -l/w^2 + kappa
    double eta() const { return -kp / (w * kl); }
    double kappa() const { return -km / (w * kl); }
};

Kernel kernel(int l, UW p)
{
    Kernel k{p.u, p.w, cyl_value(CylKind::J, l, p.u), cyl_value(CylKind::J, l + 1, p.u), 0.0,
             cyl_value(CylKind::K, l, p.w), cyl_value(CylKind::K, l + 1, p.w)};
    k.km = l == 0 ? k.kp : cyl_value(CylKind::K, l - 1, p.w);
    return k;
}

// Larger root of c2 x^2 + c1 x + c0 = 0, computed without cancellation.
double larger_root(double c2, double c1, double c0)
{
    const double disc = std::sqrt(std::max(c1 * c1 - 4.0 * c2 * c0, 0.0));
    const double t = -0.5 * (c1 + std::copysign(disc, c1));
    const double r1 = t / c2;
    const double r2 = t != 0.0 ? c0 / t : r1;
    return std::max(r1, r2);
}

// Value that xi = X - l/u^2 must take on each branch.
//
// TE: X = -Kt;  TM: n1^2 X = -n2^2 Kt;  hybrid modes satisfy
//   (X + Kt)(n1^2 X + n2^2 Kt) = l^2 (1/u^2 + 1/w^2)(n1^2/u^2 + n2^2/w^2),
// a quadratic in X whose larger root is EH and smaller root HE.
//
// EH is solved in (xi, eta), where the l^2/u^4 and l^2/w^4 terms cancel
// identically; HE is solved in (X, kappa) with Kt = -l/w^2 + kappa so the
// product of the roots is free of the 1/w^4 cancellation near cutoff.
double branch_xi(const FiberSpec& f, const Branch& b, const Kernel& k)
{
    const double n1s = f.n1 * f.n1, n2s = f.n2 * f.n2;
    const double l = b.l;
    const double a = l / (k.u * k.u), bb = l / (k.w * k.w);
    const double Kt = bb + k.eta();
    switch (b.family) {
    case ModeFamily::TE: return -Kt - a;
    case ModeFamily::TM: return -(n2s / n1s) * Kt - a;
    case ModeFamily::EH: {
        const double eta = k.eta();
        const double c1 = n1s * (2.0 * a + bb) + n2s * bb + (n1s + n2s) * eta;
        const double c0 = eta * ((n1s + n2s) * a + 2.0 * n2s * bb + n2s * eta);
        return larger_root(n1s, c1, c0);
    }
    case ModeFamily::HE: {
        const double kap = k.kappa();
        const double R = (a + bb) * (n1s * a + n2s * bb);
        const double disc = std::sqrt((n1s - n2s) * (n1s - n2s) * Kt * Kt + 4.0 * n1s * R);
        const double eh = (-(n1s + n2s) * Kt + disc) / (2.0 * n1s);
        const double product = -2.0 * n2s * bb * kap + n2s * kap * kap - n1s * a * a - (n1s + n2s) * a * bb;
        return product / (n1s * eh) - a;
    }
    }
    return 0.0;
}

// Pole-free form of xi = target:  u J_l(u) (xi - target) = -J_{l+1}(u) - u target J_l(u).
double branch_function(const FiberSpec& f, const Branch& b, UW p)
{
    const Kernel k = kernel(b.l, p);
    return -k.jp - k.u * branch_xi(f, b, k) * k.jl;
}

double branch_residual(const FiberSpec& f, const Branch& b, UW p)
{
    const Kernel k = kernel(b.l, p);
    if (k.jl == 0.0)
        return 1.0;
    const double shift = b.family == ModeFamily::EH ? 0.0 : b.l / (k.u * k.u);
    const double x = k.xi() + shift, t = branch_xi(f, b, k) + shift;
    return std::abs(x - t) / (std::abs(x) + std::abs(t));
}

std::vector<double> scan_angles()
{
    std::vector<double> psi;
    psi.reserve(kScanSamples + 64);
    for (int i = 0; i < kScanSamples; ++i)
        psi.push_back(0.5 * pi * (i + 0.5) / kScanSamples);
    // dense samples toward both ends of the interval
    for (int j = 14; j <= 40; ++j) {
        const double t = 0.5 * pi * std::pow(10.0, -j / 4.0);
        psi.push_back(t);
        psi.push_back(0.5 * pi - t);
    }
    std::sort(psi.begin(), psi.end());
    psi.erase(std::unique(psi.begin(), psi.end()), psi.end());
    return psi;
}

const std::vector<double>& angles()
{
    static const std::vector<double> a = scan_angles();
    return a;
}

double bisect_root(const FiberSpec& f, const Branch& b, double V, double lo, double hi, double flo)
{
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double fm = branch_function(f, b, at_angle(V, mid));
        if (fm == 0.0)
            return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct Root {
    double psi;
    UW uw;
    double residual;
};

void check_root(const FiberSpec& f, const Branch& b, double omega, const Root& r, double lo, double hi)
{
    if (r.residual > 1e-8) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "dispersion root did not converge: family " << static_cast<int>(b.family) << " l=" << b.l
            << " omega=" << omega << " a=" << f.a << " bracket psi in [" << lo << ", " << hi
            << "] residual=" << r.residual;
        throw ConvergenceError(msg.str());
    }
}

// All roots of a branch, ordered by increasing u (decreasing beta).
std::vector<Root> branch_roots(const FiberSpec& f, const Branch& b, double omega)
{
    std::vector<Root> roots;
    const double V = v_number(f, phys::wavelength_from_omega(omega));
    if (!(V > kCutoffGuard))
        return roots;

    const auto& psi = angles();
    std::vector<double> vals(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        vals[i] = at_angle(V, psi[i]).w < kCutoffGuard ? std::nan("") : branch_function(f, b, at_angle(V, psi[i]));

    // walk from the cutoff end (small psi) to the u -> 0 end, collecting in
    // decreasing-u order, then reverse
    for (std::size_t i = 0; i + 1 < psi.size(); ++i) {
        const double fa = vals[i], fb = vals[i + 1];
        if (!std::isfinite(fa) || !std::isfinite(fb))
            continue;
        double root_psi;
        if (fa == 0.0)
            root_psi = psi[i];
        else if (fa * fb < 0.0)
            root_psi = bisect_root(f, b, V, psi[i], psi[i + 1], fa);
        else
            continue;
        const UW uw = at_angle(V, root_psi);
        if (uw.w < kCutoffGuard)
            continue;
        Root r{root_psi, uw, branch_residual(f, b, uw)};
        check_root(f, b, omega, r, psi[i], psi[i + 1]);
        roots.push_back(r);
    }
    std::reverse(roots.begin(), roots.end());
    return roots;
}

// Root of the same branch at a slightly shifted frequency, searched near the
// previous angle. Returns nullopt when the mode is not guided there.
std::optional<UW> continue_root(const FiberSpec& f, const Branch& b, double omega, int m, double psi0)
{
    const double V = v_number(f, phys::wavelength_from_omega(omega));
    if (!(V > kCutoffGuard))
        return std::nullopt;
    for (double d = 1e-7; d < 1e-2; d *= 4.0) {
        const double lo = std::max(psi0 - d, 0.0), hi = std::min(psi0 + d, 0.5 * pi);
        if (at_angle(V, lo).w < kCutoffGuard)
            break;
        const double flo = branch_function(f, b, at_angle(V, lo));
        const double fhi = branch_function(f, b, at_angle(V, hi));
        if (flo * fhi < 0.0) {
            const double psi = bisect_root(f, b, V, lo, hi, flo);
            return at_angle(V, psi);
        }
    }
    auto roots = branch_roots(f, b, omega);
    if (static_cast<int>(roots.size()) < m)
        return std::nullopt;
    return roots[m - 1].uw;
}

double beta_from(const FiberSpec& f, double omega, UW uw)
{
    const double k = omega / phys::c;
    const double h = uw.u / f.a;
    return std::sqrt(f.n1 * f.n1 * k * k - h * h);
}

FieldCoefficients coefficients_for(const ModeKind& kind, double omega, double beta, UW uw)
{
    const cplx i{0.0, 1.0};
    const CylEval J = cyl_bessel(CylKind::J, kind.l, uw.u);
    const CylEval K = cyl_bessel(CylKind::K, kind.l, uw.w);
    const double ratio = J.value / K.value;
    FieldCoefficients c{};
    switch (kind.family) {
    case ModeFamily::TE:
        c = {0.0, 1.0, 0.0, ratio};
        break;
    case ModeFamily::TM:
        c = {1.0, 0.0, ratio, 0.0};
        break;
    case ModeFamily::HE:
    case ModeFamily::EH: {
        const double X = J.derivative / (uw.u * J.value);
        const double Kt = K.derivative / (uw.w * K.value);
        const double s = kind.l * (1.0 / (uw.u * uw.u) + 1.0 / (uw.w * uw.w)) / (X + Kt);
        const cplx B = i * beta * s / (omega * phys::mu0);
        c = {1.0, B, ratio, B * ratio};
        break;
    }
    }
    return c;
}

detail::Cylindrical6 base_field(const FiberSpec& f, int l, double omega, double beta, double h, double q,
                                const FieldCoefficients& c, double r, bool core)
{
    detail::Longitudinal lon;
    if (core) {
        const CylEval J = cyl_bessel(CylKind::J, l, h * r);
        lon = {c.core_ez * J.value, c.core_ez * h * J.derivative, c.core_hz * J.value, c.core_hz * h * J.derivative};
        return detail::transverse_fields(lon, l, beta, omega, f.n1, h * h, r);
    }
    const CylEval K = cyl_bessel(CylKind::K, l, q * r);
    lon = {c.clad_ez * K.value, c.clad_ez * q * K.derivative, c.clad_hz * K.value, c.clad_hz * q * K.derivative};
    return detail::transverse_fields(lon, l, beta, omega, f.n2, -q * q, r);
}

detail::Cylindrical6 base_field(const GuidedMode& m, double r, bool core)
{
    return base_field(m.fiber, m.kind.l, m.omega, m.beta, m.h, m.q, m.coeffs, r, core);
}

// Rotate the coefficients by a power of i so that e_r (e_phi for TE) is real
// and positive at r = a+. Multiplication by +-1, +-i is exact, which keeps
// quadrature phases exact.
void fix_phase(const FiberSpec& f, const ModeKind& kind, double omega, double beta, double h, double q,
               FieldCoefficients& c)
{
    const auto e = base_field(f, kind.l, omega, beta, h, q, c, f.a, false);
    const cplx ref = kind.family == ModeFamily::TE ? e.e_phi : e.e_r;
    cplx phase;
    if (std::abs(ref.real()) >= std::abs(ref.imag()))
        phase = ref.real() >= 0.0 ? cplx{1.0, 0.0} : cplx{-1.0, 0.0};
    else
        phase = ref.imag() > 0.0 ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
    c.core_ez *= phase;
    c.core_hz *= phase;
    c.clad_ez *= phase;
    c.clad_hz *= phase;
}

// Radial integration of a quantity over the cross-section of the base field;
// the integrand receives (field, r, core?) and returns a value per unit area.
template <class G>
double cross_section_integral(const GuidedMode& m, G&& g)
{
    const double a = m.fiber.a;
    constexpr int kNodes = 24;
    const int core_panels = std::max(2, static_cast<int>(std::ceil(m.u() / 2.0)) + 1);
    double sum = integrate_panels([&](double r) { return g(base_field(m, r, true), true) * r; }, 0.0, a,
                                  core_panels, kNodes);
    // cladding: panels no wider than 2/q, growing geometrically near cutoff
    const double decay = 1.0 / m.q;
    const double end = a + 40.0 * decay;
    double lo = a, width = std::min(a, decay);
    while (lo < end) {
        const double hi = std::min(lo + width, end);
        sum += integrate_panels([&](double r) { return g(base_field(m, r, false), false) * r; }, lo, hi, 1, kNodes);
        lo = hi;
        width = std::min(2.0 * width, 2.0 * decay);
    }
    return 2.0 * pi * sum;
}

double quantum_norm_integral(const GuidedMode& m)
{
    return cross_section_integral(m, [&](const detail::Cylindrical6& e, bool core) {
        const double n = core ? m.fiber.n1 : m.fiber.n2;
        return n * n * (std::norm(e.e_r) + std::norm(e.e_phi) + std::norm(e.e_z));
    });
}

double power_integral(const GuidedMode& m)
{
    return cross_section_integral(m, [](const detail::Cylindrical6& e, bool) {
        return 0.5 * (e.e_r * std::conj(e.h_phi) - e.e_phi * std::conj(e.h_r)).real();
    });
}

Branch branch_of(const ModeKind& k) { return {k.family, k.l}; }

double finite_difference_slowness(const FiberSpec& f, const ModeKind& kind, double omega, double beta,
                                  double psi0, bool& degraded)
{
    const Branch b = branch_of(kind);
    auto beta_at = [&](double w) -> std::optional<double> {
        auto uw = continue_root(f, b, w, kind.m, psi0);
        if (!uw) return std::nullopt;
        return beta_from(f, w, *uw);
    };
    const double step = 1e-6 * omega;
    auto centered = [&](double d) -> std::optional<double> {
        auto p = beta_at(omega + d), mi = beta_at(omega - d);
        if (!p || !mi) return std::nullopt;
        return (*p - *mi) / (2.0 * d);
    };
    auto d1 = centered(step), d2 = centered(0.5 * step);
    if (d1 && d2) {
        degraded = false;
        return (4.0 * *d2 - *d1) / 3.0;
    }
    // one-sided second-order difference on the guided side
    degraded = true;
    auto p1 = beta_at(omega + step), p2 = beta_at(omega + 2.0 * step);
    if (!p1 || !p2)
        throw ConvergenceError("group slowness: mode not guided on either side of omega for " + kind.label());
    return (-3.0 * beta + 4.0 * *p1 - *p2) / (2.0 * step);
}

GuidedMode build_mode(const FiberSpec& f, const ModeKind& kind, double omega, const Root& root)
{
    const double beta = beta_from(f, omega, root.uw);
    const double h = root.uw.u / f.a, q = root.uw.w / f.a;
    FieldCoefficients c = coefficients_for(kind, omega, beta, root.uw);
    fix_phase(f, kind, omega, beta, h, q, c);
    bool degraded = false;
    const double bp = finite_difference_slowness(f, kind, omega, beta, root.psi, degraded);
    GuidedMode m{f, kind, omega, beta, h, q, bp, c, 1.0, 1.0, root.residual, degraded};
    m.norm_quantum = 1.0 / std::sqrt(quantum_norm_integral(m));
    m.norm_power = 1.0 / std::sqrt(power_integral(m));
    return m;
}

}  // namespace

std::optional<GuidedMode> solve_dispersion(const FiberSpec& fiber, const ModeKind& kind, double omega)
{
    if (!(omega > 0.0))
        throw DomainError("omega must be positive");
    auto roots = branch_roots(fiber, branch_of(kind), omega);
    if (static_cast<int>(roots.size()) < kind.m)
        return std::nullopt;
    return build_mode(fiber, kind, omega, roots[kind.m - 1]);
}

std::vector<GuidedMode> guided_modes(const FiberSpec& fiber, double omega)
{
    if (!(omega > 0.0))
        throw DomainError("omega must be positive");
    std::vector<GuidedMode> modes;
    auto add_branch = [&](ModeFamily fam, int l) {
        auto roots = branch_roots(fiber, {fam, l}, omega);
        for (std::size_t i = 0; i < roots.size(); ++i)
            modes.push_back(build_mode(fiber, ModeKind(fam, l, static_cast<int>(i) + 1), omega, roots[i]));
        return roots.size();
    };
    add_branch(ModeFamily::TE, 0);
    add_branch(ModeFamily::TM, 0);
    // HE_l1 has the lowest cutoff of its order and cutoffs grow with l
    for (int l = 1;; ++l) {
        const auto he = add_branch(ModeFamily::HE, l);
        const auto eh = add_branch(ModeFamily::EH, l);
        if (he == 0 && eh == 0)
            break;
    }
    std::stable_sort(modes.begin(), modes.end(), [](const GuidedMode& x, const GuidedMode& y) { return x.beta > y.beta; });
    return modes;
}

double cutoff_v_number(const ModeKind& kind, double n1, double n2)
{
    switch (kind.family) {
    case ModeFamily::TE:
    case ModeFamily::TM: return bessel_j_zero(0, kind.m);
    case ModeFamily::EH: return bessel_j_zero(kind.l, kind.m);
    case ModeFamily::HE:
        if (kind.l == 1)
            return kind.m == 1 ? 0.0 : bessel_j_zero(1, kind.m - 1);
        break;
    }
    // HE_lm, l >= 2:  (n1^2/n2^2 + 1) J_{l-1}(V) = V J_l(V) / (l - 1)
    const int l = kind.l;
    const double ratio = n1 * n1 / (n2 * n2) + 1.0;
    auto g = [&](double V) {
        return ratio * cyl_bessel(CylKind::J, l - 1, V).value - V * cyl_bessel(CylKind::J, l, V).value / (l - 1);
    };
    const double step = pi / 8.0;
    double lo = 1e-3, glo = g(lo);
    int found = 0;
    for (;;) {
        const double hi = lo + step;
        const double ghi = g(hi);
        if (glo * ghi < 0.0 && ++found == kind.m) {
            double a = lo, b = hi, ga = glo;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                const double gm = g(mid);
                if ((gm < 0.0) == (ga < 0.0)) {
                    a = mid;
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            return 0.5 * (a + b);
        }
        lo = hi;
        glo = ghi;
    }
}

double cutoff_radius(const ModeKind& kind, double lambda, double n1, double n2)
{
    if (kind.family == ModeFamily::HE && kind.l == 1 && kind.m == 1)
        throw DomainError("HE11 has no cutoff");
    if (!(lambda > 0.0))
        throw DomainError("wavelength must be positive");
    if (!(n1 > n2) || !(n2 >= 1.0))
        throw DomainError("cutoff radius requires n1 > n2 >= 1");
    return cutoff_v_number(kind, n1, n2) * lambda / (2.0 * pi * std::sqrt(n1 * n1 - n2 * n2));
}

VectorField mode_profile(const GuidedMode& mode, double r, double phi, Direction f, Circulation p,
                         Normalization norm, Side side)
{
    if (!(r > 0.0))
        throw DomainError("mode_profile requires r > 0");
    const bool core = side == Side::Auto ? r <= mode.fiber.a : side == Side::Core;
    const auto e = base_field(mode, r, core);
    const double fs = sign(f), ps = sign(p);
    const double scale = norm == Normalization::Quantum ? mode.norm_quantum : mode.norm_power;
    const cplx ph = std::polar(scale, ps * mode.kind.l * phi);
    return {ph * e.e_r,       ph * (ps * e.e_phi),  ph * (fs * e.e_z),
            ph * (fs * ps * e.h_r), ph * (fs * e.h_phi), ph * (ps * e.h_z)};
}

double group_slowness(const GuidedMode& mode)
{
    const double psi = std::atan2(mode.w(), mode.u());
    bool degraded = false;
    return finite_difference_slowness(mode.fiber, mode.kind, mode.omega, mode.beta, psi, degraded);
}

VectorField quasilinear_drive_field(const GuidedMode& mode, double orientation, Direction f, double power,
                                    double r, double phi)
{
    if (power < 0.0)
        throw DomainError("drive power must be non-negative");
    const double amp = std::sqrt(power);
    if (mode.kind.l == 0) {
        auto e = mode_profile(mode, r, phi, f, Circulation::Plus, Normalization::Power);
        return {amp * e.e_r, amp * e.e_phi, amp * e.e_z, amp * e.h_r, amp * e.h_phi, amp * e.h_z};
    }
    const auto plus = mode_profile(mode, r, phi, f, Circulation::Plus, Normalization::Power);
    const auto minus = mode_profile(mode, r, phi, f, Circulation::Minus, Normalization::Power);
    const cplx wp = std::polar(amp / std::sqrt(2.0), -orientation);
    const cplx wm = std::polar(amp / std::sqrt(2.0), orientation);
    return {wp * plus.e_r + wm * minus.e_r,     wp * plus.e_phi + wm * minus.e_phi,
            wp * plus.e_z + wm * minus.e_z,     wp * plus.h_r + wm * minus.h_r,
            wp * plus.h_phi + wm * minus.h_phi, wp * plus.h_z + wm * minus.h_z};
}

double characteristic_residual(const FiberSpec& fiber, const ModeKind& kind, double omega, double beta)
{
    const double k = omega / phys::c;
    const double n1s = fiber.n1 * fiber.n1, n2s = fiber.n2 * fiber.n2;
    if (!(beta > fiber.n2 * k && beta < fiber.n1 * k))
        throw DomainError("beta outside the guided interval");
    const double u = std::sqrt(n1s * k * k - beta * beta) * fiber.a;
    const double w = std::sqrt(beta * beta - n2s * k * k) * fiber.a;
    const Kernel kn = kernel(kind.l, {u, w});
    const double X = kind.l / (u * u) + kn.xi();
    const double Kt = kind.l / (w * w) + kn.eta();
    switch (kind.family) {
    case ModeFamily::TE: return std::abs(X + Kt) / (std::abs(X) + std::abs(Kt));
    case ModeFamily::TM: return std::abs(n1s * X + n2s * Kt) / (n1s * std::abs(X) + n2s * std::abs(Kt));
    default: {
        const double l2 = static_cast<double>(kind.l) * kind.l;
        const double lhs = (X + Kt) * (n1s * X + n2s * Kt);
        const double rhs = l2 * (1.0 / (u * u) + 1.0 / (w * w)) * (n1s / (u * u) + n2s / (w * w));
        return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs));
    }
    }
}

}  // namespace chiralforce
