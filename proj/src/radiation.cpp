#include "chiralforce/radiation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "chiralforce/constants.hpp"
#include "chiralforce/detail/longitudinal.hpp"
#include "chiralforce/errors.hpp"
#include "chiralforce/specfun.hpp"

namespace chiralforce {

namespace {

const cplx I{0.0, 1.0};

// Above this the Neumann functions at q a are treated as overflowing and the
// order falls back to the fiber-free solution.
constexpr double kNeumannCeiling = 1e250;

struct Wavenumbers {
    double k, h, q;
};

Wavenumbers wavenumbers(const FiberSpec& fiber, double omega, double beta)
{
    if (!(omega > 0.0))
        throw DomainError("radiation mode requires omega > 0");
    const double k = omega / phys::c;
    const double kn2 = k * fiber.n2;
    if (!(std::abs(beta) < kn2))
        throw DomainError("radiation mode requires |beta| < n2 k");
    // factored forms keep q accurate near grazing
    const double q = std::sqrt((kn2 - std::abs(beta)) * (kn2 + std::abs(beta)));
    const double kn1 = k * fiber.n1;
    const double h = std::sqrt((kn1 - std::abs(beta)) * (kn1 + std::abs(beta)));
    return {k, h, q};
}

// Y_n(x) and Y_n'(x) for n = 0..lmax by forward recurrence, truncated where
// |Y_n| would exceed the ceiling.
std::vector<CylEval> neumann_sequence(int lmax, double x)
{
    std::vector<double> y;
    try {
        y.push_back(cyl_value(CylKind::Y, 0, x));
        y.push_back(cyl_value(CylKind::Y, 1, x));
    } catch (const OverflowError&) {
        return {};
    }
    for (int n = 1; n < lmax && std::abs(y.back()) < kNeumannCeiling; ++n)
        y.push_back((2.0 * n / x) * y[n] - y[n - 1]);
    std::vector<CylEval> out;
    for (int n = 0; n <= lmax && n < static_cast<int>(y.size()); ++n) {
        if (!(std::abs(y[n]) < kNeumannCeiling))
            break;
        const double d = n == 0 ? -y[1] : y[n - 1] - (n / x) * y[n];
        out.push_back({y[n], d});
    }
    return out;
}

struct Bessels {
    std::vector<CylEval> jh_a, jq_a, yq_a;
};

Bessels surface_bessels(const FiberSpec& fiber, const Wavenumbers& wn, int nmax)
{
    Bessels b;
    b.jh_a = cyl_bessel_sequence(CylKind::J, nmax, wn.h * fiber.a);
    b.jq_a = cyl_bessel_sequence(CylKind::J, nmax, wn.q * fiber.a);
    b.yq_a = neumann_sequence(nmax, wn.q * fiber.a);
    return b;
}

// Exterior coefficients (C_J, C_Y, D_J, D_Y) of the two boundary-condition
// solutions (A, B) = (1, 0) and (0, 1), each divided by its largest entry.
struct OrderSolution {
    std::array<std::array<cplx, 4>, 2> x;
    std::array<double, 2> scale;
    bool fiber_free;
};

OrderSolution solve_order(const FiberSpec& fiber, double omega, double beta, const Wavenumbers& wn, int l,
                          const Bessels& b)
{
    const int n = std::abs(l);
    OrderSolution s;
    s.fiber_free = n >= static_cast<int>(b.yq_a.size());
    if (s.fiber_free) {
        s.x[0] = {1.0, 0.0, 0.0, 0.0};
        s.x[1] = {0.0, 0.0, 1.0, 0.0};
        s.scale = {1.0, 1.0};
        return s;
    }
    const double a = fiber.a, h = wn.h, q = wn.q;
    const double n1s = fiber.n1 * fiber.n1, n2s = fiber.n2 * fiber.n2;
    const double Jh = b.jh_a[n].value, dJh = b.jh_a[n].derivative;
    const double Jq = b.jq_a[n].value, dJq = b.jq_a[n].derivative;
    const double Yq = b.yq_a[n].value, dYq = b.yq_a[n].derivative;
    const double bla = beta * l / a;
    const double ratio = q * q / (h * h);
    const double wronsk = phys::pi * q * a / 2.0;

    for (int j = 0; j < 2; ++j) {
        const double A = j == 0 ? 1.0 : 0.0;
        const double B = j == 0 ? 0.0 : 1.0;
        const double PE = A * Jh, PH = B * Jh;
        const cplx SE = bla * PH * (1.0 - ratio) / (I * (omega * phys::eps0 * n2s * q)) + (q * n1s / (h * n2s)) * A * dJh;
        const cplx SH = (ratio - 1.0) * bla * PE / (I * (omega * phys::mu0 * q)) + (q / h) * B * dJh;
        std::array<cplx, 4> x{(PE * dYq - Yq * SE) * wronsk, (Jq * SE - dJq * PE) * wronsk,
                              (PH * dYq - Yq * SH) * wronsk, (Jq * SH - dJq * PH) * wronsk};
        double m = 0.0;
        for (const auto& v : x)
            m = std::max(m, std::abs(v));
        for (auto& v : x)
            v /= m;
        s.x[j] = x;
        s.scale[j] = m;
    }
    return s;
}

// Asymptotic Gram matrix: int n^2 |e|^2 dA -> x^H W x delta(omega - omega').
struct Gram {
    double g11, g22;
    cplx g12;
    double det;  // Cauchy-Binet sum, free of the g11 g22 - |g12|^2 cancellation
};

std::array<double, 4> gram_weights(const FiberSpec& fiber, double omega, double q)
{
    const double base = 2.0 * phys::pi * omega / (q * q);
    return {base * fiber.n2 * fiber.n2, base * fiber.n2 * fiber.n2, base * phys::mu0 / phys::eps0,
            base * phys::mu0 / phys::eps0};
}

Gram gram(const FiberSpec& fiber, double omega, double q, const OrderSolution& s)
{
    const auto w = gram_weights(fiber, omega, q);
    Gram g{0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < 4; ++i) {
        g.g11 += w[i] * std::norm(s.x[0][i]);
        g.g22 += w[i] * std::norm(s.x[1][i]);
        g.g12 += w[i] * std::conj(s.x[0][i]) * s.x[1][i];
        for (int j = i + 1; j < 4; ++j)
            g.det += w[i] * w[j] * std::norm(s.x[0][i] * s.x[1][j] - s.x[0][j] * s.x[1][i]);
    }
    return g;
}

// Radial Bessel values at the observation radius.
struct PointBessels {
    bool core;
    std::vector<CylEval> j, y;  // argument h r (core) or q r (cladding / fiber-free)
    std::vector<CylEval> jfree;  // J_n(q r) for fiber-free orders inside the core
};

PointBessels point_bessels(const FiberSpec& fiber, const Wavenumbers& wn, double r, bool core, int nmax, int ny)
{
    PointBessels p;
    p.core = core;
    if (core) {
        p.j = cyl_bessel_sequence(CylKind::J, nmax, wn.h * r);
        p.jfree = cyl_bessel_sequence(CylKind::J, nmax, wn.q * r);
    } else {
        p.j = cyl_bessel_sequence(CylKind::J, nmax, wn.q * r);
        if (ny >= 0) {
            p.y = neumann_sequence(ny, wn.q * r);
            if (static_cast<int>(p.y.size()) < ny + 1)
                throw OverflowError("Neumann function overflow outside the fiber surface");
        }
    }
    (void)fiber;
    return p;
}

// Field of solution j of order l at r (without exp(i l phi)), in units of the
// scaled coefficient vector.
detail::Cylindrical6 basis_field(const FiberSpec& fiber, double omega, double beta, const Wavenumbers& wn, int l,
                                 const OrderSolution& s, int j, const PointBessels& pb, double r)
{
    const int n = std::abs(l);
    detail::Longitudinal lon;
    if (s.fiber_free) {
        const CylEval z = pb.core ? pb.jfree[n] : pb.j[n];
        const double A = j == 0 ? 1.0 : 0.0, B = j == 0 ? 0.0 : 1.0;
        lon = {A * z.value, A * wn.q * z.derivative, B * z.value, B * wn.q * z.derivative};
        return detail::transverse_fields(lon, l, beta, omega, fiber.n2, wn.q * wn.q, r);
    }
    if (pb.core) {
        const double A = (j == 0 ? 1.0 : 0.0) / s.scale[j], B = (j == 0 ? 0.0 : 1.0) / s.scale[j];
        const CylEval z = pb.j[n];
        lon = {A * z.value, A * wn.h * z.derivative, B * z.value, B * wn.h * z.derivative};
        return detail::transverse_fields(lon, l, beta, omega, fiber.n1, wn.h * wn.h, r);
    }
    const auto& x = s.x[j];
    const CylEval J = pb.j[n], Y = pb.y[n];
    lon = {x[0] * J.value + x[1] * Y.value, wn.q * (x[0] * J.derivative + x[1] * Y.derivative),
           x[2] * J.value + x[3] * Y.value, wn.q * (x[2] * J.derivative + x[3] * Y.derivative)};
    return detail::transverse_fields(lon, l, beta, omega, fiber.n2, wn.q * wn.q, r);
}

Vec3c electric(const detail::Cylindrical6& f, double phi)
{
    return cylindrical_to_cartesian(f.e_r, f.e_phi, f.e_z, phi);
}

// Unit eigenvectors of the Hermitian Gram matrix, larger eigenvalue first.
struct Eigen2 {
    std::array<double, 2> lambda;
    std::array<std::array<cplx, 2>, 2> vec;
};

Eigen2 eigen(const Gram& g)
{
    Eigen2 e;
    const double mean = 0.5 * (g.g11 + g.g22), half = 0.5 * (g.g11 - g.g22);
    const double rad = std::hypot(half, std::abs(g.g12));
    e.lambda = {mean + rad, g.det / (mean + rad)};
    if (std::abs(g.g12) <= 1e-15 * (std::abs(g.g11) + std::abs(g.g22))) {
        const bool first = g.g11 >= g.g22;
        e.lambda = {first ? g.g11 : g.g22, g.det / (first ? g.g11 : g.g22)};
        e.vec[0] = first ? std::array<cplx, 2>{1.0, 0.0} : std::array<cplx, 2>{0.0, 1.0};
        e.vec[1] = first ? std::array<cplx, 2>{0.0, 1.0} : std::array<cplx, 2>{1.0, 0.0};
        return e;
    }
    for (int k = 0; k < 2; ++k) {
        // (G - lambda) v = 0 with the better-conditioned row
        std::array<cplx, 2> v = std::abs(e.lambda[k] - g.g11) > std::abs(e.lambda[k] - g.g22)
                                    ? std::array<cplx, 2>{g.g12, e.lambda[k] - g.g11}
                                    : std::array<cplx, 2>{e.lambda[k] - g.g22, std::conj(g.g12)};
        const double len = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
        // larger component real and positive
        const cplx lead = std::abs(v[0]) >= std::abs(v[1]) ? v[0] : v[1];
        const cplx phase = std::conj(lead) / std::abs(lead);
        e.vec[k] = {v[0] * phase / len, v[1] * phase / len};
    }
    return e;
}

// lambda_min / lambda_max of the Gram matrix of order l with the B = 1 solution
// rescaled to B = 1 / Z0, so both columns carry comparable interior fields.
double gram_balance(const FiberSpec& fiber, double omega, double beta, int l)
{
    const auto wn = wavenumbers(fiber, omega, beta);
    const auto bes = surface_bessels(fiber, wn, l);
    const auto sol = solve_order(fiber, omega, beta, wn, l, bes);
    if (sol.fiber_free)
        return 1.0;
    const auto g = gram(fiber, omega, wn.q, sol);
    const double z0 = std::sqrt(phys::mu0 / phys::eps0);
    const double s0 = sol.scale[0], s1 = sol.scale[1] / z0;
    const double g11 = g.g11 * s0 * s0, g22 = g.g22 * s1 * s1;
    const double g12 = std::abs(g.g12) * s0 * s1;
    const double mean = 0.5 * (g11 + g22);
    const double lmax = mean + std::hypot(0.5 * (g11 - g22), g12);
    return g.det * (s0 * s0) * (s1 * s1) / (lmax * lmax);
}

}  // namespace

std::vector<RadiationResonance> radiation_resonances(const FiberSpec& fiber, double omega)
{
    if (!(omega > 0.0))
        throw DomainError("radiation resonances require omega > 0");
    const double kn2 = omega / phys::c * fiber.n2;
    if (fiber.n1 == fiber.n2)
        return {};
    // scan in t = ln(1 - beta / k n2), as the integrator does
    const double t_min = std::log(1e-12);
    constexpr int kGrid = 256;
    const double dt = -t_min / kGrid;
    auto beta_at = [&](double t) { return -kn2 * std::expm1(t); };
    const int lres = static_cast<int>(std::ceil(omega / phys::c * fiber.n1 * fiber.a)) + 2;

    std::vector<RadiationResonance> out;
    for (int l = 0; l <= lres; ++l) {
        auto f = [&](double t) { return gram_balance(fiber, omega, beta_at(t), l); };
        std::vector<double> v(kGrid + 1);
        for (int i = 0; i <= kGrid; ++i)
            v[static_cast<std::size_t>(i)] = f(t_min + i * dt);
        for (int i = 1; i < kGrid; ++i) {
            if (!(v[i] < v[i - 1] && v[i] <= v[i + 1]))
                continue;
            const auto [t0, f0] = boost::math::tools::brent_find_minima(f, t_min + (i - 1) * dt, t_min + (i + 1) * dt,
                                                                        std::numeric_limits<double>::digits);
            const double d = 1e-3 * dt;
            const double curv = (f(t0 + d) + f(t0 - d) - 2.0 * f0) / (2.0 * d * d);
            if (!(curv > 0.0))
                continue;
            const double wt = std::sqrt(std::max(f0, 0.0) / curv);
            if (wt >= dt)
                continue;
            out.push_back({l, beta_at(t0), wt * kn2 * std::exp(t0)});
        }
    }
    return out;
}

RadField radiation_profile(const FiberSpec& fiber, const RadModeSpec& spec, double r, double phi, Side side)
{
    if (spec.p != 1 && spec.p != -1)
        throw DomainError("radiation polarization label must be +1 or -1");
    if (!(r > 0.0))
        throw DomainError("radiation profile requires r > 0");
    const auto wn = wavenumbers(fiber, spec.omega, spec.beta);
    const int n = std::abs(spec.l);
    const auto bes = surface_bessels(fiber, wn, n);
    const auto sol = solve_order(fiber, spec.omega, spec.beta, wn, spec.l, bes);
    const auto g = gram(fiber, spec.omega, wn.q, sol);
    const auto eig = eigen(g);
    const int k = spec.p == 1 ? 0 : 1;

    const bool core = side == Side::Auto ? r <= fiber.a : side == Side::Core;
    const int ny = sol.fiber_free ? -1 : n;
    const auto pb = point_bessels(fiber, wn, r, core, n, ny);
    const auto f0 = basis_field(fiber, spec.omega, spec.beta, wn, spec.l, sol, 0, pb, r);
    const auto f1 = basis_field(fiber, spec.omega, spec.beta, wn, spec.l, sol, 1, pb, r);
    const cplx c0 = eig.vec[k][0] / std::sqrt(eig.lambda[k]);
    const cplx c1 = eig.vec[k][1] / std::sqrt(eig.lambda[k]);
    const cplx ph = std::polar(1.0, spec.l * phi);
    return {ph * (c0 * f0.e_r + c1 * f1.e_r),     ph * (c0 * f0.e_phi + c1 * f1.e_phi),
            ph * (c0 * f0.e_z + c1 * f1.e_z),     ph * (c0 * f0.h_r + c1 * f1.h_r),
            ph * (c0 * f0.h_phi + c1 * f1.h_phi), ph * (c0 * f0.h_z + c1 * f1.h_z)};
}

std::vector<double> radiation_coupling_by_order(const FiberSpec& fiber, double omega, double beta, const Vec3c& u,
                                                double r, double phi, int lmax)
{
    if (lmax < 0)
        throw DomainError("lmax must be non-negative");
    if (!(r > 0.0))
        throw DomainError("radiation coupling requires r > 0");
    const auto wn = wavenumbers(fiber, omega, beta);
    const auto bes = surface_bessels(fiber, wn, lmax);
    const int ny = static_cast<int>(bes.yq_a.size()) - 1;
    const bool core = r <= fiber.a;
    const auto pb = point_bessels(fiber, wn, r, core, lmax, ny);

    std::vector<double> out(2 * static_cast<std::size_t>(lmax) + 1);
    for (int l = -lmax; l <= lmax; ++l) {
        const auto sol = solve_order(fiber, omega, beta, wn, l, bes);
        const cplx ph = std::polar(1.0, l * phi);
        const cplx v1 = ph * dot(u, electric(basis_field(fiber, omega, beta, wn, l, sol, 0, pb, r), phi));
        const cplx v2 = ph * dot(u, electric(basis_field(fiber, omega, beta, wn, l, sol, 1, pb, r), phi));
        // v G^{-1} v^H = v adj(G) v^H / det G, both as sums of squares; the
        // two solutions become nearly parallel at grazing incidence
        const auto w = gram_weights(fiber, omega, wn.q);
        const auto g = gram(fiber, omega, wn.q, sol);
        double num = 0.0;
        for (int i = 0; i < 4; ++i)
            num += w[i] * std::norm(sol.x[1][i] * v1 - sol.x[0][i] * v2);
        const double det = g.det;
        out[static_cast<std::size_t>(l + lmax)] = num / det;
    }
    return out;
}

}  // namespace chiralforce
