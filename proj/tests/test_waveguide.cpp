#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"

#include "chiralforce/constants.hpp"
#include "chiralforce/errors.hpp"
#include "chiralforce/waveguide.hpp"
#include "support.hpp"

using namespace chiralforce;
using namespace testing;
using cd = std::complex<double>;

namespace {

const cd I{0.0, 1.0};

// Pole-free step-index characteristic function in beta, built on the
// standard library's Bessel functions:  J^2 [(X + Kt)(n1^2 X + n2^2 Kt) - R].
double oracle_characteristic(const FiberSpec& f, int l, double omega, double beta)
{
    const double k = omega / phys::c;
    const double u = std::sqrt(f.n1 * f.n1 * k * k - beta * beta) * f.a;
    const double w = std::sqrt(beta * beta - f.n2 * f.n2 * k * k) * f.a;
    const double J = std::cyl_bessel_j(l, u);
    const double Jp = l == 0 ? -std::cyl_bessel_j(1, u) : 0.5 * (std::cyl_bessel_j(l - 1, u) - std::cyl_bessel_j(l + 1, u));
    const double K = std::cyl_bessel_k(l, w);
    const double Kp = l == 0 ? -std::cyl_bessel_k(1, w) : -0.5 * (std::cyl_bessel_k(l - 1, w) + std::cyl_bessel_k(l + 1, w));
    const double Kt = Kp / (w * K);
    const double XJ = Jp / u;  // X * J
    const double n1s = f.n1 * f.n1, n2s = f.n2 * f.n2;
    const double R = l * l * (1.0 / (u * u) + 1.0 / (w * w)) * (n1s / (u * u) + n2s / (w * w));
    return (XJ + Kt * J) * (n1s * XJ + n2s * Kt * J) - R * J * J;
}

// Largest-beta root of the oracle on a uniform 10^4-point grid.
double oracle_largest_root(const FiberSpec& f, int l, double omega)
{
    const double k = omega / phys::c;
    const double lo = f.n2 * k, hi = f.n1 * k;
    const int n = 10000;
    double prev_b = hi - (hi - lo) * 0.5 / n;
    double prev = oracle_characteristic(f, l, omega, prev_b);
    for (int i = 1; i < n; ++i) {
        const double b = hi - (hi - lo) * (i + 0.5) / n;
        const double v = oracle_characteristic(f, l, omega, b);
        if (prev * v < 0.0) {
            double x0 = b, x1 = prev_b, f0 = v;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (x0 + x1);
                if (mid <= x0 || mid >= x1) break;
                const double fm = oracle_characteristic(f, l, omega, mid);
                if ((fm < 0.0) == (f0 < 0.0)) {
                    x0 = mid;
                    f0 = fm;
                } else {
                    x1 = mid;
                }
            }
            return 0.5 * (x0 + x1);
        }
        prev = v;
        prev_b = b;
    }
    return std::nan("");
}

double index_at(const GuidedMode& m, double r) { return r <= m.fiber.a ? m.fiber.n1 : m.fiber.n2; }

// 2 pi int_0^inf g(r) r dr split at the fiber surface, by double-exponential
// quadrature (independent of the library's Gauss-Legendre panels).
template <class G>
double cross_section(const GuidedMode& m, G&& g)
{
    boost::math::quadrature::tanh_sinh<double> inner;
    boost::math::quadrature::exp_sinh<double> outer;
    const double a = m.fiber.a;
    const double scale = 1.0 / a;
    auto in = [&](double t) { return g(t * a) * t * a * a; };
    auto out = [&](double t) { return g(t * a) * t * a * a; };
    const double core = inner.integrate(in, 0.0, 1.0, 1e-14);
    const double clad = outer.integrate(out, 1.0, std::numeric_limits<double>::infinity(), 1e-14);
    (void)scale;
    return 2.0 * std::numbers::pi * (core + clad);
}

std::vector<GuidedMode> reference_modes()
{
    std::vector<GuidedMode> modes;
    for (const char* name : {"HE11", "TE01", "TM01", "HE21"})
        modes.push_back(*solve_dispersion(reference_fiber(), parse_mode_kind(name), reference_omega()));
    return modes;
}

// radial derivatives by a 5-point stencil
template <class F>
cd d1(F&& f, double r, double h)
{
    return (-f(r + 2 * h) + 8.0 * f(r + h) - 8.0 * f(r - h) + f(r - 2 * h)) / (12.0 * h);
}
template <class F>
cd d2(F&& f, double r, double h)
{
    return (-f(r + 2 * h) + 16.0 * f(r + h) - 30.0 * f(r) + 16.0 * f(r - h) - f(r - 2 * h)) / (12.0 * h * h);
}

}  // namespace

TEST_SUITE("waveguide") {

TEST_CASE("V-number")
{
    // direct arithmetic in long double
    const long double V = 2.0L * std::numbers::pi_v<long double> / 780e-9L * 350e-9L
                          * std::sqrt(1.4537L * 1.4537L - 1.0L);
    CHECK(rel_err(v_number(reference_fiber(), kLambda), static_cast<double>(V)) < 1e-14);
    CHECK(v_number(reference_fiber(), kLambda) == doctest::Approx(2.9747).epsilon(1e-4));
    CHECK(v_number(FiberSpec(1e-15, kN1, kN2), kLambda) < 1e-7);
    CHECK(v_number(FiberSpec(kRadius, 1.0, 1.0), kLambda) == 0.0);
    CHECK_THROWS_AS(v_number(reference_fiber(), -1.0), DomainError);
}

TEST_CASE("fiber and mode-kind validation")
{
    CHECK_THROWS_AS(FiberSpec(-1.0, 1.45, 1.0), DomainError);
    CHECK_THROWS_AS(FiberSpec(1e-7, 1.0, 1.45), DomainError);
    CHECK_THROWS_AS(ModeKind(ModeFamily::TE, 1, 1), DomainError);
    CHECK_THROWS_AS(ModeKind(ModeFamily::HE, 0, 1), DomainError);
    CHECK(parse_mode_kind("he21").label() == "HE21");
    CHECK(parse_mode_kind("EH_12_3") == ModeKind(ModeFamily::EH, 12, 3));
    CHECK_THROWS_AS(parse_mode_kind("XY11"), DomainError);
    CHECK_THROWS_AS(parse_mode_kind("TE11"), DomainError);
}

TEST_CASE("HE11 root matches the grid-bisection oracle")
{
    const auto m = solve_dispersion(reference_fiber(), parse_mode_kind("HE11"), reference_omega());
    REQUIRE(m);
    const double oracle = oracle_largest_root(reference_fiber(), 1, reference_omega());
    CHECK(rel_err(m->beta, oracle) < 1e-10);
    CHECK(m->beta / m->k() > 1.0);
    CHECK(m->beta / m->k() < kN1);
    CHECK(m->residual < 1e-10);
    CHECK(characteristic_residual(m->fiber, m->kind, m->omega, m->beta) < 1e-10);
}

TEST_CASE("guided-mode invariants for the reference modes")
{
    for (const auto& m : reference_modes()) {
        CAPTURE(m.kind.label());
        const double k = m.k();
        CHECK(m.beta > kN2 * k);
        CHECK(m.beta < kN1 * k);
        CHECK(rel_err(m.h * m.h + m.q * m.q, (kN1 * kN1 - kN2 * kN2) * k * k) < 1e-12);
        CHECK(m.beta_prime > 0.0);
        CHECK_FALSE(m.beta_prime_degraded);
        CHECK(characteristic_residual(m.fiber, m.kind, m.omega, m.beta) < 1e-10);
    }
}

TEST_CASE("below cutoff and without index contrast nothing is guided")
{
    // a = 200 nm gives V ~ 1.70 < j01
    CHECK(v_number(reference_fiber(200e-9), kLambda) < 2.404825557695773);
    CHECK_FALSE(solve_dispersion(reference_fiber(200e-9), parse_mode_kind("TE01"), reference_omega()));
    CHECK(solve_dispersion(reference_fiber(200e-9), parse_mode_kind("HE11"), reference_omega()));
    const FiberSpec bare(kRadius, 1.0, 1.0);
    CHECK_FALSE(solve_dispersion(bare, parse_mode_kind("HE11"), reference_omega()));
    CHECK(guided_modes(bare, reference_omega()).empty());
}

TEST_CASE("mode enumeration and ordering")
{
    const auto modes = guided_modes(reference_fiber(), reference_omega());
    REQUIRE(modes.size() == 4);
    CHECK(modes[0].kind.label() == "HE11");
    CHECK(modes[1].kind.label() == "TE01");
    CHECK(modes[2].kind.label() == "TM01");
    CHECK(modes[3].kind.label() == "HE21");

    const auto only = guided_modes(reference_fiber(200e-9), reference_omega());
    REQUIRE(only.size() == 1);
    CHECK(only[0].kind.label() == "HE11");

    // beta falls with radial order inside a family
    const auto big = guided_modes(reference_fiber(1200e-9), reference_omega());
    const auto he11 = solve_dispersion(reference_fiber(1200e-9), parse_mode_kind("HE11"), reference_omega());
    const auto he12 = solve_dispersion(reference_fiber(1200e-9), parse_mode_kind("HE12"), reference_omega());
    const auto he13 = solve_dispersion(reference_fiber(1200e-9), parse_mode_kind("HE13"), reference_omega());
    REQUIRE(he13);
    CHECK(he11->beta > he12->beta);
    CHECK(he12->beta > he13->beta);
    for (std::size_t i = 1; i < big.size(); ++i)
        CHECK(big[i - 1].beta >= big[i].beta);
}

TEST_CASE("cutoff radii")
{
    // a = j01 lambda / (2 pi sqrt(n1^2 - n2^2))
    const double expected = 2.404825557695773 * kLambda / (2.0 * std::numbers::pi * std::sqrt(kN1 * kN1 - kN2 * kN2));
    const double te = cutoff_radius(parse_mode_kind("TE01"), kLambda, kN1, kN2);
    const double tm = cutoff_radius(parse_mode_kind("TM01"), kLambda, kN1, kN2);
    CHECK(rel_err(te, expected) < 1e-10);
    CHECK(rel_err(tm, expected) < 1e-10);
    CHECK(std::abs(te * 1e9 - 282.96) < 0.1);
    CHECK(rel_err(cutoff_radius(parse_mode_kind("TM01"), 2.0 * kLambda, kN1, kN2), 2.0 * tm) < 1e-12);
    CHECK_THROWS_AS(cutoff_radius(parse_mode_kind("HE11"), kLambda, kN1, kN2), DomainError);
}

TEST_CASE("cutoff radii bracket the solver's guided/not-guided boundary")
{
    for (const char* name : {"TE01", "TM01", "HE21", "HE12", "EH11", "HE31", "TE02", "EH21", "HE22"}) {
        const auto kind = parse_mode_kind(name);
        const double ac = cutoff_radius(kind, kLambda, kN1, kN2);
        const std::string label = name;
        CAPTURE(label);
        CHECK_FALSE(solve_dispersion(reference_fiber(ac * (1.0 - 1e-5)), kind, reference_omega()));
        // HE_1m modes detach from the cladding light line exponentially slowly
        // (q a ~ 3e-5 at 1% above cutoff), so they need a wider margin
        const double above = kind.family == ModeFamily::HE && kind.l == 1 ? 1e-2 : 1e-5;
        CHECK(solve_dispersion(reference_fiber(ac * (1.0 + above)), kind, reference_omega()));
    }
}

TEST_CASE("interface continuity")
{
    const double a = kRadius;
    for (const auto& m : reference_modes()) {
        CAPTURE(m.kind.label());
        for (double phi : {0.0, 0.7}) {
            const auto in = mode_profile(m, a, phi, Direction::Forward, Circulation::Plus, Normalization::Quantum, Side::Core);
            const auto out = mode_profile(m, a, phi, Direction::Forward, Circulation::Plus, Normalization::Quantum, Side::Cladding);
            const double scale = std::abs(out.e_r) + std::abs(out.e_phi) + std::abs(out.e_z);
            const double hscale = std::abs(out.h_r) + std::abs(out.h_phi) + std::abs(out.h_z);
            CHECK(std::abs(in.e_phi - out.e_phi) < 1e-10 * scale);
            CHECK(std::abs(in.e_z - out.e_z) < 1e-10 * scale);
            CHECK(std::abs(kN1 * kN1 * in.e_r - kN2 * kN2 * out.e_r) < 1e-10 * scale);
            CHECK(std::abs(in.h_phi - out.h_phi) < 1e-10 * hscale);
            CHECK(std::abs(in.h_z - out.h_z) < 1e-10 * hscale);
            CHECK(std::abs(in.h_r - out.h_r) < 1e-10 * hscale);
        }
    }
}

TEST_CASE("TE01 carries only an azimuthal electric field")
{
    const auto m = *solve_dispersion(reference_fiber(), parse_mode_kind("TE01"), reference_omega());
    for (double r : {0.3 * kRadius, kRadius * 1.01, 2.5 * kRadius}) {
        const auto e = mode_profile(m, r, 0.4, Direction::Forward, Circulation::Plus, Normalization::Quantum);
        CHECK(std::abs(e.e_z) == 0.0);
        CHECK(std::abs(e.e_r) == 0.0);
        CHECK(std::abs(e.e_phi) > 0.0);
    }
}

TEST_CASE("exterior decay follows K_l(q r)")
{
    for (const auto& m : reference_modes()) {
        if (m.kind.family == ModeFamily::TE)
            continue;
        const auto e2 = mode_profile(m, 2 * kRadius, 0.0, Direction::Forward, Circulation::Plus, Normalization::Quantum);
        const auto e4 = mode_profile(m, 4 * kRadius, 0.0, Direction::Forward, Circulation::Plus, Normalization::Quantum);
        const double want = std::cyl_bessel_k(m.kind.l, 2 * m.q * kRadius) / std::cyl_bessel_k(m.kind.l, 4 * m.q * kRadius);
        CHECK(rel_err(std::abs(e2.e_z) / std::abs(e4.e_z), want) < 1e-10);
    }
}

TEST_CASE("Helmholtz equation and divergence-free field in each region")
{
    const double a = kRadius, step = a / 2000.0;
    for (const auto& m : reference_modes()) {
        for (auto f : {Direction::Forward, Direction::Backward}) {
            for (auto p : {Circulation::Plus, Circulation::Minus}) {
                const int nu = sign(p) * m.kind.l;
                const double bz = sign(f) * m.beta;
                for (double r : {0.5 * a, 1.5 * a, 3.0 * a}) {
                    const double n = index_at(m, r);
                    const double kappa2 = n * n * m.k() * m.k() - m.beta * m.beta;
                    auto field = [&](double rr) {
                        return mode_profile(m, rr, 0.0, f, p, Normalization::Quantum,
                                            r < a ? Side::Core : Side::Cladding);
                    };
                    auto ez = [&](double rr) { return field(rr).e_z; };
                    auto hz = [&](double rr) { return field(rr).h_z; };
                    auto ep = [&](double rr) { auto e = field(rr); return e.e_r + I * e.e_phi; };
                    auto em = [&](double rr) { auto e = field(rr); return e.e_r - I * e.e_phi; };
                    auto helm = [&](auto&& g, int order) {
                        const cd v = g(r);
                        const cd res = d2(g, r, step) + d1(g, r, step) / r + (kappa2 - order * order / (r * r)) * v;
                        return std::abs(res);
                    };
                    const auto e = field(r);
                    const double emag = std::abs(e.e_r) + std::abs(e.e_phi) + std::abs(e.e_z);
                    const double hmag = std::abs(e.h_r) + std::abs(e.h_phi) + std::abs(e.h_z);
                    const double k2 = std::abs(kappa2) + m.beta * m.beta;
                    CAPTURE(m.kind.label());
                    CAPTURE(r / a);
                    CHECK(helm(ez, nu) < 1e-6 * k2 * emag);
                    CHECK(helm(hz, nu) < 1e-6 * k2 * hmag);
                    CHECK(helm(ep, nu + 1) < 1e-6 * k2 * emag);
                    CHECK(helm(em, nu - 1) < 1e-6 * k2 * emag);

                    auto rer = [&](double rr) { return rr * field(rr).e_r; };
                    const cd div = d1(rer, r, step) / r + I * (nu / r) * e.e_phi + I * bz * e.e_z;
                    CHECK(std::abs(div) < 1e-6 * std::sqrt(k2) * emag);
                }
            }
        }
    }
}

TEST_CASE("Faraday and Ampere laws hold for every direction and circulation")
{
    const double a = kRadius, step = a / 2000.0;
    for (const auto& m : reference_modes()) {
        const double w = m.omega;
        for (auto f : {Direction::Forward, Direction::Backward}) {
            for (auto p : {Circulation::Plus, Circulation::Minus}) {
                const int nu = sign(p) * m.kind.l;
                const double bz = sign(f) * m.beta;
                for (double r : {0.5 * a, 1.7 * a}) {
                    const double n = index_at(m, r);
                    auto field = [&](double rr) { return mode_profile(m, rr, 0.0, f, p, Normalization::Quantum); };
                    const auto e = field(r);
                    const cd dez = d1([&](double rr) { return field(rr).e_z; }, r, step);
                    const cd drep = d1([&](double rr) { return rr * field(rr).e_phi; }, r, step);
                    const cd dhz = d1([&](double rr) { return field(rr).h_z; }, r, step);
                    const cd drhp = d1([&](double rr) { return rr * field(rr).h_phi; }, r, step);

                    const double hs = w * phys::mu0 * (std::abs(e.h_r) + std::abs(e.h_phi) + std::abs(e.h_z));
                    const double es = w * phys::eps0 * n * n * (std::abs(e.e_r) + std::abs(e.e_phi) + std::abs(e.e_z));
                    const cd iwm = I * w * phys::mu0, iwe = -I * w * phys::eps0 * n * n;
                    CAPTURE(m.kind.label());
                    CHECK(std::abs(I * (nu / r) * e.e_z - I * bz * e.e_phi - iwm * e.h_r) < 1e-7 * hs);
                    CHECK(std::abs(I * bz * e.e_r - dez - iwm * e.h_phi) < 1e-7 * hs);
                    CHECK(std::abs((drep - I * double(nu) * e.e_r) / r - iwm * e.h_z) < 1e-7 * hs);
                    CHECK(std::abs(I * (nu / r) * e.h_z - I * bz * e.h_phi - iwe * e.e_r) < 1e-7 * es);
                    CHECK(std::abs(I * bz * e.h_r - dhz - iwe * e.e_phi) < 1e-7 * es);
                    CHECK(std::abs((drhp - I * double(nu) * e.h_r) / r - iwe * e.e_z) < 1e-7 * es);
                }
            }
        }
    }
}

TEST_CASE("quantum and power normalizations close")
{
    for (const auto& m : reference_modes()) {
        CAPTURE(m.kind.label());
        const double nq = cross_section(m, [&](double r) {
            const auto e = mode_profile(m, r, 0.0, Direction::Forward, Circulation::Plus, Normalization::Quantum);
            const double n = index_at(m, r);
            return n * n * (std::norm(e.e_r) + std::norm(e.e_phi) + std::norm(e.e_z));
        });
        CHECK(std::abs(nq - 1.0) < 1e-8);
        const double pw = cross_section(m, [&](double r) {
            const auto e = mode_profile(m, r, 0.0, Direction::Forward, Circulation::Plus, Normalization::Power);
            return 0.5 * (e.e_r * std::conj(e.h_phi) - e.e_phi * std::conj(e.h_r)).real();
        });
        CHECK(std::abs(pw - 1.0) < 1e-8);
        // backward modes carry the flux the other way
        const double back = cross_section(m, [&](double r) {
            const auto e = mode_profile(m, r, 0.0, Direction::Backward, Circulation::Minus, Normalization::Power);
            return 0.5 * (e.e_r * std::conj(e.h_phi) - e.e_phi * std::conj(e.h_r)).real();
        });
        CHECK(std::abs(back + 1.0) < 1e-8);
    }
}

TEST_CASE("energy transport velocity equals the group velocity")
{
    for (const auto& m : reference_modes()) {
        auto flux = cross_section(m, [&](double r) {
            const auto e = mode_profile(m, r, 0.0, Direction::Forward, Circulation::Plus, Normalization::Power);
            return 0.5 * (e.e_r * std::conj(e.h_phi) - e.e_phi * std::conj(e.h_r)).real();
        });
        auto energy = cross_section(m, [&](double r) {
            const auto e = mode_profile(m, r, 0.0, Direction::Forward, Circulation::Plus, Normalization::Power);
            const double n = index_at(m, r);
            return 0.25 * (phys::eps0 * n * n * (std::norm(e.e_r) + std::norm(e.e_phi) + std::norm(e.e_z))
                           + phys::mu0 * (std::norm(e.h_r) + std::norm(e.h_phi) + std::norm(e.h_z)));
        });
        CAPTURE(m.kind.label());
        CHECK(rel_err(flux / energy, 1.0 / m.beta_prime) < 1e-5);
        CHECK(rel_err(group_slowness(m), m.beta_prime) < 1e-9);
    }
}

TEST_CASE("group index approaches the core index far above cutoff")
{
    const auto m = *solve_dispersion(reference_fiber(2e-6), parse_mode_kind("HE11"), reference_omega());
    CHECK(std::abs(m.beta_prime * phys::c / kN1 - 1.0) < 0.02);
}

TEST_CASE("near cutoff the group slowness falls back to a one-sided difference")
{
    const auto kind = parse_mode_kind("TM01");
    const double ac = cutoff_radius(kind, kLambda, kN1, kN2);
    const auto m = solve_dispersion(reference_fiber(ac * (1.0 + 1e-7)), kind, reference_omega());
    REQUIRE(m);
    CHECK(m->beta_prime_degraded);
    CHECK(m->beta_prime > 0.0);
}

TEST_CASE("axial and radial components are in phase quadrature")
{
    std::vector<GuidedMode> modes = reference_modes();
    modes.push_back(*solve_dispersion(reference_fiber(600e-9), parse_mode_kind("EH11"), reference_omega()));
    for (const auto& m : modes) {
        if (m.kind.family == ModeFamily::TE)
            continue;
        for (double r : {1.001 * m.fiber.a, 1.5 * m.fiber.a, 4.0 * m.fiber.a}) {
            for (auto f : {Direction::Forward, Direction::Backward}) {
                const auto e = mode_profile(m, r, 0.0, f, Circulation::Plus, Normalization::Quantum);
                CHECK(std::abs((e.e_r * std::conj(e.e_z)).real()) <= 1e-12 * std::abs(e.e_r * std::conj(e.e_z)));
            }
        }
        // reference phase: e_r real and positive just outside the surface
        const auto s = mode_profile(m, m.fiber.a, 0.0, Direction::Forward, Circulation::Plus, Normalization::Quantum,
                                    Side::Cladding);
        CHECK(s.e_r.imag() == 0.0);
        CHECK(s.e_r.real() > 0.0);
    }
}

TEST_CASE("exterior ratio e_z/e_r tends to -i f q / beta")
{
    for (const auto& m : reference_modes()) {
        if (m.kind.family == ModeFamily::TE)
            continue;
        CAPTURE(m.kind.label());
        for (auto f : {Direction::Forward, Direction::Backward}) {
            const cd limit = -I * double(sign(f)) * m.q / m.beta;
            double prev = 1e300;
            for (double r : {10.0 * kRadius, 40.0 * kRadius, 160.0 * kRadius}) {
                const auto e = mode_profile(m, r, 0.0, f, Circulation::Plus, Normalization::Quantum);
                const double dev = rel_err(e.e_z / e.e_r, limit);
                // approach is algebraic in 1/(q r)
                CHECK(dev < prev);
                CHECK(dev < 2.0 / (m.q * r));
                prev = dev;
            }
        }
    }
}

TEST_CASE("quasilinear drive field")
{
    const double P = 1e-12;
    for (const char* name : {"HE11", "TM01", "HE21"}) {
        const auto m = *solve_dispersion(reference_fiber(), parse_mode_kind(name), reference_omega());
        const double r = kRadius + 100e-9;
        const std::string label = name;
        const auto fw = quasilinear_drive_field(m, 0.0, Direction::Forward, P, r, 0.0);
        const auto bw = quasilinear_drive_field(m, 0.0, Direction::Backward, P, r, 0.0);
        const auto big = quasilinear_drive_field(m, 0.0, Direction::Forward, 4.0 * P, r, 0.0);
        CAPTURE(label);
        CHECK(std::abs(fw.e_phi) == 0.0);
        CHECK(rel_err(big.e_r, 2.0 * fw.e_r) < 1e-14);
        CHECK(rel_err(big.e_z, 2.0 * fw.e_z) < 1e-14);
        CHECK(rel_err(bw.e_r, fw.e_r) < 1e-14);
        CHECK(rel_err(bw.e_z, -fw.e_z) < 1e-14);

        // the superposition carries power P
        const double flux = cross_section(m, [&](double rr) {
            double sum = 0.0;
            // average over azimuth for the quasilinear (phi-dependent) field
            for (int j = 0; j < 16; ++j) {
                const auto e = quasilinear_drive_field(m, 0.0, Direction::Forward, P, rr, 2.0 * std::numbers::pi * j / 16.0);
                sum += 0.5 * (e.e_r * std::conj(e.h_phi) - e.e_phi * std::conj(e.h_r)).real();
            }
            return sum / 16.0;
        });
        CHECK(rel_err(flux, P) < 1e-8);
    }
    // y orientation turns the field at phi = 0 azimuthal
    const auto he = *solve_dispersion(reference_fiber(), parse_mode_kind("HE11"), reference_omega());
    const auto y = quasilinear_drive_field(he, std::numbers::pi / 2, Direction::Forward, P, 2 * kRadius, 0.0);
    CHECK(std::abs(y.e_r) < 1e-14 * std::abs(y.e_phi));
    CHECK(std::abs(y.e_z) < 1e-14 * std::abs(y.e_phi));
}

}  // TEST_SUITE
