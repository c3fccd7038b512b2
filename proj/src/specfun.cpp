#include "chiralforce/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/bessel.hpp>

#include "chiralforce/errors.hpp"

namespace chiralforce {
namespace {

double raw_value(CylKind kind, int l, double x)
{
    try {
        switch (kind) {
        case CylKind::J: return boost::math::cyl_bessel_j(l, x);
        case CylKind::Y: return boost::math::cyl_neumann(l, x);
        case CylKind::I: return boost::math::cyl_bessel_i(l, x);
        case CylKind::K: return boost::math::cyl_bessel_k(l, x);
        }
    } catch (const std::overflow_error&) {
        throw OverflowError("cylinder function overflow: order " + std::to_string(l)
                            + " at x = " + std::to_string(x));
    }
    return 0.0;
}

void check_args(int l, double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("cylinder functions require x > 0, got " + std::to_string(x));
    if (l < 0)
        throw DomainError("cylinder functions require order >= 0, got " + std::to_string(l));
}

// Derivative from neighbouring orders.
//   J, Y: Z_l' = (Z_{l-1} - Z_{l+1}) / 2,   Z_0' = -Z_1
//   I:    I_l' = (I_{l-1} + I_{l+1}) / 2,   I_0' = I_1
//   K:    K_l' = -(K_{l-1} + K_{l+1}) / 2,  K_0' = -K_1
double derivative_from(CylKind kind, int l, double below, double above)
{
    switch (kind) {
    case CylKind::J:
    case CylKind::Y: return l == 0 ? -above : 0.5 * (below - above);
    case CylKind::I: return l == 0 ? above : 0.5 * (below + above);
    case CylKind::K: return l == 0 ? -above : -0.5 * (below + above);
    }
    return 0.0;
}

// Usable as a recurrence seed: finite, nonzero and clear of the subnormal range.
bool representable(double v)
{
    return std::isfinite(v) && std::abs(v) > 1e3 * std::numeric_limits<double>::min();
}

}  // namespace

CylEval cyl_bessel(CylKind kind, int l, double x)
{
    check_args(l, x);
    const double v = raw_value(kind, l, x);
    const double above = raw_value(kind, l + 1, x);
    const double below = l > 0 ? raw_value(kind, l - 1, x) : 0.0;
    return {v, derivative_from(kind, l, below, above)};
}

double cyl_value(CylKind kind, int l, double x)
{
    check_args(l, x);
    return raw_value(kind, l, x);
}

std::vector<CylEval> cyl_bessel_sequence(CylKind kind, int lmax, double x)
{
    check_args(lmax, x);
    const int top = lmax + 1;
    std::vector<double> z(static_cast<std::size_t>(top) + 1);

    if (kind == CylKind::Y || kind == CylKind::K) {
        // Forward recurrence: Y_{l+1} = (2l/x) Y_l - Y_{l-1};  K_{l+1} = (2l/x) K_l + K_{l-1}
        z[0] = raw_value(kind, 0, x);
        z[1] = raw_value(kind, 1, x);
        const double sign = kind == CylKind::Y ? -1.0 : 1.0;
        for (int l = 1; l < top; ++l) {
            z[l + 1] = (2.0 * l / x) * z[l] + sign * z[l - 1];
            if (!std::isfinite(z[l + 1]))
                throw OverflowError("cylinder function overflow: order " + std::to_string(l + 1)
                                    + " at x = " + std::to_string(x));
        }
    } else {
        // Backward recurrence: J_{l-1} = (2l/x) J_l - J_{l+1};  I_{l-1} = (2l/x) I_l + I_{l+1}.
        // Underflowed seeds are replaced by direct evaluation until the
        // sequence becomes representable.
        const double sign = kind == CylKind::J ? -1.0 : 1.0;
        int l = top;
        z[l] = raw_value(kind, l, x);
        z[l - 1] = raw_value(kind, l - 1, x);
        while (l - 1 > 0 && !(representable(z[l]) && representable(z[l - 1]))) {
            --l;
            z[l - 1] = raw_value(kind, l - 1, x);
        }
        for (; l - 1 > 0; --l)
            z[l - 2] = (2.0 * (l - 1) / x) * z[l - 1] + sign * z[l];
    }

    std::vector<CylEval> out(static_cast<std::size_t>(lmax) + 1);
    for (int l = 0; l <= lmax; ++l)
        out[l] = {z[l], derivative_from(kind, l, l > 0 ? z[l - 1] : 0.0, z[l + 1])};
    return out;
}

double bessel_j_zero(int l, int m)
{
    if (l < 0 || m < 1)
        throw DomainError("bessel_j_zero requires l >= 0 and m >= 1");

    auto J = [l](double x) { return raw_value(CylKind::J, l, x); };

    // All positive zeros of J_l exceed l; consecutive zeros are more than
    // pi/4 apart, so a pi/4 scan never skips a sign change.
    const double step = std::numbers::pi / 4.0;
    double lo = l > 0 ? static_cast<double>(l) : step;
    double flo = J(lo);
    int found = 0;
    for (;;) {
        const double hi = lo + step;
        const double fhi = J(hi);
        if (flo == 0.0) {
            if (++found == m) return lo;
        } else if (flo * fhi < 0.0 && ++found == m) {
            double a = lo, b = hi, fa = flo;
            while (b - a > 1e-13 * a) {
                const double mid = 0.5 * (a + b);
                const double fm = J(mid);
                if (fm == 0.0) return mid;
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            const double fb = J(b);
            if (fb == fa) return 0.5 * (a + b);
            const double secant = b - fb * (b - a) / (fb - fa);
            return (secant >= a && secant <= b) ? secant : 0.5 * (a + b);
        }
        lo = hi;
        flo = fhi;
    }
}

}  // namespace chiralforce
