#include "chiralforce/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "chiralforce/errors.hpp"

namespace chiralforce {

QuadratureRule gauss_legendre(int n, double lo, double hi)
{
    if (n < 1)
        throw DomainError("gauss_legendre needs at least one node");

    std::vector<double> x(n), w(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration on P_n from the Tricomi initial guess.
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n == 1 ? 1.0 : n * (t * p1 - p0) / (t * t - 1.0);
        const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;

    const double mid = 0.5 * (lo + hi), half_width = 0.5 * (hi - lo);
    QuadratureRule rule{std::move(x), std::move(w)};
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half_width * rule.nodes[i];
        rule.weights[i] *= half_width;
    }
    return rule;
}

}  // namespace chiralforce
