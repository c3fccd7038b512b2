#pragma once

#include <vector>

namespace chiralforce {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi]. Nodes ascend; for a rule on a
/// symmetric interval, node i and node n-1-i are exact negatives.
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// Integrate f over [lo, hi] with `panels` equal panels of an n-point rule.
template <class F>
auto integrate_panels(F&& f, double lo, double hi, int panels, int n)
{
    const QuadratureRule unit = gauss_legendre(n);
    const double width = (hi - lo) / panels;
    decltype(f(lo)) sum{};
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * width;
        const double mid = a + 0.5 * width;
        for (std::size_t i = 0; i < unit.nodes.size(); ++i)
            sum += (0.5 * width * unit.weights[i]) * f(mid + 0.5 * width * unit.nodes[i]);
    }
    return sum;
}

}  // namespace chiralforce
