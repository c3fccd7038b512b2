#pragma once

#include <vector>

namespace chiralforce {

/// Cylinder functions of integer order: Bessel J, Neumann Y, modified I and K.
enum class CylKind { J, Y, I, K };

struct CylEval {
    double value;
    double derivative;  // d/dx
};

/// Value and first derivative of the cylinder function of order l >= 0 at x > 0.
/// Throws DomainError for x <= 0 or l < 0, OverflowError when the value is not
/// representable (I at very large x, Y and K of high order at tiny x).
CylEval cyl_bessel(CylKind kind, int l, double x);

/// Value only; same domain and errors as cyl_bessel.
double cyl_value(CylKind kind, int l, double x);

/// Values and derivatives for orders 0..lmax at a single argument, built by
/// recurrence in the numerically stable direction for each kind.
std::vector<CylEval> cyl_bessel_sequence(CylKind kind, int lmax, double x);

/// m-th positive zero (m >= 1) of J_l.
double bessel_j_zero(int l, int m);

}  // namespace chiralforce
