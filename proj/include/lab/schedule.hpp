#pragma once

#include "lab/vec.hpp"

namespace lab {

// Bridge coefficient schedule: m(t) = alpha / sinh(alpha (T-t)) and
// f(t) = d log m / dt = alpha coth(alpha (T-t)). The alpha -> 0 limit of
// both is 1/(T-t); we switch to that branch when alpha (T-t) < 1e-6.
struct Schedule {
    double alpha = 0.0;
    double T = 1.0;

    double m(double t) const;
    double f(double t) const;
};

// Affine pinning drift m(t) v - f(t) y.
Vec bridge_drift(const Vec& y, const Vec& v, double t, const Schedule& sched);

struct GaussMoments {
    Vec mean;
    double var = 0.0;  // per component
};

// Law of the noising process at reversed time t_rev started from v:
// mean = exp(-alpha t) v, var = (1 - exp(-2 alpha t)) / (2 alpha).
GaussMoments forward_marginal(const Vec& v, double t_rev, double alpha);

// Conditional mean/variance of the pinned path at bridge time t given
// Y_0 = y0 and terminal value v. The variance integral m(t)^-2 int m(s)^2 ds
// is done by composite midpoint quadrature with 10^4 panels.
GaussMoments analytic_bridge_moments(const Vec& y0, const Vec& v, double t,
                                     const Schedule& sched);

}  // namespace lab
