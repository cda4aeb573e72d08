#include "lab/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace {

constexpr double kSmallArg = 1e-6;  // alpha (T-t) below this uses the alpha->0 branch

// log sinh(x), stable for both tiny and huge x.
double log_sinh(double x) {
    return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
}

}  // namespace

namespace lab {

double Schedule::m(double t) const {
    if (t >= T) throw std::invalid_argument("Schedule::m: t must be < T");
    const double u = T - t;
    const double x = alpha * u;
    if (x < kSmallArg) return 1.0 / u;
    return std::exp(std::log(alpha) - log_sinh(x));
}

double Schedule::f(double t) const {
    if (t >= T) throw std::invalid_argument("Schedule::f: t must be < T");
    const double u = T - t;
    const double x = alpha * u;
    if (x < kSmallArg) return 1.0 / u;
    // alpha coth(x) = alpha (1 + 2/(e^{2x}-1))
    return alpha * (1.0 + 2.0 / std::expm1(2.0 * x));
}

Vec bridge_drift(const Vec& y, const Vec& v, double t, const Schedule& sched) {
    const double mt = sched.m(t);
    const double ft = sched.f(t);
    Vec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = mt * v[i] - ft * y[i];
    return out;
}

GaussMoments forward_marginal(const Vec& v, double t_rev, double alpha) {
    if (t_rev < 0.0) throw std::invalid_argument("forward_marginal: negative time");
    GaussMoments out;
    if (alpha <= 0.0) {
        out.mean = v;
        out.var = t_rev;
        return out;
    }
    out.mean = scaled(v, std::exp(-alpha * t_rev));
    out.var = -std::expm1(-2.0 * alpha * t_rev) / (2.0 * alpha);
    return out;
}

GaussMoments analytic_bridge_moments(const Vec& y0, const Vec& v, double t,
                                     const Schedule& sched) {
    const double T = sched.T;
    if (t < 0.0 || t >= T) throw std::invalid_argument("analytic_bridge_moments: t out of range");

    // Weights m(0)/m(t) and m(0)/m(T-t), i.e. sinh(a(T-t))/sinh(aT) and
    // sinh(a t)/sinh(a T); alpha->0 limits (T-t)/T and t/T.
    double w0, wv;
    const double a = sched.alpha;
    if (a * T < kSmallArg) {
        w0 = (T - t) / T;
        wv = t / T;
    } else {
        w0 = std::exp(log_sinh(a * (T - t)) - log_sinh(a * T));
        wv = (t == 0.0) ? 0.0 : std::exp(log_sinh(a * t) - log_sinh(a * T));
    }

    GaussMoments out;
    out.mean.resize(y0.size());
    for (std::size_t i = 0; i < y0.size(); ++i) out.mean[i] = w0 * y0[i] + wv * v[i];

    // var = int_0^t (m(s)/m(t))^2 ds, midpoint rule.
    const std::size_t panels = 10000;
    const double h = t / static_cast<double>(panels);
    double acc = 0.0;
    for (std::size_t j = 0; j < panels; ++j) {
        const double s = (static_cast<double>(j) + 0.5) * h;
        double ratio;
        if (a * T < kSmallArg)
            ratio = (T - t) / (T - s);
        else
            ratio = std::exp(log_sinh(a * (T - t)) - log_sinh(a * (T - s)));
        acc += ratio * ratio;
    }
    out.var = acc * h;
    return out;
}

}  // namespace lab
