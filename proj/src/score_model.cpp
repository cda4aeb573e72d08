#include "lab/score_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lab {

void ScoreModel::channel(double t, double& a, double& s2) const {
    const double tau = sched.T - t;
    if (tau <= 0.0) throw std::invalid_argument("ScoreModel: t must be < T");
    if (sched.alpha <= 0.0) {
        a = 1.0;
        s2 = tau;
    } else {
        a = std::exp(-sched.alpha * tau);
        s2 = -std::expm1(-2.0 * sched.alpha * tau) / (2.0 * sched.alpha);
    }
}

Vec ScoreModel::responsibilities(const Vec& y, double t,
                                 const std::vector<std::size_t>* support) const {
    if (scenario.kind != LatentScenario::Kind::finite_mixture)
        throw std::invalid_argument("responsibilities: finite-mixture scenario required");
    double a, s2;
    channel(t, a, s2);
    const std::size_t K = scenario.n_components();
    Vec logw(K, -std::numeric_limits<double>::infinity());
    auto in_support = [&](std::size_t k) {
        if (!support) return true;
        return std::find(support->begin(), support->end(), k) != support->end();
    };
    bool any = false;
    for (std::size_t k = 0; k < K; ++k) {
        if (!in_support(k)) continue;
        const Vec mean = scaled(scenario.components[k].rendering, a);
        logw[k] = std::log(scenario.components[k].weight) - 0.5 * dist2(y, mean) / s2;
        any = true;
    }
    if (!any) throw std::invalid_argument("responsibilities: label has empty support");
    const double mx = *std::max_element(logw.begin(), logw.end());
    Vec r(K, 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        if (std::isinf(logw[k])) continue;
        r[k] = std::exp(logw[k] - mx);
        total += r[k];
    }
    for (double& v : r) v /= total;
    return r;
}

Vec ScoreModel::posterior_mean(const Vec& y, double t) const {
    if (scenario.kind == LatentScenario::Kind::gaussian) {
        double a, s2;
        channel(t, a, s2);
        const double denom = a * a * scenario.var0 + s2;
        const double gain = a * scenario.var0 / denom;
        Vec out(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            out[i] = scenario.mu0[i] + gain * (y[i] - a * scenario.mu0[i]);
        return out;
    }
    const Vec r = responsibilities(y, t);
    Vec out(scenario.dim, 0.0);
    for (std::size_t k = 0; k < r.size(); ++k)
        axpy(r[k], scenario.components[k].rendering, out);
    return out;
}

Vec ScoreModel::posterior_mean_given(const Vec& y, double t, std::size_t attr,
                                     int label) const {
    const auto support = scenario.label_support(attr, label);
    const Vec r = responsibilities(y, t, &support);
    Vec out(scenario.dim, 0.0);
    for (std::size_t k = 0; k < r.size(); ++k)
        axpy(r[k], scenario.components[k].rendering, out);
    return out;
}

Vec ScoreModel::score(const Vec& y, double t) const {
    if (scenario.kind == LatentScenario::Kind::gaussian) {
        double a, s2;
        channel(t, a, s2);
        const double denom = a * a * scenario.var0 + s2;
        Vec out(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            out[i] = -(y[i] - a * scenario.mu0[i]) / denom;
        return out;
    }
    double a, s2;
    channel(t, a, s2);
    const Vec r = responsibilities(y, t);
    Vec out(scenario.dim, 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) {
        const Vec& v = scenario.components[k].rendering;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += r[k] * (-(y[i] - a * v[i]) / s2);
    }
    return out;
}

Vec ScoreModel::score_given(const Vec& y, double t, std::size_t attr, int label) const {
    double a, s2;
    channel(t, a, s2);
    const auto support = scenario.label_support(attr, label);
    const Vec r = responsibilities(y, t, &support);
    Vec out(scenario.dim, 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) {
        const Vec& v = scenario.components[k].rendering;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += r[k] * (-(y[i] - a * v[i]) / s2);
    }
    return out;
}

Vec ScoreModel::score_given_value(const Vec& y, double t, const Vec& v) const {
    double a, s2;
    channel(t, a, s2);
    Vec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = -(y[i] - a * v[i]) / s2;
    return out;
}

Vec ScoreModel::bridge_score(const Vec& y, double t, const Vec& v) const {
    double a, s2;
    channel(t, a, s2);
    if (scenario.kind == LatentScenario::Kind::gaussian) {
        // log p(v|y) is Gaussian in v with mean linear in y; differentiate in y.
        const double denom = a * a * scenario.var0 + s2;
        const double gain = a * scenario.var0 / denom;     // d mu_post / d y
        const double post_var = scenario.var0 * s2 / denom;
        Vec mu = posterior_mean(y, t);
        Vec out(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            out[i] = (v[i] - mu[i]) / post_var * gain;
        return out;
    }
    // grad_y log r_k(y): per-component likelihood gradient minus the
    // responsibility-weighted average of the same gradients.
    const Vec r = responsibilities(y, t);
    Vec out(y.size());
    Vec avg(y.size(), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) {
        const Vec& vk = scenario.components[k].rendering;
        for (std::size_t i = 0; i < y.size(); ++i)
            avg[i] += r[k] * (-(y[i] - a * vk[i]) / s2);
    }
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = -(y[i] - a * v[i]) / s2 - avg[i];
    return out;
}

double ScoreModel::log_density(const Vec& y, double t,
                               const std::vector<std::size_t>* support) const {
    double a, s2;
    channel(t, a, s2);
    const double log_norm = -0.5 * static_cast<double>(scenario.dim) *
                            std::log(2.0 * M_PI * s2);
    if (scenario.kind == LatentScenario::Kind::gaussian) {
        const double denom = a * a * scenario.var0 + s2;
        double l = -0.5 * static_cast<double>(scenario.dim) * std::log(2.0 * M_PI * denom);
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double d = y[i] - a * scenario.mu0[i];
            l -= 0.5 * d * d / denom;
        }
        return l;
    }
    auto in_support = [&](std::size_t k) {
        if (!support) return true;
        return std::find(support->begin(), support->end(), k) != support->end();
    };
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    double wsum = 0.0;
    for (std::size_t k = 0; k < scenario.n_components(); ++k) {
        if (!in_support(k)) continue;
        const double w = scenario.components[k].weight;
        const Vec mean = scaled(scenario.components[k].rendering, a);
        const double l = std::log(w) - 0.5 * dist2(y, mean) / s2;
        logs.push_back(l);
        wsum += w;
        mx = std::max(mx, l);
    }
    if (logs.empty()) throw std::invalid_argument("log_density: empty support");
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - mx);
    return mx + std::log(acc) - std::log(wsum) + log_norm;
}

Vec ScoreModel::backward_drift_score_form(const Vec& y, double t) const {
    const double alpha = sched.alpha;
    if (alpha <= 0.0)
        throw std::invalid_argument("backward_drift_score_form: requires alpha > 0");
    const double tau = sched.T - t;
    const double a = std::exp(-alpha * tau);
    const double one_minus_a2 = -std::expm1(-2.0 * alpha * tau);
    const Vec mean = posterior_mean(y, t);
    Vec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = alpha * y[i] + 2.0 * alpha * (a * mean[i] - y[i]) / one_minus_a2;
    return out;
}

Vec ScoreModel::generative_drift(const Vec& y, double t) const {
    const double mt = sched.m(t);
    const double ft = sched.f(t);
    const Vec mean = posterior_mean(y, t);
    Vec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = mt * mean[i] - ft * y[i];
    return out;
}

Vec ScoreModel::generative_drift_given(const Vec& y, double t, std::size_t attr,
                                       int label) const {
    const double mt = sched.m(t);
    const double ft = sched.f(t);
    const Vec mean = posterior_mean_given(y, t, attr, label);
    Vec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = mt * mean[i] - ft * y[i];
    return out;
}

std::size_t ScoreModel::classify(const Vec& y, double t, bool* tie) const {
    const Vec r = responsibilities(y, t);
    std::size_t best = 0;
    for (std::size_t k = 1; k < r.size(); ++k)
        if (r[k] > r[best]) best = k;
    if (tie) {
        *tie = false;
        for (std::size_t k = 0; k < r.size(); ++k)
            if (k != best && r[k] == r[best]) *tie = true;
    }
    return best;
}

Vec ScoreModel::sample_y0(std::mt19937_64& eng) const {
    std::normal_distribution<double> gauss(0.0, 1.0);
    if (scenario.kind == LatentScenario::Kind::gaussian) {
        double a, s2;
        channel(0.0, a, s2);
        const double sd = std::sqrt(a * a * scenario.var0 + s2);
        Vec y(scenario.dim);
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = a * scenario.mu0[i] + sd * gauss(eng);
        return y;
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(eng);
    std::size_t k = 0;
    for (; k + 1 < scenario.n_components(); ++k) {
        u -= scenario.components[k].weight;
        if (u <= 0.0) break;
    }
    const GaussMoments m =
        forward_marginal(scenario.components[k].rendering, sched.T, sched.alpha);
    const double sd = std::sqrt(m.var);
    Vec y(scenario.dim);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = m.mean[i] + sd * gauss(eng);
    return y;
}

}  // namespace lab
