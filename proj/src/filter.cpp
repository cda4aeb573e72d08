#include "lab/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Initial log-masses: log prior restricted by the conditioning plus the Y_0
// log-likelihood under each component (zero when Y_0 is uninformative).
std::vector<double> initial_logmass(const SamplePath& path, const LatentScenario& scenario,
                                    const ObservationModel& obs,
                                    const ConditioningSpec& cond) {
    const std::size_t K = scenario.n_components();
    std::vector<double> lw(K, kNegInf);
    std::vector<std::size_t> support;
    switch (cond.kind) {
        case ConditioningSpec::Kind::measurements_only:
            support.resize(K);
            std::iota(support.begin(), support.end(), 0);
            break;
        case ConditioningSpec::Kind::with_label:
            support = scenario.label_support(cond.attr, cond.label);
            if (support.empty())
                throw std::invalid_argument("filter: label has empty support");
            break;
        case ConditioningSpec::Kind::full_latent:
            support = {cond.component};
            break;
    }
    for (std::size_t k : support)
        lw[k] = std::log(scenario.components[k].weight) +
                obs.y0_loglik(path.values[0], scenario.components[k].rendering);
    return lw;
}

Vec normalize_logmass(const std::vector<double>& lw, double t) {
    const double mx = *std::max_element(lw.begin(), lw.end());
    if (!std::isfinite(mx))
        throw FilterCollapse(t, "filter: all hypotheses at -inf log-weight");
    Vec pi(lw.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < lw.size(); ++k) {
        if (std::isinf(lw[k])) continue;
        pi[k] = std::exp(lw[k] - mx);
        total += pi[k];
    }
    for (double& p : pi) p /= total;
    return pi;
}

}  // namespace

std::vector<double> girsanov_logweights(const SamplePath& path,
                                        const std::vector<Vec>& h_steps) {
    if (h_steps.size() != path.grid.n_steps())
        throw std::invalid_argument("girsanov_logweights: H count does not match grid steps");
    std::vector<double> lw(path.grid.n_points(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < h_steps.size(); ++i) {
        if (h_steps[i].size() != path.dim)
            throw std::invalid_argument("girsanov_logweights: H dimension mismatch");
        const double dt = path.grid.dt(i);
        double hdy = 0.0;
        for (std::size_t d = 0; d < path.dim; ++d)
            hdy += h_steps[i][d] * (path.values[i + 1][d] - path.values[i][d]);
        acc += hdy - 0.5 * norm2(h_steps[i]) * dt;
        lw[i + 1] = acc;
    }
    return lw;
}

SimplexTrajectory exact_discrete_filter(const SamplePath& path,
                                        const LatentScenario& scenario,
                                        const ObservationModel& obs,
                                        const ConditioningSpec& cond) {
    const std::size_t K = scenario.n_components();
    std::vector<double> lw = initial_logmass(path, scenario, obs, cond);
    SimplexTrajectory out;
    out.grid = path.grid;
    out.pi.resize(path.grid.n_points());
    out.pi[0] = normalize_logmass(lw, 0.0);
    for (std::size_t i = 0; i < path.grid.n_steps(); ++i) {
        const double t = path.grid.t_points[i];
        const double dt = path.grid.dt(i);
        for (std::size_t k = 0; k < K; ++k) {
            if (std::isinf(lw[k])) continue;
            const Vec h = obs.h(path.values[i], scenario.components[k].rendering, t);
            double hdy = 0.0;
            for (std::size_t d = 0; d < path.dim; ++d)
                hdy += h[d] * (path.values[i + 1][d] - path.values[i][d]);
            lw[k] += hdy - 0.5 * norm2(h) * dt;
        }
        out.pi[i + 1] = normalize_logmass(lw, path.grid.t_points[i + 1]);
    }
    return out;
}

Vec kushner_step(const Vec& pi, const std::vector<Vec>& h_per_component, const Vec& dY,
                 double dt, std::size_t* clip_events) {
    const std::size_t K = pi.size();
    const std::size_t N = dY.size();
    Vec hbar(N, 0.0);
    for (std::size_t k = 0; k < K; ++k)
        axpy(pi[k], h_per_component[k], hbar);
    Vec innov(N);
    for (std::size_t d = 0; d < N; ++d) innov[d] = dY[d] - hbar[d] * dt;
    Vec out(K);
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        double gain = 0.0;
        for (std::size_t d = 0; d < N; ++d)
            gain += (h_per_component[k][d] - hbar[d]) * innov[d];
        double p = pi[k] * (1.0 + gain);
        if (p < 0.0) {
            p = 0.0;
            if (clip_events) ++(*clip_events);
        }
        out[k] = p;
        total += p;
    }
    if (total <= 0.0)
        throw FilterCollapse(0.0, "kushner_step: all entries clipped, cannot renormalize");
    for (double& p : out) p /= total;
    return out;
}

SimplexTrajectory kushner_filter(const SamplePath& path, const LatentScenario& scenario,
                                 const ObservationModel& obs, const ConditioningSpec& cond) {
    const std::size_t K = scenario.n_components();
    SimplexTrajectory out;
    out.grid = path.grid;
    out.pi.resize(path.grid.n_points());
    out.pi[0] = normalize_logmass(initial_logmass(path, scenario, obs, cond), 0.0);
    std::vector<Vec> h(K);
    for (std::size_t i = 0; i < path.grid.n_steps(); ++i) {
        const double t = path.grid.t_points[i];
        const double dt = path.grid.dt(i);
        for (std::size_t k = 0; k < K; ++k)
            h[k] = obs.h(path.values[i], scenario.components[k].rendering, t);
        Vec dY(path.dim);
        for (std::size_t d = 0; d < path.dim; ++d)
            dY[d] = path.values[i + 1][d] - path.values[i][d];
        try {
            out.pi[i + 1] = kushner_step(out.pi[i], h, dY, dt, &out.clip_events);
        } catch (const FilterCollapse&) {
            throw FilterCollapse(t, "kushner_filter: simplex collapse");
        }
    }
    return out;
}

ParticleTrajectory particle_filter(const SamplePath& path, const LatentSampler& prior,
                                   const ObservationModel& obs, std::size_t n_particles,
                                   const RandomStream& stream, bool resample) {
    if (n_particles == 0) throw std::invalid_argument("particle_filter: need particles");
    auto eng = stream.engine();
    std::vector<Vec> pos(n_particles);
    std::vector<int> comp(n_particles);
    std::vector<double> lw(n_particles, 0.0);
    bool have_comp = true;
    int max_comp = -1;
    for (std::size_t i = 0; i < n_particles; ++i) {
        auto [v, c] = prior(eng);
        pos[i] = std::move(v);
        comp[i] = c;
        if (c < 0) have_comp = false;
        max_comp = std::max(max_comp, c);
    }

    auto weights_of = [&]() {
        const double mx = *std::max_element(lw.begin(), lw.end());
        std::vector<double> w(n_particles);
        double total = 0.0;
        for (std::size_t i = 0; i < n_particles; ++i) {
            w[i] = std::exp(lw[i] - mx);
            total += w[i];
        }
        for (double& x : w) x /= total;
        return w;
    };

    auto summarize = [&](const std::vector<double>& w) {
        ParticleSummary s;
        const std::size_t N = pos[0].size();
        s.mean.assign(N, 0.0);
        for (std::size_t i = 0; i < n_particles; ++i) axpy(w[i], pos[i], s.mean);
        double var = 0.0;
        for (std::size_t i = 0; i < n_particles; ++i)
            var += w[i] * dist2(pos[i], s.mean);
        s.var = var / static_cast<double>(N);
        double sq = 0.0;
        for (double x : w) sq += x * x;
        s.ess = 1.0 / sq;
        if (have_comp && max_comp >= 0) {
            s.comp_prob.assign(static_cast<std::size_t>(max_comp) + 1, 0.0);
            for (std::size_t i = 0; i < n_particles; ++i)
                s.comp_prob[static_cast<std::size_t>(comp[i])] += w[i];
        }
        return s;
    };

    ParticleTrajectory out;
    out.grid = path.grid;
    out.states.resize(path.grid.n_points());
    {
        std::vector<double> w = weights_of();
        out.states[0] = summarize(w);
    }

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t i = 0; i < path.grid.n_steps(); ++i) {
        const double t = path.grid.t_points[i];
        const double dt = path.grid.dt(i);
        for (std::size_t p = 0; p < n_particles; ++p) {
            const Vec h = obs.h(path.values[i], pos[p], t);
            double hdy = 0.0;
            for (std::size_t d = 0; d < path.dim; ++d)
                hdy += h[d] * (path.values[i + 1][d] - path.values[i][d]);
            lw[p] += hdy - 0.5 * norm2(h) * dt;
        }
        std::vector<double> w = weights_of();
        ParticleSummary s = summarize(w);
        if (s.ess < 2.0)
            throw FilterCollapse(path.grid.t_points[i + 1],
                                 "particle_filter: weight collapse (ESS < 2)");
        if (resample && s.ess < static_cast<double>(n_particles) / 2.0) {
            // systematic (low-variance) resampling
            std::vector<Vec> npos(n_particles);
            std::vector<int> ncomp(n_particles);
            const double u0 = unif(eng) / static_cast<double>(n_particles);
            double cum = w[0];
            std::size_t j = 0;
            for (std::size_t p = 0; p < n_particles; ++p) {
                const double u = u0 + static_cast<double>(p) / static_cast<double>(n_particles);
                while (cum < u && j + 1 < n_particles) cum += w[++j];
                npos[p] = pos[j];
                ncomp[p] = comp[j];
            }
            pos = std::move(npos);
            comp = std::move(ncomp);
            std::fill(lw.begin(), lw.end(), 0.0);
            ++out.resample_events;
            w = weights_of();
            s = summarize(w);
        }
        out.states[i + 1] = s;
    }
    return out;
}

KalmanTrajectory kalman_bucy(const SamplePath& path, double mean0, double var0) {
    if (path.dim != 1)
        throw std::invalid_argument("kalman_bucy: scalar observation paths only");
    KalmanTrajectory out;
    out.grid = path.grid;
    out.mean.resize(path.grid.n_points());
    out.var.resize(path.grid.n_points());
    out.mean[0] = mean0;
    out.var[0] = var0;
    double mu = mean0;
    for (std::size_t i = 0; i < path.grid.n_steps(); ++i) {
        const double t = path.grid.t_points[i];
        const double dt = path.grid.dt(i);
        const double P = var0 / (1.0 + var0 * t);
        const double dY = path.values[i + 1][0] - path.values[i][0];
        mu += P * (dY - mu * dt);
        out.mean[i + 1] = mu;
        const double t1 = path.grid.t_points[i + 1];
        out.var[i + 1] = var0 / (1.0 + var0 * t1);
    }
    return out;
}

InnovationPath extract_innovation(const SamplePath& path, const SimplexTrajectory& posterior,
                                  const LatentScenario& scenario,
                                  const ObservationModel& obs) {
    if (posterior.pi.size() != path.grid.n_points())
        throw std::invalid_argument("extract_innovation: trajectory/grid misalignment");
    InnovationPath out;
    out.grid = path.grid;
    out.increments.resize(path.grid.n_steps());
    for (std::size_t i = 0; i < path.grid.n_steps(); ++i) {
        const double t = path.grid.t_points[i];
        const double dt = path.grid.dt(i);
        Vec hbar(path.dim, 0.0);
        for (std::size_t k = 0; k < scenario.n_components(); ++k) {
            if (posterior.pi[i][k] == 0.0) continue;
            axpy(posterior.pi[i][k],
                 obs.h(path.values[i], scenario.components[k].rendering, t), hbar);
        }
        Vec dw(path.dim);
        for (std::size_t d = 0; d < path.dim; ++d)
            dw[d] = path.values[i + 1][d] - path.values[i][d] - hbar[d] * dt;
        out.increments[i] = std::move(dw);
    }
    return out;
}

double posterior_project(const Vec& pi, const std::vector<double>& statistic) {
    double s = 0.0;
    for (std::size_t k = 0; k < pi.size(); ++k) s += pi[k] * statistic[k];
    return s;
}

Vec posterior_project(const Vec& pi, const std::vector<Vec>& statistic) {
    Vec out(statistic[0].size(), 0.0);
    for (std::size_t k = 0; k < pi.size(); ++k) axpy(pi[k], statistic[k], out);
    return out;
}

}  // namespace lab
