#include "lab/generative.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lab {

JointTrajectory simulate_joint_system(const LatentScenario& scenario,
                                      const ObservationModel& obs, const TimeGrid& grid,
                                      const RandomStream& stream) {
    if (scenario.kind != LatentScenario::Kind::finite_mixture)
        throw std::invalid_argument("simulate_joint_system: finite-mixture scenario required");
    const std::size_t K = scenario.n_components();
    const std::size_t N = scenario.dim;

    // Initial measurement from its marginal law; for the bridge family this
    // is the noising marginal at reversed time T, for static observations 0.
    Vec y(N, 0.0);
    auto eng = stream.substream(1).engine();
    if (obs.kind == ObservationModel::Kind::linear_bridge) {
        ScoreModel model{scenario, obs.sched};
        y = model.sample_y0(eng);
    }

    // pi_0 = P[X | Y_0].
    Vec lw(K);
    for (std::size_t k = 0; k < K; ++k)
        lw[k] = std::log(scenario.components[k].weight) +
                obs.y0_loglik(y, scenario.components[k].rendering);
    const double mx = *std::max_element(lw.begin(), lw.end());
    Vec pi(K);
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) total += pi[k] = std::exp(lw[k] - mx);
    for (double& p : pi) p /= total;

    const auto incr = sample_brownian_increments(grid, N, stream.substream(0));

    JointTrajectory out;
    out.seed = stream;
    out.y_path.grid = grid;
    out.y_path.dim = N;
    out.y_path.values.resize(grid.n_points());
    out.y_path.values[0] = y;
    out.pi_path.grid = grid;
    out.pi_path.pi.resize(grid.n_points());
    out.pi_path.pi[0] = pi;

    std::vector<Vec> h(K);
    for (std::size_t i = 0; i < grid.n_steps(); ++i) {
        const double t = grid.t_points[i];
        const double dt = grid.dt(i);
        for (std::size_t k = 0; k < K; ++k)
            h[k] = obs.h(y, scenario.components[k].rendering, t);
        Vec hbar(N, 0.0);
        for (std::size_t k = 0; k < K; ++k) axpy(pi[k], h[k], hbar);
        Vec dY(N);
        for (std::size_t d = 0; d < N; ++d) dY[d] = hbar[d] * dt + incr[i][d];
        pi = kushner_step(pi, h, dY, dt, &out.pi_path.clip_events);
        for (std::size_t d = 0; d < N; ++d) y[d] += dY[d];
        out.y_path.values[i + 1] = y;
        out.pi_path.pi[i + 1] = pi;
    }
    return out;
}

SamplePath simulate_bridge(const Vec& v, const Schedule& sched, const TimeGrid& grid,
                           const RandomStream& stream, const Vec* y0) {
    Vec start;
    if (y0) {
        start = *y0;
    } else {
        auto eng = stream.substream(1).engine();
        std::normal_distribution<double> gauss(0.0, 1.0);
        const GaussMoments m = forward_marginal(v, sched.T, sched.alpha);
        const double sd = std::sqrt(m.var);
        start.resize(v.size());
        for (std::size_t d = 0; d < v.size(); ++d) start[d] = m.mean[d] + sd * gauss(eng);
    }
    const auto incr = sample_brownian_increments(grid, v.size(), stream.substream(0));
    return euler_maruyama(
        [&](const Vec& y, double t) { return bridge_drift(y, v, t, sched); }, start, grid,
        incr);
}

SamplePath sample_backward(const ScoreModel& model, const TimeGrid& grid,
                           const RandomStream& stream, const SamplerConfig& config) {
    const std::size_t N = model.scenario.dim;
    auto y0_eng = stream.substream(1).engine();
    Vec y = model.sample_y0(y0_eng);
    const auto incr = sample_brownian_increments(grid, N, stream.substream(0));
    auto corr_eng = stream.substream(2).engine();
    std::normal_distribution<double> gauss(0.0, 1.0);

    const bool score_form = model.sched.alpha > 0.0;
    SamplePath path;
    path.grid = grid;
    path.dim = N;
    path.values.resize(grid.n_points());
    path.values[0] = y;
    for (std::size_t i = 0; i < grid.n_steps(); ++i) {
        const double t = grid.t_points[i];
        const double dt = grid.dt(i);
        const Vec drift = score_form ? model.backward_drift_score_form(y, t)
                                     : model.generative_drift(y, t);
        if (!all_finite(drift))
            throw std::runtime_error("sample_backward: non-finite drift at t=" +
                                     std::to_string(t));
        for (std::size_t d = 0; d < N; ++d) y[d] += drift[d] * dt + incr[i][d];

        const double tc = grid.t_points[i + 1];
        for (std::size_t c = 0; c < config.corrector_steps; ++c) {
            Vec z(N);
            for (std::size_t d = 0; d < N; ++d) z[d] = gauss(corr_eng);
            const Vec s = model.score(y, tc);
            const double sn = norm(s);
            if (sn == 0.0) continue;  // flat score, nothing to correct
            const double delta = 2.0 * std::pow(config.snr * norm(z) / sn, 2);
            const double noise = std::sqrt(2.0 * delta);
            for (std::size_t d = 0; d < N; ++d) y[d] += delta * s[d] + noise * z[d];
        }
        path.values[i + 1] = y;
    }
    return path;
}

std::vector<TerminalHit> terminal_hitting_report(const std::vector<SamplePath>& paths,
                                                 const LatentScenario& scenario) {
    if (scenario.kind != LatentScenario::Kind::finite_mixture)
        throw std::invalid_argument("terminal_hitting_report: finite-mixture required");
    std::vector<TerminalHit> out;
    out.reserve(paths.size());
    for (const auto& p : paths) {
        const Vec& y = p.terminal();
        std::size_t best = 0;
        double bd = dist2(y, scenario.components[0].rendering);
        for (std::size_t k = 1; k < scenario.n_components(); ++k) {
            const double d = dist2(y, scenario.components[k].rendering);
            if (d < bd) {  // strict: ties stay at the lower index
                bd = d;
                best = k;
            }
        }
        out.push_back({best, std::sqrt(bd)});
    }
    return out;
}

}  // namespace lab
