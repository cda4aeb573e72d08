#include "lab/forking.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace lab {

double entropy(const std::vector<std::size_t>& histogram) {
    std::size_t total = 0;
    for (std::size_t c : histogram) total += c;
    if (total == 0) throw std::invalid_argument("entropy: empty histogram");
    double h = 0.0;
    for (std::size_t c : histogram) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log(p);
    }
    return h;
}

std::size_t bayes_classifier(const Vec& y, double t, const ScoreModel& model, bool* tie) {
    return model.classify(y, t, tie);
}

namespace {

// Continue a backward trajectory from grid index `from` to the end of the
// grid, drawing fresh noise from `eng`.
Vec integrate_tail(const ScoreModel& model, const TimeGrid& grid, std::size_t from,
                   Vec y, std::mt19937_64& eng, const SamplerConfig& cfg) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t N = y.size();
    const bool score_form = model.sched.alpha > 0.0;
    for (std::size_t i = from; i < grid.n_steps(); ++i) {
        const double t = grid.t_points[i];
        const double dt = grid.dt(i);
        const Vec drift =
            score_form ? model.backward_drift_score_form(y, t) : model.generative_drift(y, t);
        const double sd = std::sqrt(dt);
        for (std::size_t d = 0; d < N; ++d) y[d] += drift[d] * dt + sd * gauss(eng);
        const double tc = grid.t_points[i + 1];
        for (std::size_t c = 0; c < cfg.corrector_steps; ++c) {
            Vec z(N);
            for (std::size_t d = 0; d < N; ++d) z[d] = gauss(eng);
            const Vec s = model.score(y, tc);
            const double sn = norm(s);
            if (sn == 0.0) continue;
            const double delta = 2.0 * std::pow(cfg.snr * norm(z) / sn, 2);
            const double noise = std::sqrt(2.0 * delta);
            for (std::size_t d = 0; d < N; ++d) y[d] += delta * s[d] + noise * z[d];
        }
    }
    return y;
}

}  // namespace

ForkReport run_forking(const ScoreModel& model, const ForkConfig& config,
                       const TimeGrid& grid, const RandomStream& stream,
                       unsigned threads) {
    const LatentScenario& sc = model.scenario;
    if (sc.kind != LatentScenario::Kind::finite_mixture)
        throw std::invalid_argument("run_forking: finite-mixture scenario required");
    if (config.k < 2) throw std::invalid_argument("run_forking: need k >= 2 replicas");
    if (sc.attributes.empty())
        throw std::invalid_argument("run_forking: scenario has no attributes");

    // map fork times onto grid indices
    std::vector<std::size_t> tau_idx;
    for (double tau : config.tau_list) {
        if (tau < 0.0 || tau > grid.end() + 1e-12)
            throw std::invalid_argument("run_forking: tau outside the grid");
        std::size_t best = 0;
        for (std::size_t i = 1; i < grid.n_points(); ++i)
            if (std::abs(grid.t_points[i] - tau) < std::abs(grid.t_points[best] - tau))
                best = i;
        tau_idx.push_back(best);
    }

    const std::size_t n_attr = sc.attributes.size();
    std::vector<int> n_labels(n_attr);
    for (std::size_t a = 0; a < n_attr; ++a) {
        int mx = 0;
        for (int l : sc.attributes[a].labels) mx = std::max(mx, l);
        n_labels[a] = mx + 1;
    }

    const std::size_t n_tau = tau_idx.size();
    std::vector<ForkCell> cells(config.n_seeds * n_tau * n_attr);
    std::atomic<std::size_t> tie_count{0};

    parallel_for_index(config.n_seeds, threads, [&](std::size_t seed) {
        const RandomStream seed_stream = stream.substream(seed);
        const SamplePath trunk = sample_backward(model, grid, seed_stream, config.sampler);
        for (std::size_t ti = 0; ti < n_tau; ++ti) {
            std::vector<std::vector<std::size_t>> hist(n_attr);
            for (std::size_t a = 0; a < n_attr; ++a)
                hist[a].assign(static_cast<std::size_t>(n_labels[a]), 0);
            for (std::size_t fi = 0; fi < config.k; ++fi) {
                auto eng = seed_stream.substream(1000 + ti).substream(fi).engine();
                const Vec terminal = integrate_tail(model, grid, tau_idx[ti],
                                                    trunk.values[tau_idx[ti]], eng,
                                                    config.sampler);
                bool tie = false;
                const std::size_t comp = model.classify(terminal, grid.end(), &tie);
                if (tie) ++tie_count;
                for (std::size_t a = 0; a < n_attr; ++a)
                    ++hist[a][static_cast<std::size_t>(sc.attributes[a].labels[comp])];
            }
            for (std::size_t a = 0; a < n_attr; ++a) {
                ForkCell& cell = cells[(seed * n_tau + ti) * n_attr + a];
                cell.seed = seed;
                cell.tau = grid.t_points[tau_idx[ti]];
                cell.attr = a;
                cell.histogram = hist[a];
                cell.entropy = entropy(hist[a]);
            }
        }
    });

    ForkReport rep;
    rep.cells = std::move(cells);
    rep.classifier_ties = tie_count.load();
    for (std::size_t ti = 0; ti < n_tau; ++ti)
        for (std::size_t a = 0; a < n_attr; ++a) {
            double s = 0.0, q = 0.0;
            for (std::size_t seed = 0; seed < config.n_seeds; ++seed) {
                const double h = rep.cells[(seed * n_tau + ti) * n_attr + a].entropy;
                s += h;
                q += h * h;
            }
            const double n = static_cast<double>(config.n_seeds);
            ForkAggregate agg;
            agg.tau = grid.t_points[tau_idx[ti]];
            agg.attr = a;
            agg.mean_entropy = s / n;
            agg.stderr_entropy = std::sqrt(std::max(0.0, q / n - agg.mean_entropy * agg.mean_entropy) / n);
            rep.aggregates.push_back(agg);
        }
    return rep;
}

}  // namespace lab
