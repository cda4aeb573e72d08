#include "lab/harness/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "lab/filter.hpp"
#include "lab/forking.hpp"
#include "lab/generative.hpp"
#include "lab/harness/csv.hpp"
#include "lab/harness/svg.hpp"
#include "lab/information.hpp"
#include "lab/score_model.hpp"

namespace lab::harness {

namespace {

struct Latent {
    std::size_t comp = 0;
    Vec v;
};

Latent draw_latent(const LatentScenario& sc, std::mt19937_64& eng) {
    Latent out;
    if (sc.kind == LatentScenario::Kind::gaussian) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        out.v.resize(sc.dim);
        const double sd = std::sqrt(sc.var0);
        for (std::size_t d = 0; d < sc.dim; ++d) out.v[d] = sc.mu0[d] + sd * gauss(eng);
        return out;
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(eng);
    std::size_t k = 0;
    for (; k + 1 < sc.n_components(); ++k) {
        u -= sc.components[k].weight;
        if (u <= 0.0) break;
    }
    out.comp = k;
    out.v = sc.components[k].rendering;
    return out;
}

SamplePath measurement_path(const LatentScenario& sc, const ObservationModel& obs,
                            const TimeGrid& grid, const Vec& v, std::mt19937_64& eng,
                            const RandomStream& noise) {
    Vec y0(sc.dim, 0.0);
    if (obs.kind == ObservationModel::Kind::linear_bridge) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        const GaussMoments m = forward_marginal(v, obs.sched.T, obs.sched.alpha);
        const double sd = std::sqrt(m.var);
        for (std::size_t d = 0; d < sc.dim; ++d) y0[d] = m.mean[d] + sd * gauss(eng);
    }
    const auto incr = sample_brownian_increments(grid, sc.dim, noise);
    return euler_maruyama([&](const Vec& y, double t) { return obs.h(y, v, t); }, y0, grid,
                          incr);
}

double tv(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    return 0.5 * s;
}

PhiSpec phi_of(const HarnessConfig& c) {
    if (c.phi == "full") return PhiSpec::full();
    return PhiSpec::attribute(static_cast<std::size_t>(c.scenario.attribute_index(c.phi)));
}

std::vector<std::string> run_filter_bench(const HarnessConfig& c, const RunOptions& o) {
    std::vector<std::string> files;
    const RandomStream root{c.seed, 0};

    if (c.scenario.kind == LatentScenario::Kind::gaussian) {
        // weighted-sample filter against the linear-Gaussian closed form
        const auto obs = ObservationModel::static_observation(1);
        const auto grid = config_grid(c);
        auto eng = root.substream(1).engine();
        const Latent lat = draw_latent(c.scenario, eng);
        const auto path =
            measurement_path(c.scenario, obs, grid, lat.v, eng, root.substream(0));
        LatentSampler prior = [&](std::mt19937_64& e) {
            std::normal_distribution<double> gauss(0.0, 1.0);
            return std::make_pair(Vec{c.scenario.mu0[0] + std::sqrt(c.scenario.var0) * gauss(e)},
                                  -1);
        };
        const auto pf = particle_filter(path, prior, obs, c.n_particles, root.substream(2));
        const auto kb = kalman_bucy(path, c.scenario.mu0[0], c.scenario.var0);
        CsvWriter csv(o.out_dir + "/filter_bench.csv",
                      {"t", "kalman_mean", "particle_mean", "kalman_var", "particle_var",
                       "ess"});
        for (std::size_t i = 0; i < grid.n_points(); ++i)
            csv.row_numeric({grid.t_points[i], kb.mean[i], pf.states[i].mean[0], kb.var[i],
                             pf.states[i].var, pf.states[i].ess});
        files.push_back("filter_bench.csv");
        return files;
    }

    // Euler posterior integrator against the exact Bayes filter over a
    // ladder of step counts
    const auto obs = ObservationModel::linear_bridge(c.sched, c.scenario.dim);
    std::vector<std::size_t> ladder;
    for (std::size_t m = c.steps; m >= 8 && ladder.size() < 4; m /= 2) ladder.push_back(m);
    CsvWriter csv(o.out_dir + "/filter_bench.csv", {"dt", "mean_tv", "se_tv"});
    std::vector<Series> plot(1);
    plot[0].name = "terminal TV";
    for (std::size_t m : ladder) {
        const auto grid = make_grid(c.sched.T, m, c.epsilon, c.spacing);
        std::vector<double> tvs(c.n_paths);
        parallel_for_index(c.n_paths, o.threads, [&](std::size_t j) {
            const RandomStream ps = root.substream(j);
            auto eng = ps.substream(1).engine();
            const Latent lat = draw_latent(c.scenario, eng);
            const auto path =
                measurement_path(c.scenario, obs, grid, lat.v, eng, ps.substream(0));
            const auto ex =
                exact_discrete_filter(path, c.scenario, obs, ConditioningSpec::measurements());
            const auto ku =
                kushner_filter(path, c.scenario, obs, ConditioningSpec::measurements());
            tvs[j] = tv(ex.pi.back(), ku.pi.back());
        });
        double s = 0.0, q = 0.0;
        for (double x : tvs) {
            s += x;
            q += x * x;
        }
        const double n = static_cast<double>(c.n_paths);
        const double mean = s / n;
        const double se = std::sqrt(std::max(0.0, q / n - mean * mean) / n);
        const double dt = grid.dt(0);
        csv.row_numeric({dt, mean, se});
        plot[0].x.push_back(std::log10(dt));
        plot[0].y.push_back(std::log10(std::max(mean, 1e-16)));
    }
    files.push_back("filter_bench.csv");
    if (o.plots) {
        write_svg_lines(o.out_dir + "/filter_bench.svg", "posterior integrator error",
                        "log10 dt", "log10 terminal TV", plot);
        files.push_back("filter_bench.svg");
    }
    return files;
}

std::vector<std::string> run_mi_curve(const HarnessConfig& c, const RunOptions& o) {
    const auto grid = config_grid(c);
    const RandomStream root{c.seed, 0};
    const PhiSpec phi = phi_of(c);
    MIEstimate est;
    if (c.scenario.kind == LatentScenario::Kind::gaussian) {
        if (c.estimator == "score-gap") {
            ScoreModel model{c.scenario, c.sched};
            est = mi_score_gap(model, grid, c.n_paths, root, ScoreGapForm::bridge_score,
                               o.threads);
        } else {
            est = mi_general(c.scenario, ObservationModel::static_observation(1), grid, phi,
                             c.n_paths, root, o.threads);
        }
    } else if (c.estimator == "general") {
        const auto obs = ObservationModel::linear_bridge(c.sched, c.scenario.dim);
        est = mi_general(c.scenario, obs, grid, phi, c.n_paths, root, o.threads);
    } else if (c.estimator == "linear") {
        ScoreModel model{c.scenario, c.sched};
        est = mi_linear(model, grid, phi, c.n_paths, root, o.threads);
    } else {
        ScoreModel model{c.scenario, c.sched};
        est = mi_score_gap(model, grid, c.n_paths, root, ScoreGapForm::bridge_score,
                           o.threads);
    }

    std::vector<std::string> files;
    {
        CsvWriter csv(o.out_dir + "/mi_curve.csv",
                      {"t", "integrand", "cumulative", "cumulative_se", "total"});
        for (std::size_t i = 0; i < grid.n_points(); ++i) {
            std::vector<std::string> row;
            row.push_back(format_double(grid.t_points[i]));
            row.push_back(i < est.integrand.size() ? format_double(est.integrand[i]) : "");
            row.push_back(format_double(est.cumulative[i]));
            row.push_back(format_double(est.cumulative_se[i]));
            row.push_back(format_double(est.cumulative[i] + (est.i0_omitted ? 0.0 : est.i0)));
            csv.row(row);
        }
        files.push_back("mi_curve.csv");
    }
    {
        CsvWriter csv(o.out_dir + "/mi_summary.csv",
                      {"value", "std_error", "i0", "i0_omitted", "total",
                       "divergence_warning"});
        csv.row({format_double(est.value), format_double(est.std_error),
                 format_double(est.i0), est.i0_omitted ? "1" : "0",
                 format_double(est.total()), est.divergence_warning ? "1" : "0"});
        files.push_back("mi_summary.csv");
    }
    if (o.plots) {
        Series s;
        s.name = "accumulated information";
        s.x = est.times;
        for (std::size_t i = 0; i < est.cumulative.size(); ++i)
            s.y.push_back(est.cumulative[i] + (est.i0_omitted ? 0.0 : est.i0));
        write_svg_lines(o.out_dir + "/mi_curve.svg", "information accumulation", "t",
                        "nats", {s});
        files.push_back("mi_curve.svg");
    }
    return files;
}

std::vector<std::string> run_fork(const HarnessConfig& c, const RunOptions& o) {
    const auto grid = config_grid(c);
    ForkConfig fc;
    fc.k = c.k;
    fc.n_seeds = c.n_seeds;
    fc.sampler = c.sampler;
    fc.tau_list = c.tau_list;
    if (fc.tau_list.empty())
        for (int i = 0; i <= 8; ++i)
            fc.tau_list.push_back(grid.end() * static_cast<double>(i) / 8.0);

    ScoreModel model{c.scenario, c.sched};
    const auto rep = run_forking(model, fc, grid, RandomStream{c.seed, 0}, o.threads);

    std::vector<std::string> files;
    {
        CsvWriter csv(o.out_dir + "/fork_cells.csv",
                      {"seed", "tau", "attribute", "entropy"});
        for (const auto& cell : rep.cells)
            csv.row({std::to_string(cell.seed), format_double(cell.tau),
                     c.scenario.attributes[cell.attr].name, format_double(cell.entropy)});
        files.push_back("fork_cells.csv");
    }
    {
        CsvWriter csv(o.out_dir + "/fork_entropy.csv",
                      {"tau", "attribute", "mean_entropy", "stderr_entropy"});
        for (const auto& a : rep.aggregates)
            csv.row({format_double(a.tau), c.scenario.attributes[a.attr].name,
                     format_double(a.mean_entropy), format_double(a.stderr_entropy)});
        files.push_back("fork_entropy.csv");
    }
    if (o.plots) {
        std::vector<Series> plot(c.scenario.attributes.size());
        for (std::size_t a = 0; a < plot.size(); ++a)
            plot[a].name = c.scenario.attributes[a].name;
        for (const auto& agg : rep.aggregates) {
            plot[agg.attr].x.push_back(agg.tau);
            plot[agg.attr].y.push_back(agg.mean_entropy);
        }
        write_svg_lines(o.out_dir + "/fork_entropy.svg", "fork outcome entropy", "tau",
                        "nats", plot);
        files.push_back("fork_entropy.svg");
    }
    return files;
}

std::vector<std::string> run_bridge_check(const HarnessConfig& c, const RunOptions& o) {
    const auto grid = config_grid(c);
    const RandomStream root{c.seed, 0};
    std::vector<Vec> targets;
    if (c.scenario.kind == LatentScenario::Kind::gaussian)
        targets.push_back(c.scenario.mu0);
    else
        for (const auto& comp : c.scenario.components) targets.push_back(comp.rendering);

    // checkpoints: ~10 interior grid points plus the cutoff
    std::vector<std::size_t> checks;
    for (int i = 1; i <= 10; ++i)
        checks.push_back(grid.n_steps() * static_cast<std::size_t>(i) / 10);

    CsvWriter csv(o.out_dir + "/bridge_check.csv",
                  {"target", "t", "mc_mean", "analytic_mean", "mc_var", "analytic_var"});
    const Vec y0(c.scenario.dim, 0.0);
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const Vec& v = targets[ti];
        std::vector<std::vector<double>> samples(checks.size());
        std::vector<SamplePath> paths(c.n_paths);
        parallel_for_index(c.n_paths, o.threads, [&](std::size_t j) {
            paths[j] = simulate_bridge(v, c.sched, grid, root.substream(ti).substream(j), &y0);
        });
        for (std::size_t ci = 0; ci < checks.size(); ++ci) {
            double s = 0.0, q = 0.0;
            for (const auto& p : paths) {
                const double x = p.values[checks[ci]][0];
                s += x;
                q += x * x;
            }
            const double n = static_cast<double>(c.n_paths);
            const double mean = s / n;
            const double var = std::max(0.0, q / n - mean * mean);
            const auto an = analytic_bridge_moments(y0, v, grid.t_points[checks[ci]], c.sched);
            csv.row({std::to_string(ti), format_double(grid.t_points[checks[ci]]),
                     format_double(mean), format_double(an.mean[0]), format_double(var),
                     format_double(an.var)});
        }
    }
    return {"bridge_check.csv"};
}

std::vector<std::string> run_joint_vs_bridge(const HarnessConfig& c, const RunOptions& o) {
    const auto grid = config_grid(c);
    const auto obs = ObservationModel::linear_bridge(c.sched, c.scenario.dim);
    const RandomStream root{c.seed, 0};
    const std::size_t K = c.scenario.n_components();
    const std::size_t N = c.scenario.dim;

    std::vector<Vec> term_joint(c.n_paths), term_bridge(c.n_paths);
    parallel_for_index(c.n_paths, o.threads, [&](std::size_t j) {
        term_joint[j] =
            simulate_joint_system(c.scenario, obs, grid, root.substream(1).substream(j))
                .y_path.terminal();
        const RandomStream ps = root.substream(2).substream(j);
        auto eng = ps.substream(7).engine();
        const Latent lat = draw_latent(c.scenario, eng);
        term_bridge[j] = simulate_bridge(lat.v, c.sched, grid, ps).terminal();
    });

    auto nearest = [&](const Vec& y) {
        std::size_t best = 0;
        double bd = dist2(y, c.scenario.components[0].rendering);
        for (std::size_t k = 1; k < K; ++k) {
            const double d = dist2(y, c.scenario.components[k].rendering);
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        return best;
    };

    CsvWriter csv(o.out_dir + "/joint_vs_bridge.csv",
                  {"metric", "joint", "bridge_reference"});
    std::vector<double> freq(K, 0.0);
    for (const auto& y : term_joint) freq[nearest(y)] += 1.0 / static_cast<double>(c.n_paths);
    for (std::size_t k = 0; k < K; ++k)
        csv.row({"terminal_freq_" + std::to_string(k), format_double(freq[k]),
                 format_double(c.scenario.components[k].weight)});
    for (std::size_t d = 0; d < N; ++d) {
        double sj = 0.0, qj = 0.0, sb = 0.0, qb = 0.0;
        for (std::size_t j = 0; j < c.n_paths; ++j) {
            sj += term_joint[j][d];
            qj += term_joint[j][d] * term_joint[j][d];
            sb += term_bridge[j][d];
            qb += term_bridge[j][d] * term_bridge[j][d];
        }
        const double n = static_cast<double>(c.n_paths);
        csv.row({"terminal_mean_" + std::to_string(d), format_double(sj / n),
                 format_double(sb / n)});
        csv.row({"terminal_var_" + std::to_string(d),
                 format_double(qj / n - (sj / n) * (sj / n)),
                 format_double(qb / n - (sb / n) * (sb / n))});
    }
    return {"joint_vs_bridge.csv"};
}

}  // namespace

std::vector<std::string> run_experiment(const HarnessConfig& config,
                                        const RunOptions& opts) {
    if (config.experiment == "filter-bench") return run_filter_bench(config, opts);
    if (config.experiment == "mi-curve") return run_mi_curve(config, opts);
    if (config.experiment == "fork") return run_fork(config, opts);
    if (config.experiment == "bridge-check") return run_bridge_check(config, opts);
    if (config.experiment == "joint-vs-bridge") return run_joint_vs_bridge(config, opts);
    throw std::invalid_argument("unknown experiment: " + config.experiment);
}

}  // namespace lab::harness
