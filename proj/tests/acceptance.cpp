// Acceptance battery: one pass/fail line per criterion, exit code = number of
// failures. Each criterion is a self-contained numerical experiment with its
// tolerances pinned in the check itself.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lab/filter.hpp"
#include "lab/forking.hpp"
#include "lab/generative.hpp"
#include "lab/harness/config.hpp"
#include "lab/harness/experiments.hpp"
#include "lab/information.hpp"
#include "lab/scenario.hpp"
#include "lab/score_model.hpp"

using namespace lab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
unsigned g_threads = 1;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %2d: %s  [%s]\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double tv(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    return 0.5 * s;
}

struct Latent {
    std::size_t comp;
    Vec v;
};

Latent draw_latent(const LatentScenario& sc, std::mt19937_64& eng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(eng);
    std::size_t k = 0;
    for (; k + 1 < sc.n_components(); ++k) {
        u -= sc.components[k].weight;
        if (u <= 0.0) break;
    }
    return {k, sc.components[k].rendering};
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

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
void criterion_1() {
    const auto sc = scenarios::three_component();
    const Schedule sd{1.0, 1.0};
    const auto obs = ObservationModel::linear_bridge(sd, 1);
    const std::size_t n_paths = 100;

    std::vector<std::size_t> ladder = {1250, 2500, 5000, 10000};
    std::vector<double> dts, tvs;
    for (std::size_t M : ladder) {
        const auto grid = make_grid(1.0, M, 1e-3);
        std::vector<double> per(n_paths);
        parallel_for_index(n_paths, g_threads, [&](std::size_t j) {
            const RandomStream ps = RandomStream{1001, j};
            auto eng = ps.substream(1).engine();
            const Latent lat = draw_latent(sc, eng);
            const auto path = measurement_path(sc, obs, grid, lat.v, eng, ps.substream(0));
            const auto ex =
                exact_discrete_filter(path, sc, obs, ConditioningSpec::measurements());
            const auto ku = kushner_filter(path, sc, obs, ConditioningSpec::measurements());
            // compare mid-trajectory, where the posterior is still mixing: at
            // the horizon both filters pin to a vertex and the distance
            // degenerates to zero regardless of the step size
            per[j] = tv(ex.pi[grid.n_points() / 2], ku.pi[grid.n_points() / 2]);
        });
        double mean = 0.0;
        for (double x : per) mean += x;
        mean /= static_cast<double>(n_paths);
        dts.push_back(grid.dt(0));
        tvs.push_back(mean);
    }
    // least-squares slope of log TV against log dt
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(dts.size());
    for (std::size_t i = 0; i < dts.size(); ++i) {
        const double x = std::log(dts[i]), y = std::log(std::max(tvs[i], 1e-16));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double tv_fine = tvs.back();
    report(1, "posterior integrator vs exact Bayes filter",
           tv_fine <= 0.05 && slope >= 0.4,
           fmt("TV@dt=1e-4 %.4f (<=0.05), order %.2f (>=0.4)", tv_fine, slope));
}

// ---------------------------------------------------------------- criterion 2
void criterion_2() {
    // average the per-checkpoint absolute relative errors over independent
    // measurement paths: a single realization carries ~4% estimator noise per
    // checkpoint, so its worst-of-ten would measure that noise, not accuracy
    const auto obs = ObservationModel::static_observation(1);
    const auto grid = make_grid(1.0 + 1e-3, 1000, 1e-3);  // covers [0, 1]
    const std::size_t n_reps = 20;
    std::vector<std::array<double, 10>> mean_err(n_reps), var_err(n_reps);
    parallel_for_index(n_reps, g_threads, [&](std::size_t r) {
        auto eng = RandomStream{2001, 3 * r}.engine();
        std::normal_distribution<double> nd(0.0, 1.0);
        const Vec x{nd(eng)};
        const auto path = measurement_path(scenarios::binary_symmetric(), obs, grid, x,
                                           eng, RandomStream{2001, 3 * r + 1});
        LatentSampler prior = [](std::mt19937_64& e) {
            std::normal_distribution<double> n01(0.0, 1.0);
            return std::make_pair(Vec{n01(e)}, -1);
        };
        const auto pf =
            particle_filter(path, prior, obs, 10000, RandomStream{2001, 3 * r + 2});
        const auto kb = kalman_bucy(path, 0.0, 1.0);
        for (int c = 1; c <= 10; ++c) {
            const std::size_t i = grid.n_steps() * static_cast<std::size_t>(c) / 10;
            mean_err[r][c - 1] = std::abs(pf.states[i].mean[0] - kb.mean[i]) /
                                 std::max(1.0, std::abs(kb.mean[i]));
            var_err[r][c - 1] = std::abs(pf.states[i].var - kb.var[i]) / kb.var[i];
        }
    });
    double worst_mean = 0.0, worst_var = 0.0;
    for (int c = 0; c < 10; ++c) {
        double me = 0.0, ve = 0.0;
        for (std::size_t r = 0; r < n_reps; ++r) {
            me += mean_err[r][c];
            ve += var_err[r][c];
        }
        worst_mean = std::max(worst_mean, me / static_cast<double>(n_reps));
        worst_var = std::max(worst_var, ve / static_cast<double>(n_reps));
    }
    report(2, "weighted-sample filter vs linear-Gaussian closed form",
           worst_mean <= 0.05 && worst_var <= 0.05,
           fmt("worst rel err: mean %.4f, var %.4f (<=0.05)", worst_mean, worst_var));
}

// ---------------------------------------------------------------- criterion 3
void criterion_3() {
    const auto sc = scenarios::binary_symmetric();
    const auto obs = ObservationModel::static_observation(1);
    const auto grid = make_grid(1.0, 100, 1e-3);
    const double dt = grid.dt(0);
    const std::size_t n_paths = 10000;

    std::vector<double> sums(n_paths), sqs(n_paths), lags(n_paths);
    parallel_for_index(n_paths, g_threads, [&](std::size_t j) {
        const RandomStream ps = RandomStream{3001, j};
        auto eng = ps.substream(1).engine();
        const Latent lat = draw_latent(sc, eng);
        const auto path = measurement_path(sc, obs, grid, lat.v, eng, ps.substream(0));
        const auto f = exact_discrete_filter(path, sc, obs, ConditioningSpec::measurements());
        const auto innov = extract_innovation(path, f, sc, obs);
        double s = 0.0, q = 0.0, l = 0.0;
        for (std::size_t i = 0; i < innov.increments.size(); ++i) {
            const double w = innov.increments[i][0];
            s += w;
            q += w * w;
            if (i + 1 < innov.increments.size()) l += w * innov.increments[i + 1][0];
        }
        sums[j] = s;
        sqs[j] = q;
        lags[j] = l;
    });
    double S = 0, Q = 0, L = 0;
    for (std::size_t j = 0; j < n_paths; ++j) {
        S += sums[j];
        Q += sqs[j];
        L += lags[j];
    }
    const double n_incr = static_cast<double>(n_paths * grid.n_steps());
    const double n_lag = static_cast<double>(n_paths * (grid.n_steps() - 1));
    const double z_mean = (S / n_incr) / std::sqrt(dt / n_incr);
    const double var_rel = std::abs(Q / n_incr - dt) / dt;
    const double z_lag = (L / n_lag) / (dt / std::sqrt(n_lag));
    report(3, "innovation increments behave as Brownian noise",
           std::abs(z_mean) <= 4.0 && var_rel <= 0.05 && std::abs(z_lag) <= 4.0,
           fmt("mean z %.2f (<=4), var rel %.4f (<=0.05), lag1 z %.2f (<=4)", z_mean,
               var_rel, z_lag));
}

// ---------------------------------------------------------------- criterion 4
void criterion_4() {
    bool pass = true;
    std::string detail;
    for (double alpha : {0.0, 1.0}) {
        const Schedule sd{alpha, 1.0};
        // the drift stiffens like 1/(T - t); refine the grid near the horizon so
        // the explicit step resolves it at the evaluation time T - epsilon
        const auto grid = make_grid(1.0, 2000, 1e-3, GridSpacing::geometric_near_end);
        const Vec y0{0.0}, v{1.0};
        const std::size_t n = 1000;
        const std::size_t mid = grid.n_steps() / 2;
        std::vector<double> term(n), midv(n);
        parallel_for_index(n, g_threads, [&](std::size_t j) {
            const std::uint64_t root = alpha > 0 ? 4002 : 4001;
            const auto p = simulate_bridge(v, sd, grid, RandomStream{root, j}, &y0);
            term[j] = p.terminal()[0];
            midv[j] = p.values[mid][0];
        });
        double s = 0, q = 0, sm = 0, qm = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = term[j] - v[0];
            s += d * d;
            q += d;
            sm += midv[j];
            qm += midv[j] * midv[j];
        }
        const double ms_term = s / n;
        const auto an_term = analytic_bridge_moments(y0, v, grid.end(), sd);
        const double expected =
            an_term.var + (an_term.mean[0] - v[0]) * (an_term.mean[0] - v[0]);
        const bool ok_var = std::abs(ms_term - expected) <= 0.2 * expected;

        const double mean_mid = sm / n;
        const double var_mid = qm / n - mean_mid * mean_mid;
        const auto an_mid = analytic_bridge_moments(y0, v, grid.t_points[mid], sd);
        const double se = std::sqrt(var_mid / n);
        const bool ok_mean = std::abs(mean_mid - an_mid.mean[0]) <= 3.0 * se;
        pass = pass && ok_var && ok_mean;
        detail += fmt("a=%.0f: E|Y-v|^2 %.4f/", alpha, ms_term) +
                  fmt("%.4f, mid-mean dev %.2f se; ", expected,
                      std::abs(mean_mid - an_mid.mean[0]) / se);
    }
    report(4, "pinned paths match the analytic bridge moments", pass, detail);
}

// ---------------------------------------------------------------- criterion 5
void criterion_5() {
    bool pass = true;
    std::string detail;
    const std::size_t n = 10000;
    struct Case {
        LatentScenario sc;
        double alpha;
    };
    for (const auto& [sc, alpha] : {Case{scenarios::binary_symmetric(), 0.0},
                                    Case{scenarios::two_attribute_hierarchy(), 1.0}}) {
        const Schedule sd{alpha, 1.0};
        const auto obs = ObservationModel::linear_bridge(sd, sc.dim);
        const auto grid = make_grid(1.0, 500, 1e-3);
        const std::size_t K = sc.n_components();
        std::vector<Vec> tj(n), tb(n);
        parallel_for_index(n, g_threads, [&](std::size_t j) {
            tj[j] = simulate_joint_system(sc, obs, grid, RandomStream{5001, j})
                        .y_path.terminal();
            const RandomStream ps = RandomStream{5002, j};
            auto eng = ps.substream(7).engine();
            const Latent lat = draw_latent(sc, eng);
            tb[j] = simulate_bridge(lat.v, sd, grid, ps).terminal();
        });
        // terminal component frequencies within 4-sigma binomial bands
        std::vector<double> freq(K, 0.0);
        for (const auto& y : tj) {
            std::size_t best = 0;
            double bd = dist2(y, sc.components[0].rendering);
            for (std::size_t k = 1; k < K; ++k) {
                const double d = dist2(y, sc.components[k].rendering);
                if (d < bd) {
                    bd = d;
                    best = k;
                }
            }
            freq[best] += 1.0 / static_cast<double>(n);
        }
        double worst_z = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double w = sc.components[k].weight;
            worst_z = std::max(worst_z, std::abs(freq[k] - w) /
                                            std::sqrt(w * (1.0 - w) / static_cast<double>(n)));
        }
        // two-sample moment tests against sample-latent-then-bridge
        double worst_mz = 0.0, worst_vz = 0.0;
        for (std::size_t d = 0; d < sc.dim; ++d) {
            double sj = 0, qj = 0, cj = 0, sb = 0, qb = 0, cb = 0;
            for (std::size_t j = 0; j < n; ++j) {
                sj += tj[j][d];
                qj += tj[j][d] * tj[j][d];
                sb += tb[j][d];
                qb += tb[j][d] * tb[j][d];
            }
            const double nn = static_cast<double>(n);
            const double mj = sj / nn, mb = sb / nn;
            const double vj = qj / nn - mj * mj, vb = qb / nn - mb * mb;
            for (std::size_t j = 0; j < n; ++j) {
                cj += std::pow(tj[j][d] - mj, 4);
                cb += std::pow(tb[j][d] - mb, 4);
            }
            const double se_m = std::sqrt((vj + vb) / nn);
            const double se_v =
                std::sqrt(std::max(0.0, (cj / nn - vj * vj) + (cb / nn - vb * vb)) / nn);
            worst_mz = std::max(worst_mz, std::abs(mj - mb) / se_m);
            worst_vz = std::max(worst_vz, std::abs(vj - vb) / se_v);
        }
        const bool ok = worst_z <= 4.0 && worst_mz <= 4.0 && worst_vz <= 4.0;
        pass = pass && ok;
        detail += fmt("K=%.0f: freq z %.2f, ", static_cast<double>(K), worst_z) +
                  fmt("mean z %.2f, var z %.2f; ", worst_mz, worst_vz);
    }
    report(5, "coupled system reproduces the sample-then-bridge law", pass, detail);
}

// ---------------------------------------------------------------- criterion 6
void criterion_6() {
    const auto sc = scenarios::three_component();
    std::mt19937_64 eng(6001);
    std::uniform_real_distribution<double> uy(-4.0, 4.0), ut(0.0, 0.999), ua(1e-3, 5.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < 100000; ++i) {
        const ScoreModel m{sc, Schedule{ua(eng), 1.0}};
        const double t = ut(eng);
        const Vec y{uy(eng)};
        const double a = m.backward_drift_score_form(y, t)[0];
        const double b = m.generative_drift(y, t)[0];
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    report(6, "score-form and filtered-form drifts coincide", worst <= 1e-10,
           fmt("worst relative gap %.2e (<=1e-10)", worst));
}

// ---------------------------------------------------------------- criterion 7
void criterion_7() {
    // static Gaussian channel: accumulated information at t = 1 is 1/2 ln 2
    const auto gauss_sc = scenarios::standard_gaussian();
    const auto grid1 = make_grid(1.0 + 1e-3, 1000, 1e-3);  // reaches t = 1
    auto g_est = mi_general(gauss_sc, ObservationModel::static_observation(1), grid1,
                            PhiSpec::full(), 10000, RandomStream{7001, 0}, g_threads);
    const double target = 0.5 * std::log(2.0);
    const bool ok_gauss = std::abs(g_est.total() - target) <= 0.05 * target;

    // symmetric binary mixture: pathwise estimator against the 1-D quadrature
    // oracle at 5 time points, and agreement with the filtration-gap estimator
    const auto sc = scenarios::binary_symmetric();
    const Schedule sd{0.0, 1.0};
    const auto grid = make_grid(1.0, 1000, 1e-3);
    ScoreModel model{sc, sd};
    auto lin = mi_linear(model, grid, PhiSpec::full(), 10000, RandomStream{7002, 0},
                         g_threads);
    double worst_rel = 0.0;
    for (double t : {0.15, 0.35, 0.55, 0.75, 0.95}) {
        std::size_t i = 0;
        for (std::size_t k = 1; k < grid.n_points(); ++k)
            if (std::abs(grid.t_points[k] - t) < std::abs(grid.t_points[i] - t)) i = k;
        const double oracle = mi_quadrature_oracle(sc, sd, grid.t_points[i], PhiSpec::full());
        worst_rel = std::max(worst_rel,
                             std::abs(lin.cumulative[i] + lin.i0 - oracle) / oracle);
    }
    const bool ok_oracle = worst_rel <= 0.05;

    auto gen = mi_general(sc, ObservationModel::linear_bridge(sd, 1), grid, PhiSpec::full(),
                          5000, RandomStream{7003, 0}, g_threads);
    const double se =
        std::sqrt(gen.std_error * gen.std_error + lin.std_error * lin.std_error);
    const bool ok_agree = std::abs(gen.value - lin.value) <= 3.0 * se;

    report(7, "information estimators: exactness and cross-consistency",
           ok_gauss && ok_oracle && ok_agree,
           fmt("gauss %.4f/0.3466, oracle rel %.4f (<=0.05), ", g_est.total(), worst_rel) +
               fmt("estimator gap %.2f se (<=3)", std::abs(gen.value - lin.value) / se));
}

// ---------------------------------------------------------------- criterion 8
void criterion_8() {
    // pointwise identity between the two score-form integrands
    double worst = 0.0;
    std::mt19937_64 eng(8001);
    std::uniform_real_distribution<double> uy(-3.0, 3.0), ut(0.0, 0.99);
    for (auto sc : {scenarios::three_component(), scenarios::standard_gaussian()}) {
        for (double alpha : {0.0, 1.5}) {
            const ScoreModel m{sc, Schedule{alpha, 1.0}};
            for (int i = 0; i < 2000; ++i) {
                const double t = ut(eng);
                const Vec y{uy(eng)};
                Vec v;
                if (sc.kind == LatentScenario::Kind::finite_mixture) {
                    const Latent lat = draw_latent(sc, eng);
                    v = lat.v;
                } else {
                    std::normal_distribution<double> n01(0.0, 1.0);
                    v = {n01(eng)};
                }
                const double lhs2 =
                    std::pow(m.score_given_value(y, t, v)[0] - m.score(y, t)[0], 2);
                const double rhs2 = norm2(m.bridge_score(y, t, v));
                worst = std::max(worst, std::abs(lhs2 - rhs2) / std::max(1.0, rhs2));
            }
        }
    }
    const bool ok_pointwise = worst <= 1e-8;

    // single Gaussian latent: estimate vs closed form up to t = 0.9 T
    const ScoreModel model{scenarios::standard_gaussian(), Schedule{0.0, 1.0}};
    const auto grid = make_grid(1.0, 1000, 1e-3);
    auto est = mi_score_gap(model, grid, 10000, RandomStream{8002, 0},
                            ScoreGapForm::bridge_score, g_threads);
    double worst_rel = 0.0;
    for (double t : {0.3, 0.5, 0.7, 0.9}) {
        std::size_t i = 0;
        for (std::size_t k = 1; k < grid.n_points(); ++k)
            if (std::abs(grid.t_points[k] - t) < std::abs(grid.t_points[i] - t)) i = k;
        const double closed = 0.5 * std::log(1.0 + 1.0 / (1.0 - grid.t_points[i]));
        worst_rel =
            std::max(worst_rel, std::abs(est.cumulative[i] + est.i0 - closed) / closed);
    }
    const bool ok_closed = worst_rel <= 0.05;
    report(8, "score-gap integrand identity and Gaussian closed form",
           ok_pointwise && ok_closed,
           fmt("pointwise gap %.2e (<=1e-8), closed-form rel %.4f (<=0.05)", worst,
               worst_rel));
}

// ---------------------------------------------------------------- criterion 9
void criterion_9() {
    const auto sc = scenarios::binary_symmetric();
    const auto obs = ObservationModel::static_observation(1);
    const auto grid = make_grid(1.0, 500, 1e-3);
    const auto rep = dpi_check(sc, obs, grid, PhiSpec::full(), 8000, RandomStream{9001, 0},
                               {0.25, 0.5, 0.75}, 16, g_threads);
    bool pass = true;
    std::string detail;
    for (const auto& pt : rep.points) {
        const double s_suff = std::hypot(pt.i_pi_se, pt.i_full_se);
        const double s_dpi = std::hypot(pt.i_proj_se, pt.i_full_se);
        const bool ok_suff = std::abs(pt.i_pi - pt.i_full) <= 3.0 * s_suff;
        const bool ok_dpi = pt.i_proj <= pt.i_full + 3.0 * s_dpi;
        pass = pass && ok_suff && ok_dpi;
        detail += fmt("t=%.2f: |dI| %.2f se, ", pt.t, std::abs(pt.i_pi - pt.i_full) / s_suff) +
                  fmt("proj-excess %.2f se; ", (pt.i_proj - pt.i_full) / s_dpi);
    }
    report(9, "posterior sufficiency and data-processing bounds", pass, detail);
}

// --------------------------------------------------------------- criterion 10
void criterion_10() {
    const auto sc = scenarios::two_attribute_hierarchy();
    const Schedule sd{5.0, 1.0};
    const ScoreModel model{sc, sd};
    const auto grid = make_grid(1.0, 400, 1e-3);

    ForkConfig fc;
    fc.k = 100;
    fc.n_seeds = 10;
    for (int i = 0; i <= 8; ++i)
        fc.tau_list.push_back(grid.end() * static_cast<double>(i) / 8.0);
    const auto rep = run_forking(model, fc, grid, RandomStream{10001, 0}, g_threads);

    const std::size_t n_attr = sc.attributes.size();
    const std::size_t n_tau = fc.tau_list.size();
    // aggregates are ordered (tau, attr)
    auto agg = [&](std::size_t ti, std::size_t a) -> const ForkAggregate& {
        return rep.aggregates[ti * n_attr + a];
    };

    bool ok_monotone = true, ok_start = true, ok_end = true;
    std::vector<std::size_t> cross(n_attr, n_tau);
    for (std::size_t a = 0; a < n_attr; ++a) {
        const double h_prior = sc.attributes[a].prior_entropy(sc.components);
        for (std::size_t ti = 1; ti < n_tau; ++ti) {
            const double slack = 2.0 * std::hypot(agg(ti, a).stderr_entropy,
                                                  agg(ti - 1, a).stderr_entropy);
            if (agg(ti, a).mean_entropy > agg(ti - 1, a).mean_entropy + slack)
                ok_monotone = false;
        }
        const double se0 = std::max(agg(0, a).stderr_entropy, 1e-3);
        if (std::abs(agg(0, a).mean_entropy - h_prior) > 4.0 * se0) ok_start = false;
        if (agg(n_tau - 1, a).mean_entropy >= 0.05) ok_end = false;
        for (std::size_t ti = 0; ti < n_tau; ++ti)
            if (agg(ti, a).mean_entropy < 0.5 * h_prior) {
                cross[a] = ti;
                break;
            }
    }
    const std::size_t ga = static_cast<std::size_t>(sc.attribute_index("global"));
    const std::size_t la = static_cast<std::size_t>(sc.attribute_index("local"));
    const bool ok_order = cross[ga] + 1 <= cross[la];

    // coherence with the information half-cap crossings on the same scenario
    auto mi_cross = [&](std::size_t a) {
        const auto est = mi_linear(model, grid, PhiSpec::attribute(a), 2000,
                                   RandomStream{10002 + a, 0}, g_threads);
        const double cap = sc.attributes[a].prior_entropy(sc.components);
        for (std::size_t i = 0; i < est.cumulative.size(); ++i)
            if (est.cumulative[i] + est.i0 >= 0.5 * cap) return grid.t_points[i];
        return grid.end();
    };
    const double tg = mi_cross(ga), tl = mi_cross(la);
    const bool ok_mi_order = tg < tl;
    const bool ok_coherent = std::abs(fc.tau_list[cross[ga]] - tg) <= 0.25 &&
                             std::abs(fc.tau_list[std::min(cross[la], n_tau - 1)] - tl) <=
                                 0.25;

    report(10, "fork-entropy profile and its agreement with information curves",
           ok_monotone && ok_start && ok_end && ok_order && ok_mi_order && ok_coherent,
           fmt("cross tau: global %.3f, local %.3f; ", fc.tau_list[cross[ga]],
               fc.tau_list[std::min(cross[la], n_tau - 1)]) +
               fmt("info cross: %.3f / %.3f; ", tg, tl) +
               std::string(ok_monotone ? "monotone " : "NOT-monotone ") +
               (ok_start ? "prior-start " : "bad-start ") +
               (ok_end ? "frozen-end" : "loose-end"));
}

// --------------------------------------------------------------- criterion 11
void criterion_11() {
    using namespace lab::harness;
    const char* cfg_text = R"({
      "schema_version": 1,
      "experiment": "mi-curve",
      "scenario": {"builtin": "binary-symmetric"},
      "schedule": {"alpha": 0.0, "T": 1.0, "epsilon": 0.001},
      "grid": {"steps": 200},
      "mc": {"n_paths": 500},
      "mi": {"phi": "full", "estimator": "linear"},
      "seed": 11011
    })";
    auto parsed = parse_config(cfg_text);
    if (!parsed.ok()) {
        report(11, "identical seeds reproduce byte-identical outputs", false,
               "config failed to parse");
        return;
    }
    auto read_all = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    bool pass = true;
    std::string detail;
    std::vector<std::string> files_a;
    const auto base = fs::temp_directory_path() / "lab_acceptance_repro";
    for (const char* exp : {"mi-curve", "fork"}) {
        HarnessConfig c = parsed.config;
        c.experiment = exp;
        if (std::string(exp) == "fork") {
            c.n_seeds = 3;
            c.k = 20;
            c.tau_list = {0.0, 0.5};
            c.sched.alpha = 2.0;
        }
        std::string da = (base / (std::string(exp) + "_a")).string();
        std::string db = (base / (std::string(exp) + "_b")).string();
        fs::remove_all(da);
        fs::remove_all(db);
        fs::create_directories(da);
        fs::create_directories(db);
        RunOptions oa{da, g_threads, false};
        RunOptions ob{db, std::max(1u, g_threads / 2), false};
        const auto fa = run_experiment(c, oa);
        const auto fb = run_experiment(c, ob);
        if (fa != fb) pass = false;
        for (const auto& f : fa)
            if (read_all(da + "/" + f) != read_all(db + "/" + f)) {
                pass = false;
                detail += f + " differs; ";
            }
    }
    fs::remove_all(base);
    if (detail.empty()) detail = "csv outputs byte-identical across replays";
    report(11, "identical seeds reproduce byte-identical outputs", pass, detail);
}

}  // namespace

int main() {
    g_threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    const auto dt = std::chrono::duration_cast<std::chrono::seconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::printf("%d/11 criteria passed in %llds\n", 11 - g_failures,
                static_cast<long long>(dt));
    return g_failures;
}
