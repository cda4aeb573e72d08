#include "lab/information.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace lab {

namespace {

constexpr std::size_t kBlock = 64;  // paths per reduction block; fixed so that
                                    // results do not depend on thread count

struct DrawnLatent {
    std::size_t comp = 0;  // mixture component (unused for gaussian)
    Vec v;                 // rendering
};

DrawnLatent draw_latent(const LatentScenario& sc, std::mt19937_64& eng) {
    DrawnLatent out;
    std::normal_distribution<double> gauss(0.0, 1.0);
    if (sc.kind == LatentScenario::Kind::gaussian) {
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

// Measurement path under the joint law: latent drawn from the prior, Y_0
// from its conditional law, then Euler with the true-latent drift.
SamplePath simulate_measurement(const LatentScenario& sc, const ObservationModel& obs,
                                const TimeGrid& grid, const Vec& v,
                                std::mt19937_64& eng, const RandomStream& noise) {
    Vec y0(sc.dim, 0.0);
    if (obs.kind == ObservationModel::Kind::linear_bridge) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        const GaussMoments m = forward_marginal(v, obs.sched.T, obs.sched.alpha);
        const double sd = std::sqrt(m.var);
        for (std::size_t d = 0; d < sc.dim; ++d) y0[d] = m.mean[d] + sd * gauss(eng);
    }
    const auto incr = sample_brownian_increments(grid, sc.dim, noise);
    return euler_maruyama([&](const Vec& y, double t) { return obs.h(y, v, t); }, y0,
                          grid, incr);
}

struct Accumulator {
    std::vector<double> step_sum;  // sum over paths of gap^2 at each step
    std::vector<double> cum_sum;   // sum over paths of the running integral
    std::vector<double> cum_sum2;
    std::size_t count = 0;

    explicit Accumulator(std::size_t n_points)
        : step_sum(n_points - 1, 0.0), cum_sum(n_points, 0.0), cum_sum2(n_points, 0.0) {}

    void add_path(const std::vector<double>& gap2, const TimeGrid& grid) {
        double c = 0.0;
        for (std::size_t i = 0; i < gap2.size(); ++i) {
            step_sum[i] += gap2[i];
            cum_sum[i] += c;
            cum_sum2[i] += c * c;
            c += 0.5 * gap2[i] * grid.dt(i);
        }
        cum_sum.back() += c;
        cum_sum2.back() += c * c;
        ++count;
    }

    void merge(const Accumulator& o) {
        for (std::size_t i = 0; i < step_sum.size(); ++i) step_sum[i] += o.step_sum[i];
        for (std::size_t i = 0; i < cum_sum.size(); ++i) {
            cum_sum[i] += o.cum_sum[i];
            cum_sum2[i] += o.cum_sum2[i];
        }
        count += o.count;
    }
};

MIEstimate finalize(const Accumulator& acc, const TimeGrid& grid) {
    MIEstimate est;
    const double n = static_cast<double>(acc.count);
    est.times = grid.t_points;
    est.integrand.resize(acc.step_sum.size());
    for (std::size_t i = 0; i < acc.step_sum.size(); ++i)
        est.integrand[i] = acc.step_sum[i] / n;
    est.cumulative.resize(acc.cum_sum.size());
    est.cumulative_se.resize(acc.cum_sum.size());
    for (std::size_t i = 0; i < acc.cum_sum.size(); ++i) {
        const double mean = acc.cum_sum[i] / n;
        est.cumulative[i] = mean;
        const double var = std::max(0.0, acc.cum_sum2[i] / n - mean * mean);
        est.cumulative_se[i] = std::sqrt(var / n);
    }
    est.value = est.cumulative.back();
    est.std_error = est.cumulative_se.back();
    return est;
}

// Runs fn(path_index, block_accumulator) over all paths in fixed-size blocks.
Accumulator run_blocks(std::size_t n_paths, const TimeGrid& grid, unsigned threads,
                       const std::function<void(std::size_t, Accumulator&)>& fn) {
    const std::size_t n_blocks = (n_paths + kBlock - 1) / kBlock;
    std::vector<Accumulator> parts(n_blocks, Accumulator(grid.n_points()));
    parallel_for_index(n_blocks, threads, [&](std::size_t b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(n_paths, lo + kBlock);
        for (std::size_t j = lo; j < hi; ++j) fn(j, parts[b]);
    });
    Accumulator total(grid.n_points());
    for (const auto& p : parts) total.merge(p);
    return total;
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double tol,
                            int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, simpson(f, a, b, fa, fm, fb), tol,
                                40);
}

double gauss_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * M_PI * var);
}

// Distinct labels of phi and per-component label ids (components themselves
// for phi = full latent).
std::vector<int> phi_labels(const LatentScenario& sc, const PhiSpec& phi) {
    if (phi.kind == PhiSpec::Kind::attribute) return sc.attributes.at(phi.attr).labels;
    std::vector<int> out(sc.n_components());
    std::iota(out.begin(), out.end(), 0);
    return out;
}

}  // namespace

double mixture_channel_mi(const LatentScenario& scenario, const PhiSpec& phi, double a,
                          double s2) {
    if (scenario.dim != 1)
        throw std::invalid_argument("mixture_channel_mi: 1-D scenarios only");
    if (scenario.kind != LatentScenario::Kind::finite_mixture)
        throw std::invalid_argument("mixture_channel_mi: finite mixture required");
    const auto labels = phi_labels(scenario, phi);
    std::vector<int> distinct(labels);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    const std::size_t K = scenario.n_components();
    auto marginal = [&](double y) {
        double p = 0.0;
        for (std::size_t k = 0; k < K; ++k)
            p += scenario.components[k].weight *
                 gauss_pdf(y, a * scenario.components[k].rendering[0], s2);
        return p;
    };
    double lo = a * scenario.components[0].rendering[0], hi = lo;
    for (const auto& c : scenario.components) {
        lo = std::min(lo, a * c.rendering[0]);
        hi = std::max(hi, a * c.rendering[0]);
    }
    const double sd = std::sqrt(s2);
    lo -= 10.0 * sd;
    hi += 10.0 * sd;
    // split the domain at every component mode so narrow peaks cannot slip
    // between the initial quadrature samples
    std::vector<double> cuts{lo};
    for (const auto& c : scenario.components) {
        const double mu = a * c.rendering[0];
        for (double x : {mu - 5.0 * sd, mu - sd, mu, mu + sd, mu + 5.0 * sd})
            if (x > lo && x < hi) cuts.push_back(x);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());

    double mi = 0.0;
    for (int l : distinct) {
        double wl = 0.0;
        for (std::size_t k = 0; k < K; ++k)
            if (labels[k] == l) wl += scenario.components[k].weight;
        auto cond = [&](double y) {
            double p = 0.0;
            for (std::size_t k = 0; k < K; ++k)
                if (labels[k] == l)
                    p += scenario.components[k].weight / wl *
                         gauss_pdf(y, a * scenario.components[k].rendering[0], s2);
            return p;
        };
        auto integrand = [&](double y) {
            const double pc = cond(y);
            if (pc <= 0.0) return 0.0;
            return pc * std::log(pc / marginal(y));
        };
        double part = 0.0;
        const double tol =
            1e-4 / static_cast<double>(distinct.size() * (cuts.size() - 1));
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            part += adaptive_simpson(integrand, cuts[i], cuts[i + 1], tol);
        mi += wl * part;
    }
    return std::max(0.0, mi);
}

double mi_quadrature_oracle(const LatentScenario& scenario, const Schedule& sched,
                            double t, const PhiSpec& phi) {
    const double tau = sched.T - t;
    if (tau <= 0.0) throw std::invalid_argument("mi_quadrature_oracle: t must be < T");
    double a, s2;
    if (sched.alpha <= 0.0) {
        a = 1.0;
        s2 = tau;
    } else {
        a = std::exp(-sched.alpha * tau);
        s2 = -std::expm1(-2.0 * sched.alpha * tau) / (2.0 * sched.alpha);
    }
    return mixture_channel_mi(scenario, phi, a, s2);
}

void initial_mi(const LatentScenario& scenario, const ObservationModel& obs,
                const PhiSpec& phi, double& i0, bool& omitted) {
    i0 = 0.0;
    omitted = false;
    if (obs.kind != ObservationModel::Kind::linear_bridge) return;  // Y_0 fixed
    double a, s2;
    const double T = obs.sched.T;
    if (obs.sched.alpha <= 0.0) {
        a = 1.0;
        s2 = T;
    } else {
        a = std::exp(-obs.sched.alpha * T);
        s2 = -std::expm1(-2.0 * obs.sched.alpha * T) / (2.0 * obs.sched.alpha);
    }
    if (scenario.kind == LatentScenario::Kind::gaussian) {
        i0 = 0.5 * std::log1p(a * a * scenario.var0 / s2);
        return;
    }
    if (scenario.dim == 1) {
        i0 = mixture_channel_mi(scenario, phi, a, s2);
        return;
    }
    if (scenario.dim == 2) {
        // tensor midpoint grid
        const auto labels = phi_labels(scenario, phi);
        std::vector<int> distinct(labels);
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        const double sd = std::sqrt(s2);
        double lo0 = 1e300, hi0 = -1e300, lo1 = 1e300, hi1 = -1e300;
        for (const auto& c : scenario.components) {
            lo0 = std::min(lo0, a * c.rendering[0]);
            hi0 = std::max(hi0, a * c.rendering[0]);
            lo1 = std::min(lo1, a * c.rendering[1]);
            hi1 = std::max(hi1, a * c.rendering[1]);
        }
        lo0 -= 8.0 * sd; hi0 += 8.0 * sd;
        lo1 -= 8.0 * sd; hi1 += 8.0 * sd;
        const std::size_t n = 400;
        const double h0 = (hi0 - lo0) / n, h1 = (hi1 - lo1) / n;
        double mi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double y0 = lo0 + (i + 0.5) * h0;
            for (std::size_t j = 0; j < n; ++j) {
                const double y1 = lo1 + (j + 0.5) * h1;
                double pm = 0.0;
                std::map<int, double> pl;
                for (std::size_t k = 0; k < scenario.n_components(); ++k) {
                    const double p = scenario.components[k].weight *
                                     gauss_pdf(y0, a * scenario.components[k].rendering[0], s2) *
                                     gauss_pdf(y1, a * scenario.components[k].rendering[1], s2);
                    pm += p;
                    pl[labels[k]] += p;
                }
                if (pm <= 0.0) continue;
                for (int l : distinct) {
                    double wl = 0.0;
                    for (std::size_t k = 0; k < scenario.n_components(); ++k)
                        if (labels[k] == l) wl += scenario.components[k].weight;
                    const double pc = pl[l] / wl;
                    if (pc > 0.0) mi += wl * pc * std::log(pc / pm) * h0 * h1;
                }
            }
        }
        i0 = std::max(0.0, mi);
        return;
    }
    omitted = true;
}

MIEstimate mi_general(const LatentScenario& scenario, const ObservationModel& obs,
                      const TimeGrid& grid, const PhiSpec& phi, std::size_t n_paths,
                      const RandomStream& stream, unsigned threads) {
    if (n_paths == 0) throw std::invalid_argument("mi_general: need paths");
    const bool gaussian = scenario.kind == LatentScenario::Kind::gaussian;
    if (gaussian) {
        if (obs.kind != ObservationModel::Kind::static_obs || scenario.dim != 1 ||
            phi.kind != PhiSpec::Kind::full_latent)
            throw std::invalid_argument(
                "mi_general: gaussian latent supported only with the 1-D static "
                "observation and phi = full latent");
    }

    auto acc = run_blocks(n_paths, grid, threads, [&](std::size_t j, Accumulator& a) {
        const RandomStream ps = stream.substream(j);
        auto eng = ps.substream(1).engine();
        const DrawnLatent lat = draw_latent(scenario, eng);
        const SamplePath path =
            simulate_measurement(scenario, obs, grid, lat.v, eng, ps.substream(0));

        std::vector<double> gap2(grid.n_steps());
        if (gaussian) {
            const KalmanTrajectory kb = kalman_bucy(path, scenario.mu0[0], scenario.var0);
            for (std::size_t i = 0; i < grid.n_steps(); ++i) {
                const double d = kb.mean[i] - lat.v[0];
                gap2[i] = d * d;
            }
        } else {
            const ConditioningSpec cond_r =
                phi.kind == PhiSpec::Kind::attribute
                    ? ConditioningSpec::plus_label(
                          phi.attr, scenario.attributes[phi.attr].labels[lat.comp])
                    : ConditioningSpec::full_latent(lat.comp);
            const auto pf =
                exact_discrete_filter(path, scenario, obs, ConditioningSpec::measurements());
            const auto pr = exact_discrete_filter(path, scenario, obs, cond_r);
            for (std::size_t i = 0; i < grid.n_steps(); ++i) {
                const double t = grid.t_points[i];
                Vec hf(scenario.dim, 0.0), hr(scenario.dim, 0.0);
                for (std::size_t k = 0; k < scenario.n_components(); ++k) {
                    if (pf.pi[i][k] == 0.0 && pr.pi[i][k] == 0.0) continue;
                    const Vec h =
                        obs.h(path.values[i], scenario.components[k].rendering, t);
                    axpy(pf.pi[i][k], h, hf);
                    axpy(pr.pi[i][k], h, hr);
                }
                gap2[i] = dist2(hf, hr);
            }
        }
        a.add_path(gap2, grid);
    });

    MIEstimate est = finalize(acc, grid);
    if (gaussian) {
        est.i0 = 0.0;  // Y_0 is a constant for the static observation
    } else {
        initial_mi(scenario, obs, phi, est.i0, est.i0_omitted);
    }
    return est;
}

MIEstimate mi_linear(const ScoreModel& model, const TimeGrid& grid, const PhiSpec& phi,
                     std::size_t n_paths, const RandomStream& stream, unsigned threads) {
    if (n_paths == 0) throw std::invalid_argument("mi_linear: need paths");
    const LatentScenario& sc = model.scenario;
    const ObservationModel obs = ObservationModel::linear_bridge(model.sched, sc.dim);

    auto acc = run_blocks(n_paths, grid, threads, [&](std::size_t j, Accumulator& a) {
        const RandomStream ps = stream.substream(j);
        auto eng = ps.substream(1).engine();
        const DrawnLatent lat = draw_latent(sc, eng);
        const SamplePath path =
            simulate_measurement(sc, obs, grid, lat.v, eng, ps.substream(0));

        std::vector<double> gap2(grid.n_steps());
        for (std::size_t i = 0; i < grid.n_steps(); ++i) {
            const double t = grid.t_points[i];
            const double m = model.sched.m(t);
            const Vec uncond = model.posterior_mean(path.values[i], t);
            Vec cond;
            if (phi.kind == PhiSpec::Kind::full_latent)
                cond = lat.v;
            else
                cond = model.posterior_mean_given(path.values[i], t, phi.attr,
                                                  sc.attributes[phi.attr].labels[lat.comp]);
            gap2[i] = m * m * dist2(uncond, cond);
        }
        a.add_path(gap2, grid);
    });

    MIEstimate est = finalize(acc, grid);
    initial_mi(sc, obs, phi, est.i0, est.i0_omitted);
    return est;
}

MIEstimate mi_score_gap(const ScoreModel& model, const TimeGrid& grid,
                        std::size_t n_paths, const RandomStream& stream,
                        ScoreGapForm form, unsigned threads) {
    if (n_paths == 0) throw std::invalid_argument("mi_score_gap: need paths");
    const LatentScenario& sc = model.scenario;
    const ObservationModel obs = ObservationModel::linear_bridge(model.sched, sc.dim);

    auto acc = run_blocks(n_paths, grid, threads, [&](std::size_t j, Accumulator& a) {
        const RandomStream ps = stream.substream(j);
        auto eng = ps.substream(1).engine();
        const DrawnLatent lat = draw_latent(sc, eng);
        const SamplePath path =
            simulate_measurement(sc, obs, grid, lat.v, eng, ps.substream(0));

        std::vector<double> gap2(grid.n_steps());
        for (std::size_t i = 0; i < grid.n_steps(); ++i) {
            const double t = grid.t_points[i];
            const Vec& y = path.values[i];
            if (form == ScoreGapForm::marginal_vs_conditional) {
                const Vec su = model.score(y, t);
                const Vec sv = model.score_given_value(y, t, lat.v);
                gap2[i] = dist2(su, sv);
            } else {
                gap2[i] = norm2(model.bridge_score(y, t, lat.v));
            }
        }
        a.add_path(gap2, grid);
    });

    MIEstimate est = finalize(acc, grid);
    initial_mi(sc, obs, PhiSpec::full(), est.i0, est.i0_omitted);
    // The continuous-V integrand grows like 1/(T-s) toward the cutoff.
    if (est.integrand.size() >= 4) {
        const double mid = est.integrand[est.integrand.size() / 2];
        if (mid > 0.0 && est.integrand.back() > 10.0 * mid) est.divergence_warning = true;
    }
    return est;
}

DpiReport dpi_check(const LatentScenario& scenario, const ObservationModel& obs,
                    const TimeGrid& grid, const PhiSpec& phi, std::size_t n_paths,
                    const RandomStream& stream, const std::vector<double>& eval_times,
                    std::size_t bins, unsigned threads) {
    if (scenario.kind != LatentScenario::Kind::finite_mixture)
        throw std::invalid_argument("dpi_check: finite mixture required");
    const std::size_t K = scenario.n_components();
    if (K > 8) throw std::invalid_argument("dpi_check: K too large for plug-in MI");

    std::vector<std::size_t> idx;
    for (double t : eval_times) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < grid.n_points(); ++i)
            if (std::abs(grid.t_points[i] - t) < std::abs(grid.t_points[best] - t))
                best = i;
        idx.push_back(best);
    }
    std::sort(idx.begin(), idx.end());  // report points in time order
    const std::size_t E = idx.size();
    const auto labels = phi_labels(scenario, phi);

    // per path and eval point: posterior vector, projection, cumulative MI term
    std::vector<int> path_label(n_paths);
    std::vector<std::vector<Vec>> pis(n_paths, std::vector<Vec>(E));
    std::vector<std::vector<Vec>> projs(n_paths, std::vector<Vec>(E));
    std::vector<std::vector<double>> cums(n_paths, std::vector<double>(E));

    const std::size_t n_blocks = (n_paths + kBlock - 1) / kBlock;
    parallel_for_index(n_blocks, threads, [&](std::size_t b) {
        for (std::size_t j = b * kBlock; j < std::min(n_paths, (b + 1) * kBlock); ++j) {
            const RandomStream ps = stream.substream(j);
            auto eng = ps.substream(1).engine();
            const DrawnLatent lat = draw_latent(scenario, eng);
            path_label[j] = labels[lat.comp];
            const SamplePath path =
                simulate_measurement(scenario, obs, grid, lat.v, eng, ps.substream(0));
            const ConditioningSpec cond_r =
                phi.kind == PhiSpec::Kind::attribute
                    ? ConditioningSpec::plus_label(phi.attr, labels[lat.comp])
                    : ConditioningSpec::full_latent(lat.comp);
            const auto pf =
                exact_discrete_filter(path, scenario, obs, ConditioningSpec::measurements());
            const auto pr = exact_discrete_filter(path, scenario, obs, cond_r);
            double cum = 0.0;
            std::size_t e = 0;
            for (std::size_t i = 0; i <= grid.n_steps(); ++i) {
                while (e < E && idx[e] == i) {
                    pis[j][e] = pf.pi[i];
                    Vec proj(scenario.dim, 0.0);
                    const double t = grid.t_points[i];
                    for (std::size_t k = 0; k < K; ++k)
                        if (pf.pi[i][k] > 0.0)
                            axpy(pf.pi[i][k],
                                 obs.h(path.values[i], scenario.components[k].rendering,
                                       std::min(t, grid.end())),
                                 proj);
                    projs[j][e] = proj;
                    cums[j][e] = cum;
                    ++e;
                }
                if (i == grid.n_steps()) break;
                const double t = grid.t_points[i];
                Vec hf(scenario.dim, 0.0), hr(scenario.dim, 0.0);
                for (std::size_t k = 0; k < K; ++k) {
                    if (pf.pi[i][k] == 0.0 && pr.pi[i][k] == 0.0) continue;
                    const Vec h = obs.h(path.values[i], scenario.components[k].rendering, t);
                    axpy(pf.pi[i][k], h, hf);
                    axpy(pr.pi[i][k], h, hr);
                }
                cum += 0.5 * dist2(hf, hr) * grid.dt(i);
            }
        }
    });

    double i0;
    bool i0_omitted;
    initial_mi(scenario, obs, phi, i0, i0_omitted);

    // discrete plug-in MI between cell ids and labels over a subset of paths
    auto plugin_mi = [&](const std::vector<int>& cells,
                         const std::vector<std::size_t>& subset) {
        std::map<std::pair<int, int>, double> joint;
        std::map<int, double> pc, plab;
        const double n = static_cast<double>(subset.size());
        for (std::size_t j : subset) {
            joint[{cells[j], path_label[j]}] += 1.0 / n;
            pc[cells[j]] += 1.0 / n;
            plab[path_label[j]] += 1.0 / n;
        }
        double mi = 0.0;
        for (const auto& [key, p] : joint)
            mi += p * std::log(p / (pc[key.first] * plab[key.second]));
        return std::max(0.0, mi);
    };

    std::vector<std::size_t> all(n_paths);
    std::iota(all.begin(), all.end(), 0);
    const std::size_t B = 100;
    auto boot_eng = stream.substream(0xB007).engine();
    std::uniform_int_distribution<std::size_t> pick(0, n_paths - 1);

    DpiReport rep;
    rep.i0 = i0;
    rep.i0_omitted = i0_omitted;
    int n_labels_distinct = 0;
    {
        std::vector<int> d(labels);
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        n_labels_distinct = static_cast<int>(d.size());
    }

    for (std::size_t e = 0; e < E; ++e) {
        DpiPoint pt;
        pt.t = grid.t_points[idx[e]];

        // I_full from the filtration-gap accumulation
        double mean = 0.0, sq = 0.0;
        for (std::size_t j = 0; j < n_paths; ++j) {
            mean += cums[j][e];
            sq += cums[j][e] * cums[j][e];
        }
        mean /= static_cast<double>(n_paths);
        const double var = std::max(0.0, sq / static_cast<double>(n_paths) - mean * mean);
        pt.i_full = mean + (i0_omitted ? 0.0 : i0);
        pt.i_full_se = std::sqrt(var / static_cast<double>(n_paths));

        // quantize pi (first K-1 coordinates on [0,1]) and the projection
        std::vector<int> pi_cell(n_paths), proj_cell(n_paths);
        Vec lo(scenario.dim, 1e300), hi(scenario.dim, -1e300);
        for (std::size_t j = 0; j < n_paths; ++j)
            for (std::size_t d = 0; d < scenario.dim; ++d) {
                lo[d] = std::min(lo[d], projs[j][e][d]);
                hi[d] = std::max(hi[d], projs[j][e][d]);
            }
        for (std::size_t j = 0; j < n_paths; ++j) {
            int cell = 0;
            for (std::size_t k = 0; k + 1 < K; ++k) {
                int b = static_cast<int>(pis[j][e][k] * static_cast<double>(bins));
                b = std::clamp(b, 0, static_cast<int>(bins) - 1);
                cell = cell * static_cast<int>(bins) + b;
            }
            pi_cell[j] = cell;
            cell = 0;
            for (std::size_t d = 0; d < scenario.dim; ++d) {
                const double w = hi[d] - lo[d];
                int b = w > 0.0 ? static_cast<int>((projs[j][e][d] - lo[d]) / w *
                                                   static_cast<double>(bins))
                                : 0;
                b = std::clamp(b, 0, static_cast<int>(bins) - 1);
                cell = cell * static_cast<int>(bins) + b;
            }
            proj_cell[j] = cell;
        }

        // occupancy check: enough samples per occupied (cell, label) pair
        for (const auto* cells : {&pi_cell, &proj_cell}) {
            std::vector<int> occ(*cells);
            std::sort(occ.begin(), occ.end());
            occ.erase(std::unique(occ.begin(), occ.end()), occ.end());
            if (static_cast<double>(n_paths) <
                5.0 * static_cast<double>(occ.size()) * n_labels_distinct)
                throw std::runtime_error(
                    "dpi_check: quantization too coarse for the sample size");
        }

        pt.i_pi = plugin_mi(pi_cell, all);
        pt.i_proj = plugin_mi(proj_cell, all);
        double s1 = 0.0, s2 = 0.0, q1 = 0.0, q2 = 0.0;
        for (std::size_t b = 0; b < B; ++b) {
            std::vector<std::size_t> sub(n_paths);
            for (auto& s : sub) s = pick(boot_eng);
            const double m1 = plugin_mi(pi_cell, sub);
            const double m2 = plugin_mi(proj_cell, sub);
            s1 += m1;
            q1 += m1 * m1;
            s2 += m2;
            q2 += m2 * m2;
        }
        const double nb = static_cast<double>(B);
        pt.i_pi_se = std::sqrt(std::max(0.0, q1 / nb - (s1 / nb) * (s1 / nb)));
        pt.i_proj_se = std::sqrt(std::max(0.0, q2 / nb - (s2 / nb) * (s2 / nb)));
        // plug-in estimates include i0 implicitly through the Y_0-informed
        // filter initialization, as does i_full above
        rep.points.push_back(pt);
    }
    return rep;
}

}  // namespace lab
