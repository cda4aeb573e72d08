#include <cmath>

#include "doctest.h"
#include "lab/filter.hpp"
#include "lab/generative.hpp"
#include "lab/observation.hpp"
#include "lab/scenario.hpp"
#include "lab/sde.hpp"

using namespace lab;

namespace {

TimeGrid tiny_grid(std::vector<double> pts) {
    TimeGrid g;
    g.t_points = std::move(pts);
    g.T = g.t_points.back();
    g.epsilon = 0.0;
    return g;
}

SamplePath scalar_path(TimeGrid g, std::vector<double> ys) {
    SamplePath p;
    p.grid = std::move(g);
    p.dim = 1;
    for (double y : ys) p.values.push_back({y});
    return p;
}

double tv(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    return 0.5 * s;
}

// Measurement path driven by a fixed rendering v under the observation model.
SamplePath drive_path(const Vec& v, const ObservationModel& obs, const TimeGrid& g,
                      const RandomStream& s, const Vec& y0) {
    auto incr = sample_brownian_increments(g, v.size(), s);
    return euler_maruyama([&](const Vec& y, double t) { return obs.h(y, v, t); }, y0, g,
                          incr);
}

}  // namespace

TEST_CASE("girsanov log-weights: hand-checked two-step path") {
    auto p = scalar_path(tiny_grid({0.0, 0.5, 1.0}), {0.0, 1.0, 1.0});
    std::vector<Vec> h = {{1.0}, {1.0}};
    auto lw = girsanov_logweights(p, h);
    REQUIRE(lw.size() == 3);
    CHECK(lw[0] == doctest::Approx(0.0));
    CHECK(lw[1] == doctest::Approx(0.75));   // 1*1 - 0.5*0.5
    CHECK(lw[2] == doctest::Approx(0.5));    // + (0 - 0.25)
    CHECK_THROWS_AS(girsanov_logweights(p, {{1.0}}), std::invalid_argument);
}

TEST_CASE("girsanov weight is a mean-one martingale under the driftless law") {
    auto g = make_grid(1.0, 200, 1e-3);
    const std::size_t n = 20000;
    double sum = 0.0;
    std::vector<Vec> h(g.n_steps(), Vec{1.0});
    for (std::size_t j = 0; j < n; ++j) {
        auto incr = sample_brownian_increments(g, 1, RandomStream{314, j});
        auto p = euler_maruyama([](const Vec&, double) { return Vec{0.0}; }, {0.0}, g, incr);
        sum += std::exp(girsanov_logweights(p, h).back());
    }
    const double mean = sum / n;
    // var of exp(W_T - T/2) is e^T - 1 ~ 1.7
    CHECK(std::abs(mean - 1.0) < 4.0 * std::sqrt(1.7 / n));
}

TEST_CASE("kushner step: hand-checked two-state update") {
    std::vector<Vec> h = {{1.0}, {-1.0}};
    auto out = kushner_step({0.5, 0.5}, h, {0.1}, 0.01);
    CHECK(out[0] == doctest::Approx(0.55));
    CHECK(out[1] == doctest::Approx(0.45));
}

TEST_CASE("kushner step: vertices of the simplex are absorbing") {
    std::vector<Vec> h = {{1.0}, {-1.0}};
    auto out = kushner_step({1.0, 0.0}, h, {0.3}, 0.01);
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(0.0));
}

TEST_CASE("kushner step: clipping keeps the simplex and is counted") {
    std::vector<Vec> h = {{1.0}, {-1.0}};
    std::size_t clips = 0;
    auto out = kushner_step({0.9, 0.1}, h, {-6.0}, 0.01, &clips);  // huge negative innovation
    CHECK(clips == 1);
    CHECK(out[0] + out[1] == doctest::Approx(1.0));
    CHECK(out[0] >= 0.0);
    CHECK(out[1] >= 0.0);
}

TEST_CASE("uninformative observations leave the prior untouched") {
    auto sc = scenarios::three_component();
    auto obs = ObservationModel::make_custom(
        [](const Vec&, const Vec&, double) { return Vec{0.0}; }, 1);
    auto g = make_grid(1.0, 50, 1e-3);
    auto p = drive_path({0.0}, obs, g, RandomStream{5, 0}, {0.0});
    auto exact = exact_discrete_filter(p, sc, obs, ConditioningSpec::measurements());
    auto kush = kushner_filter(p, sc, obs, ConditioningSpec::measurements());
    for (std::size_t i = 0; i < g.n_points(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(exact.pi[i][k] == doctest::Approx(sc.components[k].weight).epsilon(1e-12));
            CHECK(kush.pi[i][k] == doctest::Approx(sc.components[k].weight).epsilon(1e-12));
        }
    }
}

TEST_CASE("bridge observation makes Y_0 informative at the filter start") {
    // alpha=0, T=1: Y_0 | V=v is N(v, 1), so pi_0(+1) = 1/(1+e^{-1}) at y0=0.5
    auto sc = scenarios::binary_symmetric();
    Schedule sd{0.0, 1.0};
    auto obs = ObservationModel::linear_bridge(sd, 1);
    auto p = scalar_path(tiny_grid({0.0, 0.01}), {0.5, 0.5});
    auto f = exact_discrete_filter(p, sc, obs, ConditioningSpec::measurements());
    CHECK(f.pi[0][0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-12));

    auto obs_static = ObservationModel::static_observation(1);
    auto f2 = exact_discrete_filter(p, sc, obs_static, ConditioningSpec::measurements());
    CHECK(f2.pi[0][0] == doctest::Approx(0.5));
}

TEST_CASE("label and full-latent conditioning restrict the support") {
    auto sc = scenarios::three_component();
    auto obs = ObservationModel::static_observation(1);
    auto p = scalar_path(tiny_grid({0.0, 0.01}), {0.0, 0.0});
    auto f = exact_discrete_filter(p, sc, obs, ConditioningSpec::plus_label(1, 1));
    CHECK(f.pi[0][0] == doctest::Approx(0.0));
    CHECK(f.pi[0][1] == doctest::Approx(0.3 / 0.5));
    CHECK(f.pi[0][2] == doctest::Approx(0.2 / 0.5));

    auto ffull = exact_discrete_filter(p, sc, obs, ConditioningSpec::full_latent(2));
    CHECK(ffull.pi[1][2] == doctest::Approx(1.0));

    CHECK_THROWS_AS(
        exact_discrete_filter(p, sc, obs, ConditioningSpec::plus_label(1, 9)),
        std::invalid_argument);
}

TEST_CASE("kushner filter tracks the exact filter on a fine grid") {
    auto sc = scenarios::binary_symmetric();
    auto obs = ObservationModel::static_observation(1);
    auto g = make_grid(1.0, 5000, 1e-3);
    double worst = 0.0;
    for (std::size_t j = 0; j < 20; ++j) {
        const Vec v = (j % 2 == 0) ? Vec{1.0} : Vec{-1.0};
        auto p = drive_path(v, obs, g, RandomStream{21, j}, {0.0});
        auto exact = exact_discrete_filter(p, sc, obs, ConditioningSpec::measurements());
        auto kush = kushner_filter(p, sc, obs, ConditioningSpec::measurements());
        worst = std::max(worst, tv(exact.pi.back(), kush.pi.back()));
    }
    CHECK(worst < 0.05);
}

TEST_CASE("particle filter with component particles matches the exact filter") {
    auto sc = scenarios::three_component();
    auto obs = ObservationModel::static_observation(1);
    auto g = make_grid(1.0, 500, 1e-3);
    auto p = drive_path({-1.0}, obs, g, RandomStream{77, 0}, {0.0});
    auto exact = exact_discrete_filter(p, sc, obs, ConditioningSpec::measurements());
    LatentSampler prior = [&](std::mt19937_64& eng) {
        std::discrete_distribution<int> d({0.5, 0.3, 0.2});
        int k = d(eng);
        return std::make_pair(sc.components[k].rendering, k);
    };
    auto pf = particle_filter(p, prior, obs, 4000, RandomStream{77, 1});
    REQUIRE(pf.states.back().comp_prob.size() == 3);
    CHECK(tv(exact.pi.back(), pf.states.back().comp_prob) < 0.05);
}

TEST_CASE("particle filter tracks the Kalman-Bucy closed form") {
    auto obs = ObservationModel::static_observation(1);
    auto g = make_grid(1.0, 1000, 1e-3);
    // true latent from N(0,1)
    auto eng = RandomStream{9, 0}.engine();
    std::normal_distribution<double> nd(0.0, 1.0);
    const Vec x{nd(eng)};
    auto p = drive_path(x, obs, g, RandomStream{9, 1}, {0.0});
    LatentSampler prior = [](std::mt19937_64& e) {
        std::normal_distribution<double> n01(0.0, 1.0);
        return std::make_pair(Vec{n01(e)}, -1);
    };
    auto pf = particle_filter(p, prior, obs, 4000, RandomStream{9, 2});
    auto kb = kalman_bucy(p, 0.0, 1.0);
    CHECK(kb.var.back() == doctest::Approx(1.0 / (1.0 + g.end())).epsilon(1e-9));
    CHECK(std::abs(pf.states.back().mean[0] - kb.mean.back()) < 0.06);
    CHECK(pf.states.back().var == doctest::Approx(kb.var.back()).epsilon(0.15));
    CHECK(pf.resample_events > 0);
}

TEST_CASE("a single particle collapses immediately") {
    auto obs = ObservationModel::static_observation(1);
    auto g = make_grid(1.0, 10, 1e-3);
    auto p = drive_path({1.0}, obs, g, RandomStream{3, 0}, {0.0});
    LatentSampler prior = [](std::mt19937_64&) { return std::make_pair(Vec{1.0}, 0); };
    CHECK_THROWS_AS(particle_filter(p, prior, obs, 1, RandomStream{3, 1}), FilterCollapse);
}

TEST_CASE("innovation under full-latent conditioning recovers the driving noise") {
    auto sc = scenarios::binary_symmetric();
    auto obs = ObservationModel::static_observation(1);
    auto g = make_grid(1.0, 100, 1e-3);
    auto incr = sample_brownian_increments(g, 1, RandomStream{55, 0});
    auto p = euler_maruyama(
        [&](const Vec& y, double t) { return obs.h(y, sc.components[0].rendering, t); },
        {0.0}, g, incr);
    auto f = exact_discrete_filter(p, sc, obs, ConditioningSpec::full_latent(0));
    auto innov = extract_innovation(p, f, sc, obs);
    for (std::size_t i = 0; i < g.n_steps(); ++i)
        CHECK(innov.increments[i][0] == doctest::Approx(incr[i][0]).epsilon(1e-12));
}

TEST_CASE("zero observation function gives innovation equal to the raw increments") {
    auto sc = scenarios::binary_symmetric();
    auto obs = ObservationModel::make_custom(
        [](const Vec&, const Vec&, double) { return Vec{0.0}; }, 1);
    auto g = make_grid(1.0, 50, 1e-3);
    auto incr = sample_brownian_increments(g, 1, RandomStream{56, 0});
    auto p = euler_maruyama([](const Vec&, double) { return Vec{0.0}; }, {0.2}, g, incr);
    auto f = exact_discrete_filter(p, sc, obs, ConditioningSpec::measurements());
    auto innov = extract_innovation(p, f, sc, obs);
    for (std::size_t i = 0; i < g.n_steps(); ++i)
        CHECK(innov.increments[i][0] == doctest::Approx(incr[i][0]).epsilon(1e-12));
}

TEST_CASE("posterior mass is a martingale under the unconditional law") {
    auto sc = scenarios::three_component();
    auto obs = ObservationModel::static_observation(1);
    auto g = make_grid(1.0, 100, 1e-3);
    const std::size_t n = 2000;
    Vec mean(3, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        auto eng = RandomStream{88, j}.substream(9).engine();
        std::discrete_distribution<int> d({0.5, 0.3, 0.2});
        const int k = d(eng);
        auto p = drive_path(sc.components[k].rendering, obs, g, RandomStream{88, j}, {0.0});
        auto f = exact_discrete_filter(p, sc, obs, ConditioningSpec::measurements());
        axpy(1.0 / n, f.pi.back(), mean);
    }
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(std::abs(mean[k] - sc.components[k].weight) < 0.05);
}

TEST_CASE("posterior_project overloads") {
    Vec pi{0.25, 0.75};
    CHECK(posterior_project(pi, std::vector<double>{2.0, -2.0}) == doctest::Approx(-1.0));
    auto v = posterior_project(pi, std::vector<Vec>{{1.0, 0.0}, {0.0, 1.0}});
    CHECK(v[0] == doctest::Approx(0.25));
    CHECK(v[1] == doctest::Approx(0.75));
}
