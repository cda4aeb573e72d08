#include <cmath>
#include <map>

#include "doctest.h"
#include "lab/generative.hpp"
#include "lab/scenario.hpp"
#include "lab/score_model.hpp"

using namespace lab;

TEST_CASE("single-component backward sampling degenerates to the pinned bridge") {
    LatentScenario one;
    one.dim = 1;
    one.components = {{1.0, {0.8}}};
    one.attributes = {{"id", {0}}};
    Schedule sd{0.0, 1.0};
    ScoreModel model{one, sd};
    // with one component the posterior is degenerate, so the sampling drift
    // is exactly the pinned-bridge drift toward v
    for (double t : {0.1, 0.5, 0.9})
        for (double y : {-1.0, 0.2, 2.0})
            CHECK(model.generative_drift({y}, t)[0] ==
                  doctest::Approx(bridge_drift({y}, {0.8}, t, sd)[0]).epsilon(1e-14));
    auto g = make_grid(1.0, 400, 1e-3);
    auto back = simulate_backward(model, g, RandomStream{101, 4});
    CHECK(std::abs(back.terminal()[0] - 0.8) < 0.2);
}

TEST_CASE("bridge pinning: terminal second moment scales like epsilon") {
    Schedule sd{0.0, 1.0};
    const std::size_t n = 2000;
    double ms_coarse = 0.0, ms_fine = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        auto gc = make_grid(1.0, 200, 1e-2);
        auto pc = simulate_bridge({1.0}, sd, gc, RandomStream{7, j});
        ms_coarse += (pc.terminal()[0] - 1.0) * (pc.terminal()[0] - 1.0);
        auto gf = make_grid(1.0, 2000, 1e-3);
        auto pf = simulate_bridge({1.0}, sd, gf, RandomStream{7, j});
        ms_fine += (pf.terminal()[0] - 1.0) * (pf.terminal()[0] - 1.0);
    }
    ms_coarse /= n;
    ms_fine /= n;
    // E|Y_{T-eps} - v|^2 = eps(1 - eps) for the Brownian bridge
    CHECK(ms_coarse == doctest::Approx(1e-2 * (1 - 1e-2)).epsilon(0.2));
    CHECK(ms_fine == doctest::Approx(1e-3 * (1 - 1e-3)).epsilon(0.2));
}

TEST_CASE("joint system: terminal hit frequencies match the prior") {
    auto sc = scenarios::binary_symmetric();
    Schedule sd{0.0, 1.0};
    auto obs = ObservationModel::linear_bridge(sd, 1);
    auto g = make_grid(1.0, 500, 1e-3);
    const std::size_t n = 1000;
    std::vector<SamplePath> paths;
    paths.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
        paths.push_back(simulate_joint_system(sc, obs, g, RandomStream{31, j}).y_path);
    auto hits = terminal_hitting_report(paths, sc);
    std::size_t plus = 0;
    for (const auto& h : hits) {
        if (h.component == 0) ++plus;
        CHECK(h.distance < 0.5);  // terminals concentrate near a rendering
    }
    const double freq = static_cast<double>(plus) / n;
    CHECK(std::abs(freq - 0.5) < 4.0 * std::sqrt(0.25 / n));
}

TEST_CASE("joint system posterior concentrates on the hit component") {
    auto sc = scenarios::binary_symmetric();
    Schedule sd{0.0, 1.0};
    auto obs = ObservationModel::linear_bridge(sd, 1);
    auto g = make_grid(1.0, 500, 1e-3);
    std::size_t agree = 0;
    const std::size_t n = 200;
    for (std::size_t j = 0; j < n; ++j) {
        auto tr = simulate_joint_system(sc, obs, g, RandomStream{32, j});
        auto hit = terminal_hitting_report({tr.y_path}, sc)[0];
        const Vec& pi = tr.pi_path.pi.back();
        std::size_t arg = pi[0] >= pi[1] ? 0 : 1;
        if (arg == hit.component) ++agree;
    }
    CHECK(agree >= n * 95 / 100);
}

TEST_CASE("joint system terminal law matches sample-latent-then-bridge") {
    auto sc = scenarios::three_component();
    Schedule sd{1.0, 1.0};
    auto obs = ObservationModel::linear_bridge(sd, 1);
    auto g = make_grid(1.0, 500, 1e-3);
    const std::size_t n = 2000;
    const std::size_t mid = 250;
    double a_sum = 0.0, a_sq = 0.0, b_sum = 0.0, b_sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double ya = simulate_joint_system(sc, obs, g, RandomStream{33, j})
                              .y_path.values[mid][0];
        a_sum += ya;
        a_sq += ya * ya;
        auto eng = RandomStream{34, j}.substream(7).engine();
        std::discrete_distribution<int> d({0.5, 0.3, 0.2});
        const Vec v = sc.components[static_cast<std::size_t>(d(eng))].rendering;
        const double yb = simulate_bridge(v, sd, g, RandomStream{34, j}).values[mid][0];
        b_sum += yb;
        b_sq += yb * yb;
    }
    const double ma = a_sum / n, mb = b_sum / n;
    const double va = a_sq / n - ma * ma, vb = b_sq / n - mb * mb;
    const double se_mean = std::sqrt((va + vb) / n);
    CHECK(std::abs(ma - mb) < 4.0 * se_mean);
    CHECK(va == doctest::Approx(vb).epsilon(0.2));
}

TEST_CASE("corrector with zero steps equals the plain predictor") {
    auto sc = scenarios::binary_symmetric();
    ScoreModel model{sc, Schedule{1.0, 1.0}};
    auto g = make_grid(1.0, 100, 1e-3);
    RandomStream s{41, 0};
    SamplerConfig c0;
    c0.corrector_steps = 0;
    auto a = sample_backward(model, g, s, c0);
    auto b = simulate_backward(model, g, s);
    CHECK(a.values == b.values);
}

TEST_CASE("corrector steps keep terminal frequencies near the prior") {
    auto sc = scenarios::binary_symmetric();
    ScoreModel model{sc, Schedule{1.0, 1.0}};
    auto g = make_grid(1.0, 300, 1e-3);
    SamplerConfig cfg;
    cfg.corrector_steps = 2;
    const std::size_t n = 500;
    std::vector<SamplePath> paths;
    for (std::size_t j = 0; j < n; ++j)
        paths.push_back(sample_backward(model, g, RandomStream{42, j}, cfg));
    auto hits = terminal_hitting_report(paths, sc);
    std::size_t plus = 0;
    for (const auto& h : hits)
        if (h.component == 0) ++plus;
    CHECK(std::abs(static_cast<double>(plus) / n - 0.5) < 4.0 * std::sqrt(0.25 / n));
}

TEST_CASE("terminal hitting ties resolve to the lowest index") {
    auto sc = scenarios::binary_symmetric();
    SamplePath p;
    p.grid = make_grid(1.0, 1, 0.5);
    p.dim = 1;
    p.values = {{0.0}, {0.0}};  // exactly between -1 and +1
    auto hits = terminal_hitting_report({p}, sc);
    CHECK(hits[0].component == 0);
    CHECK(hits[0].distance == doctest::Approx(1.0));
}

TEST_CASE("generative runs replay bit-exactly from the same stream") {
    auto sc = scenarios::three_component();
    Schedule sd{1.0, 1.0};
    auto obs = ObservationModel::linear_bridge(sd, 1);
    auto g = make_grid(1.0, 200, 1e-3);
    auto a = simulate_joint_system(sc, obs, g, RandomStream{50, 6});
    auto b = simulate_joint_system(sc, obs, g, RandomStream{50, 6});
    CHECK(a.y_path.values == b.y_path.values);
    CHECK(a.pi_path.pi == b.pi_path.pi);

    ScoreModel model{sc, sd};
    auto c = simulate_backward(model, g, RandomStream{50, 7});
    auto d = simulate_backward(model, g, RandomStream{50, 7});
    CHECK(c.values == d.values);
    auto e = simulate_backward(model, g, RandomStream{50, 8});
    CHECK(c.values != e.values);
}
