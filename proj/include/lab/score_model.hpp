#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "lab/scenario.hpp"
#include "lab/schedule.hpp"
#include "lab/vec.hpp"

namespace lab {

// Exact posterior quantities for the linear-bridge family. At bridge time t
// the observable has component-conditional law N(a v_k, s^2 I) with
// a = exp(-alpha (T-t)) and s^2 the noising variance at reversed time T-t.
// All responsibilities are computed in the log domain with max-subtraction.
struct ScoreModel {
    LatentScenario scenario;
    Schedule sched;

    // Mixture posterior P[X = k | Y_t = y]; optional support restriction
    // (conditioning on a label zeroes the inconsistent components).
    Vec responsibilities(const Vec& y, double t,
                         const std::vector<std::size_t>* support = nullptr) const;

    Vec posterior_mean(const Vec& y, double t) const;
    Vec posterior_mean_given(const Vec& y, double t, std::size_t attr, int label) const;

    Vec score(const Vec& y, double t) const;
    Vec score_given(const Vec& y, double t, std::size_t attr, int label) const;
    // Score of the law conditioned on the terminal value V = v.
    Vec score_given_value(const Vec& y, double t, const Vec& v) const;
    // Gradient in y of log P(V = v | Y_t = y) (log p(v|y) density for the
    // Gaussian latent); the bridge-score form of the MI integrand.
    Vec bridge_score(const Vec& y, double t, const Vec& v) const;

    double log_density(const Vec& y, double t,
                       const std::vector<std::size_t>* support = nullptr) const;

    // Backward-SDE drift in the score form
    //   alpha y + 2 alpha (a E[V|y] - y) / (1 - a^2);
    // defined for alpha > 0 only.
    Vec backward_drift_score_form(const Vec& y, double t) const;
    // Same drift in the filtered form m(t) E[V|y] - f(t) y (all alpha).
    Vec generative_drift(const Vec& y, double t) const;
    Vec generative_drift_given(const Vec& y, double t, std::size_t attr, int label) const;

    // Posterior argmax over components; ties resolved to the lowest index.
    std::size_t classify(const Vec& y, double t, bool* tie = nullptr) const;

    // Draw from the law of Y_0 (the noising marginal at reversed time T).
    Vec sample_y0(std::mt19937_64& eng) const;

private:
    void channel(double t, double& a, double& s2) const;
};

}  // namespace lab
