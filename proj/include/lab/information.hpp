#pragma once

#include <cstddef>
#include <vector>

#include "lab/filter.hpp"
#include "lab/observation.hpp"
#include "lab/scenario.hpp"
#include "lab/score_model.hpp"
#include "lab/sde.hpp"

namespace lab {

// The statistic whose information content is measured: either a named label
// attribute of the scenario, or the full latent (phi = X, equivalently V).
struct PhiSpec {
    enum class Kind { attribute, full_latent };
    Kind kind = Kind::full_latent;
    std::size_t attr = 0;

    static PhiSpec attribute(std::size_t j) { return {Kind::attribute, j}; }
    static PhiSpec full() { return {Kind::full_latent, 0}; }
};

struct MIEstimate {
    double value = 0.0;      // accumulated integral term, nats
    double std_error = 0.0;  // MC standard error of the path totals
    std::vector<double> times;          // grid points
    std::vector<double> integrand;      // per-step mean squared prediction gap
    std::vector<double> cumulative;     // running integral term per grid point
    std::vector<double> cumulative_se;
    double i0 = 0.0;          // I(Y_0; phi)
    bool i0_omitted = false;  // true when dim > 2 and i0 was not computed
    bool divergence_warning = false;  // integrand blowing up near the cutoff

    double total() const { return value + (i0_omitted ? 0.0 : i0); }
};

// Filtration-gap estimator: 1/2 E int |E[H|F^Y] - E[H|R]|^2 ds along paths
// simulated under the joint law, with common random numbers shared by the
// two filters. Mixture scenarios use the exact discrete filter; the Gaussian
// latent with a static observation uses the Kalman-Bucy closed form.
MIEstimate mi_general(const LatentScenario& scenario, const ObservationModel& obs,
                      const TimeGrid& grid, const PhiSpec& phi, std::size_t n_paths,
                      const RandomStream& stream, unsigned threads = 1);

// Linear-diffusion specialization:
// 1/2 E int m(s)^2 |E[V|Y_s] - E[V|Y_s, phi]|^2 ds along pathwise bridge
// simulations with the sampled latent held fixed.
MIEstimate mi_linear(const ScoreModel& model, const TimeGrid& grid, const PhiSpec& phi,
                     std::size_t n_paths, const RandomStream& stream,
                     unsigned threads = 1);

enum class ScoreGapForm { marginal_vs_conditional, bridge_score };

// Score-form estimators for phi = V: either
// |grad log p(y,s) - grad log p(y,s | V)|^2 or |grad_y log p(V | y_s)|^2.
MIEstimate mi_score_gap(const ScoreModel& model, const TimeGrid& grid,
                        std::size_t n_paths, const RandomStream& stream,
                        ScoreGapForm form, unsigned threads = 1);

// Brute-force channel MI for Y = a V + N(0, s2) against the label phi,
// 1-D scenarios only, adaptive Simpson quadrature with abs tolerance 1e-4.
double mixture_channel_mi(const LatentScenario& scenario, const PhiSpec& phi, double a,
                          double s2);

// I(Y_t; phi) for a 1-D mixture at bridge time t (reversed time T - t sets
// the channel coefficients).
double mi_quadrature_oracle(const LatentScenario& scenario, const Schedule& sched,
                            double t, const PhiSpec& phi);

// I(Y_0; phi), or flags omission for dim > 2.
void initial_mi(const LatentScenario& scenario, const ObservationModel& obs,
                const PhiSpec& phi, double& i0, bool& omitted);

struct DpiPoint {
    double t = 0.0;
    double i_full = 0.0, i_full_se = 0.0;  // I(Y_{0:t}; phi), incl. i0
    double i_pi = 0.0, i_pi_se = 0.0;      // plug-in I(pi_t; phi)
    double i_proj = 0.0, i_proj_se = 0.0;  // plug-in I(<pi_t, H>; phi)
};

struct DpiReport {
    std::vector<DpiPoint> points;
    double i0 = 0.0;
    bool i0_omitted = false;
};

// Sufficient-statistic / data-processing battery on small mixtures: the
// filter output pi_t and its projection <pi_t, H> are quantized on a fixed
// per-coordinate grid and plug-in discrete MI against the label is compared
// with the filtration-gap estimate. Bootstrap standard errors.
DpiReport dpi_check(const LatentScenario& scenario, const ObservationModel& obs,
                    const TimeGrid& grid, const PhiSpec& phi, std::size_t n_paths,
                    const RandomStream& stream, const std::vector<double>& eval_times,
                    std::size_t bins = 20, unsigned threads = 1);

}  // namespace lab
