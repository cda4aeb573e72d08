#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lab/observation.hpp"
#include "lab/scenario.hpp"
#include "lab/sde.hpp"
#include "lab/vec.hpp"

namespace lab {

// Which filtration the filter runs on: measurements only, measurements plus
// one label value, or measurements plus the full latent component.
struct ConditioningSpec {
    enum class Kind { measurements_only, with_label, full_latent };

    Kind kind = Kind::measurements_only;
    std::size_t attr = 0;
    int label = 0;
    std::size_t component = 0;

    static ConditioningSpec measurements() { return {}; }
    static ConditioningSpec plus_label(std::size_t attr, int label) {
        ConditioningSpec c;
        c.kind = Kind::with_label;
        c.attr = attr;
        c.label = label;
        return c;
    }
    static ConditioningSpec full_latent(std::size_t component) {
        ConditioningSpec c;
        c.kind = Kind::full_latent;
        c.component = component;
        return c;
    }
};

struct FilterCollapse : std::runtime_error {
    double time;
    explicit FilterCollapse(double t, const std::string& what)
        : std::runtime_error(what), time(t) {}
};

struct SimplexTrajectory {
    TimeGrid grid;
    std::vector<Vec> pi;  // one simplex vector per grid point
    std::size_t clip_events = 0;
};

// Cumulative log psi_t at every grid point (left-point Ito sums):
// log psi_t = sum_{i<t} H_i . dY_i - 1/2 sum_{i<t} |H_i|^2 dt_i.
std::vector<double> girsanov_logweights(const SamplePath& path,
                                        const std::vector<Vec>& h_steps);

// Kallianpur-Striebel / Zakai filter: pi_t(k) proportional to
// prior_k exp(log psi_t^(k)), with the prior restricted by the conditioning
// and reweighted by the Y_0 likelihood when the observation model makes Y_0
// informative.
SimplexTrajectory exact_discrete_filter(const SamplePath& path,
                                        const LatentScenario& scenario,
                                        const ObservationModel& obs,
                                        const ConditioningSpec& cond);

// One Euler step of the finite-state a-posteriori SDE; negatives are clipped
// to zero and the simplex renormalized, with clips counted in *clip_events.
Vec kushner_step(const Vec& pi, const std::vector<Vec>& h_per_component, const Vec& dY,
                 double dt, std::size_t* clip_events = nullptr);

// Iterated kushner_step along a path, initialized like exact_discrete_filter.
SimplexTrajectory kushner_filter(const SamplePath& path, const LatentScenario& scenario,
                                 const ObservationModel& obs, const ConditioningSpec& cond);

// Draws a latent: rendering vector plus mixture component (-1 if continuous).
using LatentSampler = std::function<std::pair<Vec, int>(std::mt19937_64&)>;

struct ParticleSummary {
    Vec mean;            // weighted mean rendering
    double var = 0.0;    // average per-coordinate weighted variance
    double ess = 0.0;
    Vec comp_prob;       // per-component mass, when particles carry components
};

struct ParticleTrajectory {
    TimeGrid grid;
    std::vector<ParticleSummary> states;
    std::size_t resample_events = 0;
};

// Weighted-sample filter with Zakai log-weight increments
// H(y, x_i, t) . dY - 1/2 |H(y, x_i, t)|^2 dt and systematic resampling
// when ESS < n/2. Throws FilterCollapse when ESS drops below 2.
ParticleTrajectory particle_filter(const SamplePath& path, const LatentSampler& prior,
                                   const ObservationModel& obs, std::size_t n_particles,
                                   const RandomStream& stream, bool resample = true);

struct KalmanTrajectory {
    TimeGrid grid;
    std::vector<double> mean;
    std::vector<double> var;
};

// Closed-form linear-Gaussian oracle for the static observation H = X:
// P_t = var0 / (1 + var0 t), gain recursion for the mean. Scalar paths.
KalmanTrajectory kalman_bucy(const SamplePath& path, double mean0, double var0);

struct InnovationPath {
    TimeGrid grid;
    std::vector<Vec> increments;
};

// dW_i = dY_i - <pi_i, H(Y_i, ., t_i)> dt_i.
InnovationPath extract_innovation(const SamplePath& path, const SimplexTrajectory& posterior,
                                  const LatentScenario& scenario,
                                  const ObservationModel& obs);

double posterior_project(const Vec& pi, const std::vector<double>& statistic);
Vec posterior_project(const Vec& pi, const std::vector<Vec>& statistic);

}  // namespace lab
