#pragma once

#include <cstddef>
#include <vector>

#include "lab/filter.hpp"
#include "lab/observation.hpp"
#include "lab/scenario.hpp"
#include "lab/score_model.hpp"
#include "lab/sde.hpp"

namespace lab {

struct JointTrajectory {
    SamplePath y_path;
    SimplexTrajectory pi_path;
    RandomStream seed;  // stream that produced this trajectory
};

struct SamplerConfig {
    std::size_t corrector_steps = 0;  // Langevin steps per predictor step
    double snr = 0.06;                // corrector signal-to-noise ratio
};

// Coupled filter/measurement simulation: the drift is the posterior-averaged
// observation <pi, H>, the posterior is advanced by kushner_step with the
// same-step increment, and the latent X is never touched.
JointTrajectory simulate_joint_system(const LatentScenario& scenario,
                                      const ObservationModel& obs, const TimeGrid& grid,
                                      const RandomStream& stream);

// Pinned-path simulation with known terminal value v. When y0 is null the
// start point is drawn from the noising marginal at reversed time T.
SamplePath simulate_bridge(const Vec& v, const Schedule& sched, const TimeGrid& grid,
                           const RandomStream& stream, const Vec* y0 = nullptr);

// Backward sampling from the exact score model, optionally refined by
// Langevin corrector steps with step size 2 (snr |z| / |score|)^2.
SamplePath sample_backward(const ScoreModel& model, const TimeGrid& grid,
                           const RandomStream& stream, const SamplerConfig& config = {});

inline SamplePath simulate_backward(const ScoreModel& model, const TimeGrid& grid,
                                    const RandomStream& stream) {
    return sample_backward(model, grid, stream, SamplerConfig{});
}

struct TerminalHit {
    std::size_t component;  // nearest rendering, lowest index on ties
    double distance;
};

std::vector<TerminalHit> terminal_hitting_report(const std::vector<SamplePath>& paths,
                                                 const LatentScenario& scenario);

}  // namespace lab
