#pragma once

#include <functional>

#include "lab/schedule.hpp"
#include "lab/vec.hpp"

namespace lab {

// Observation function H(y, x, t) with x represented by its rendering v.
// linear_bridge: H = m(t) v - f(t) y (pins Y_T = V); static_obs: H = v.
struct ObservationModel {
    enum class Kind { linear_bridge, static_obs, custom };

    Kind kind = Kind::static_obs;
    Schedule sched;
    std::size_t dim = 1;
    std::function<Vec(const Vec& y, const Vec& v, double t)> custom_h;

    Vec h(const Vec& y, const Vec& v, double t) const;

    // Log-likelihood (up to an additive constant shared across components)
    // of the initial observation Y_0 given rendering v. Under the bridge
    // schedule Y_0 follows the noising law at reversed time T, so it carries
    // information about X that the filters must fold into their prior; for
    // static observations Y_0 is uninformative and this is 0.
    double y0_loglik(const Vec& y0, const Vec& v) const;

    static ObservationModel linear_bridge(const Schedule& s, std::size_t dim);
    static ObservationModel static_observation(std::size_t dim);
    static ObservationModel make_custom(std::function<Vec(const Vec&, const Vec&, double)> h,
                                        std::size_t dim);
};

}  // namespace lab
