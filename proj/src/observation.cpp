#include "lab/observation.hpp"

#include <stdexcept>

namespace lab {

Vec ObservationModel::h(const Vec& y, const Vec& v, double t) const {
    switch (kind) {
        case Kind::linear_bridge:
            return bridge_drift(y, v, t, sched);
        case Kind::static_obs:
            return v;
        case Kind::custom:
            return custom_h(y, v, t);
    }
    throw std::logic_error("ObservationModel::h: bad kind");
}

double ObservationModel::y0_loglik(const Vec& y0, const Vec& v) const {
    if (kind != Kind::linear_bridge) return 0.0;
    const GaussMoments m = forward_marginal(v, sched.T, sched.alpha);
    return -0.5 * dist2(y0, m.mean) / m.var;
}

ObservationModel ObservationModel::linear_bridge(const Schedule& s, std::size_t dim) {
    ObservationModel m;
    m.kind = Kind::linear_bridge;
    m.sched = s;
    m.dim = dim;
    return m;
}

ObservationModel ObservationModel::static_observation(std::size_t dim) {
    ObservationModel m;
    m.kind = Kind::static_obs;
    m.dim = dim;
    return m;
}

ObservationModel ObservationModel::make_custom(
    std::function<Vec(const Vec&, const Vec&, double)> h, std::size_t dim) {
    ObservationModel m;
    m.kind = Kind::custom;
    m.custom_h = std::move(h);
    m.dim = dim;
    return m;
}

}  // namespace lab
