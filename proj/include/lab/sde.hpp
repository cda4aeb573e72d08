#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lab/rng.hpp"
#include "lab/time_grid.hpp"
#include "lab/vec.hpp"

namespace lab {

struct SamplePath {
    TimeGrid grid;
    std::vector<Vec> values;  // one R^N vector per grid point
    std::size_t dim = 1;

    const Vec& terminal() const { return values.back(); }
};

// One zero-mean Gaussian increment per grid step, component variance dt_i.
std::vector<Vec> sample_brownian_increments(const TimeGrid& grid, std::size_t dim,
                                            const RandomStream& stream);

using Drift = std::function<Vec(const Vec& state, double t)>;

// Left-endpoint (Ito) Euler scheme: x_{i+1} = x_i + drift(x_i, t_i) dt_i + dW_i.
// Every stochastic integral in this codebase uses the same left-point
// convention; the Girsanov and Kushner discretizations rely on it.
SamplePath euler_maruyama(const Drift& drift, const Vec& x0, const TimeGrid& grid,
                          const std::vector<Vec>& increments);

// Index-ordered parallel map over [0, n): fn(i) runs on some worker but
// results are reduced by the caller in index order, so the output is
// independent of the thread count.
void parallel_for_index(std::size_t n, unsigned threads,
                        const std::function<void(std::size_t)>& fn);

}  // namespace lab
