#include "lab/sde.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace lab {

std::vector<Vec> sample_brownian_increments(const TimeGrid& grid, std::size_t dim,
                                            const RandomStream& stream) {
    if (dim == 0) throw std::invalid_argument("sample_brownian_increments: dim must be >= 1");
    auto eng = stream.engine();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec> incr(grid.n_steps(), Vec(dim));
    for (std::size_t i = 0; i < incr.size(); ++i) {
        const double sd = std::sqrt(grid.dt(i));
        for (std::size_t d = 0; d < dim; ++d) incr[i][d] = sd * gauss(eng);
    }
    return incr;
}

SamplePath euler_maruyama(const Drift& drift, const Vec& x0, const TimeGrid& grid,
                          const std::vector<Vec>& increments) {
    if (increments.size() != grid.n_steps())
        throw std::invalid_argument("euler_maruyama: increment count does not match grid");
    SamplePath path;
    path.grid = grid;
    path.dim = x0.size();
    path.values.resize(grid.n_points());
    path.values[0] = x0;
    Vec x = x0;
    for (std::size_t i = 0; i < grid.n_steps(); ++i) {
        const double t = grid.t_points[i];
        const double dt = grid.dt(i);
        Vec b = drift(x, t);
        if (!all_finite(b))
            throw std::runtime_error("euler_maruyama: non-finite drift at t=" + std::to_string(t));
        for (std::size_t d = 0; d < x.size(); ++d) x[d] += b[d] * dt + increments[i][d];
        path.values[i + 1] = x;
    }
    return path;
}

void parallel_for_index(std::size_t n, unsigned threads,
                        const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned k = std::min<unsigned>(threads, std::thread::hardware_concurrency());
    if (k == 0) k = threads;
    for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace lab
