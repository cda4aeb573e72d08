#include "lab/time_grid.hpp"

#include <stdexcept>

namespace lab {

TimeGrid make_grid(double T, std::size_t M, double epsilon, GridSpacing spacing) {
    if (!(T > 0.0)) throw std::invalid_argument("make_grid: T must be positive");
    if (M < 1) throw std::invalid_argument("make_grid: step count must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("make_grid: epsilon must be positive");
    if (!(epsilon < T)) throw std::invalid_argument("make_grid: epsilon must be < T");

    TimeGrid g;
    g.T = T;
    g.epsilon = epsilon;
    g.spacing = spacing;
    const double end = T - epsilon;
    g.t_points.resize(M + 1);

    if (spacing == GridSpacing::uniform || M < 4) {
        for (std::size_t i = 0; i <= M; ++i)
            g.t_points[i] = end * static_cast<double>(i) / static_cast<double>(M);
    } else {
        // Half the steps on [0, 0.9*end], half on the last decade.
        const std::size_t m1 = M / 2;
        const std::size_t m2 = M - m1;
        const double split = 0.9 * end;
        for (std::size_t i = 0; i <= m1; ++i)
            g.t_points[i] = split * static_cast<double>(i) / static_cast<double>(m1);
        for (std::size_t i = 1; i <= m2; ++i)
            g.t_points[m1 + i] = split + (end - split) * static_cast<double>(i) / static_cast<double>(m2);
    }
    g.t_points.front() = 0.0;
    g.t_points.back() = end;

    for (std::size_t i = 0; i + 1 <= M; ++i)
        if (!(g.t_points[i + 1] > g.t_points[i]))
            throw std::invalid_argument("make_grid: degenerate zero-length step");
    return g;
}

}  // namespace lab
