#pragma once

#include <cstddef>
#include <vector>

namespace lab {

enum class GridSpacing { uniform, geometric_near_end };

// Discrete mesh on [0, T - epsilon]. The horizon T itself is never a grid
// point: bridge drifts are singular at T, so all dynamics stop at T - epsilon.
struct TimeGrid {
    std::vector<double> t_points;
    double T = 1.0;
    double epsilon = 1e-3;
    GridSpacing spacing = GridSpacing::uniform;

    std::size_t n_points() const { return t_points.size(); }
    std::size_t n_steps() const { return t_points.size() - 1; }
    double dt(std::size_t i) const { return t_points[i + 1] - t_points[i]; }
    double end() const { return t_points.back(); }
};

// M steps (M+1 points) covering [0, T-epsilon]. Uniform spacing gives
// dt = (T-epsilon)/M; the geometric option packs half of the steps into the
// last decade of the interval, where bridge drifts are largest.
TimeGrid make_grid(double T, std::size_t M, double epsilon,
                   GridSpacing spacing = GridSpacing::uniform);

}  // namespace lab
