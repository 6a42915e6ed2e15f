#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "semimg/image.hpp"

namespace semimg {

// Multiphase piecewise-constant segmentation state for one channel:
// m signed level-set grids whose sign patterns encode n = 2^m regions,
// plus the region means.
struct LevelSetState {
    int height = 0;
    int width = 0;
    int m = 1;                      // number of level-set functions
    std::vector<Image> phi;         // m single-channel grids
    std::vector<double> means;      // 2^m region means
    double epsilon = 1.0;           // Heaviside smoothing width
    double nu = 0.01;               // length-penalty weight

    int num_regions() const { return 1 << m; }
};

// Smoothed Heaviside H_eps(x) = 1/2 (1 + (2/pi) atan(x/eps)) and its
// derivative.
inline double heaviside(double phi, double epsilon) {
    return 0.5 * (1.0 + (2.0 / std::numbers::pi) * std::atan(phi / epsilon));
}
inline double dirac(double phi, double epsilon) {
    return (1.0 / std::numbers::pi) * epsilon / (epsilon * epsilon + phi * phi);
}

// Smoothed indicator of region k (0-based): product over level sets j of
// H(phi_j) where bit j of k is 1, else (1 - H(phi_j)).
Image region_indicator(const LevelSetState& state, int region_index);

// Piecewise-constant Mumford-Shah energy: data term plus nu * total
// variation of the smoothed Heavisides (central differences, pixel sums).
double energy(const Image& channel, const LevelSetState& state);

// Exact minimizer of the data term in the means: weighted average of the
// image under each region indicator. Zero-mass regions keep their mean.
std::vector<double> update_means(const Image& channel, const LevelSetState& state);

// `iterations` gradient-descent steps on the level sets with the
// residual-normalized step size; means are refreshed every iteration and
// each step is energy-guarded (halved until non-increasing).
LevelSetState evolve(const Image& channel, LevelSetState state, int iterations);

// Seeds phi from a label map: phi_j is the signed chamfer distance to the
// boundary of bit plane j of the labels, clipped to [-3, 3].
LevelSetState init_from_labels(const std::vector<int>& labels, int height, int width,
                               int m, std::vector<double> means,
                               double epsilon, double nu);

} // namespace semimg
