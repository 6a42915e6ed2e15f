#pragma once

#include <span>
#include <vector>

#include "semimg/image.hpp"

namespace semimg {

// Exact 1D Potts minimizer of sum (u_i - f_i)^2 + gamma * (#jumps).
// Vector-valued: `values` holds length*channels samples, channel-interleaved;
// residuals are summed over channels.
struct PottsSolution1D {
    std::vector<double> values;
    int channels = 1;
    int jumps = 0;
    double objective = 0.0;
    std::vector<int> boundaries; // indices i where a jump occurs between i-1 and i
};

PottsSolution1D potts_1d(std::span<const double> signal, int channels, double gamma);

// 2D piecewise-constant approximation by alternating row/column 1D solves
// coupled with a penalty whose weight starts at gamma/4 and doubles each
// sweep; channels are coupled through summed squared residuals.
struct PottsSolution {
    Image values;
    int jumps = 0;      // row + column jump count of the final estimate
    double gamma = 0.0;
};

PottsSolution potts_2d(const Image& image, double gamma, int sweeps);

} // namespace semimg
