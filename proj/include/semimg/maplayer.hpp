#pragma once

#include <cstdint>
#include <vector>

#include "semimg/rankpool.hpp"

namespace semimg {

// Temporal stack of feature maps, T-major then C, H, W.
struct FeatureMapStack {
    int t_count = 0;
    int c = 0, h = 0, w = 0;
    std::vector<double> data;

    FeatureMapStack() = default;
    FeatureMapStack(int t, int c_, int h_, int w_)
        : t_count(t), c(c_), h(h_), w(w_),
          data(static_cast<std::size_t>(t) * c_ * h_ * w_, 0.0) {}

    std::size_t map_size() const {
        return static_cast<std::size_t>(c) * h * w;
    }
};

// Rank pooling across the temporal axis: out = sum_t alpha_t * stack_t.
std::vector<double> maplayer_forward(const FeatureMapStack& stack,
                                     const RankCoefficients& coeffs);

// Backward pass with the coefficients treated as constants:
// grad_t = alpha_t * upstream.
FeatureMapStack maplayer_backward(const std::vector<double>& upstream,
                                  int c, int h, int w,
                                  const RankCoefficients& coeffs);

// Central-finite-difference check of the backward pass against the loss
// <g, forward(stack)> on `probe_count` random stack entries. Returns the
// maximum relative error over probes.
double grad_check(const FeatureMapStack& stack, const RankCoefficients& coeffs,
                  int probe_count, double step, std::uint64_t seed = 0xC0FFEE);

} // namespace semimg
