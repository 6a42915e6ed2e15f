#pragma once

#include <vector>

#include "semimg/image.hpp"

namespace semimg {

// Binary foreground mask produced by threshold-then-open.
struct SilhouetteMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> mask; // 0 = background, 1 = foreground
    int open_radius = 1;
};

// Per-pixel, per-channel temporal median; even T takes the lower of the two
// central order statistics.
Frame estimate_background(const FrameSequence& frames);

// Foreground where the channel-max absolute difference from the background
// exceeds `threshold`, then binary opening (erosion followed by dilation)
// with a disk of the given radius.
SilhouetteMask silhouette(const Frame& frame, const Frame& background,
                          double threshold, int open_radius);

// Alpha-blends the static background into the non-silhouette area of every
// frame after the first: out = mask*seg + (1-mask)*(alpha*bg + (1-alpha)*seg).
FrameSequence overlay(const FrameSequence& segmented, const Frame& background,
                      const std::vector<SilhouetteMask>& masks, double alpha);

} // namespace semimg
