#pragma once

#include <span>
#include <vector>

#include "semimg/image.hpp"

namespace semimg {

// Quantized scalar centroids plus per-point nearest assignment.
// Centroids stay sorted ascending so downstream level-set seeding is
// deterministic.
struct ClusterModel {
    std::vector<double> centroids;
    std::vector<int> assignment;
};

// Odd-diameter circular neighborhood; membership is Euclidean distance
// <= (diameter-1)/2 from the center.
struct CircularWindow {
    int diameter = 9;
    int radius() const { return (diameter - 1) / 2; }
};

// Weighted quantization distortion: sum_i w(i) * (x(i) - c_nearest)^2.
double distortion(std::span<const double> points,
                  std::span<const double> centroids,
                  std::span<const double> weights = {});

// One Lloyd iteration: reassign to nearest centroid (ties -> lowest index),
// replace each centroid by the weighted mean of its members. Empty clusters
// keep their previous centroid.
ClusterModel lloyd_step(std::span<const double> points,
                        const ClusterModel& model,
                        std::span<const double> weights = {});

// Incremental global k-means over one image channel. Candidate seeds are
// weighted means of circular windows placed on a stride grid
// (stride = radius); each candidate is refined locally inside its window,
// scored by full-image distortion, and the winner is polished with full
// Lloyd iterations. If the channel has <= n distinct values those values
// are returned directly.
ClusterModel global_kmeans(const Image& channel, int n, CircularWindow window,
                           std::span<const double> weights = {});

// Nearest-centroid label map; ties -> lowest index.
std::vector<int> quantize(std::span<const double> points,
                          std::span<const double> centroids);

} // namespace semimg
