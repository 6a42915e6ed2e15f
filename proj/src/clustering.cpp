#include "semimg/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace semimg {

namespace {

double weight_at(std::span<const double> weights, std::size_t i) {
    return weights.empty() ? 1.0 : weights[i];
}

int nearest(double x, std::span<const double> centroids) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < centroids.size(); ++n) {
        const double d = (x - centroids[n]) * (x - centroids[n]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(n);
        }
    }
    return best;
}

constexpr int kMaxLloydSteps = 20;
constexpr double kLloydRelTol = 1e-6;

} // namespace

double distortion(std::span<const double> points,
                  std::span<const double> centroids,
                  std::span<const double> weights) {
    if (points.empty())
        throw Error(ErrorKind::EmptyInput, "distortion: empty point set");
    double theta = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (double c : centroids)
            best = std::min(best, (points[i] - c) * (points[i] - c));
        theta += weight_at(weights, i) * best;
    }
    return theta;
}

ClusterModel lloyd_step(std::span<const double> points,
                        const ClusterModel& model,
                        std::span<const double> weights) {
    if (points.empty())
        throw Error(ErrorKind::EmptyInput, "lloyd_step: empty point set");
    ClusterModel out;
    out.centroids = model.centroids;
    out.assignment.resize(points.size());
    std::vector<double> wsum(model.centroids.size(), 0.0);
    std::vector<double> wxsum(model.centroids.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const int n = nearest(points[i], model.centroids);
        out.assignment[i] = n;
        const double w = weight_at(weights, i);
        wsum[n] += w;
        wxsum[n] += w * points[i];
    }
    for (std::size_t n = 0; n < out.centroids.size(); ++n)
        if (wsum[n] > 0.0)
            out.centroids[n] = wxsum[n] / wsum[n];
    return out;
}

std::vector<int> quantize(std::span<const double> points,
                          std::span<const double> centroids) {
    std::vector<int> labels(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        labels[i] = nearest(points[i], centroids);
    return labels;
}

namespace {

struct Candidate {
    int cy, cx;
};

// Refine a seed value inside one circular window: pixels strictly closer to
// the seed than to the existing model are its members, the seed moves to
// their weighted mean.
double refine_in_window(const Image& channel, std::span<const double> weights,
                        const std::vector<double>& d_prev, Candidate cand,
                        int radius, double seed) {
    const int h = channel.height, w = channel.width;
    const int r2 = radius * radius;
    std::vector<std::size_t> member_pool;
    for (int dy = -radius; dy <= radius; ++dy) {
        const int y = cand.cy + dy;
        if (y < 0 || y >= h) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
            const int x = cand.cx + dx;
            if (x < 0 || x >= w) continue;
            if (dy * dy + dx * dx > r2) continue;
            member_pool.push_back(static_cast<std::size_t>(y) * w + x);
        }
    }
    double prev_theta = std::numeric_limits<double>::infinity();
    for (int step = 0; step < kMaxLloydSteps; ++step) {
        double wsum = 0.0, wxsum = 0.0, theta = 0.0;
        for (std::size_t i : member_pool) {
            const double x = channel.data[i];
            const double d = (x - seed) * (x - seed);
            const double wgt = weight_at(weights, i);
            if (d < d_prev[i]) {
                wsum += wgt;
                wxsum += wgt * x;
                theta += wgt * d;
            } else {
                theta += wgt * d_prev[i];
            }
        }
        if (wsum <= 0.0) break;
        seed = wxsum / wsum;
        if (prev_theta < std::numeric_limits<double>::infinity() &&
            std::abs(prev_theta - theta) <= kLloydRelTol * std::max(prev_theta, 1e-300))
            break;
        prev_theta = theta;
    }
    return seed;
}

} // namespace

ClusterModel global_kmeans(const Image& channel, int n, CircularWindow window,
                           std::span<const double> weights) {
    if (channel.data.empty())
        throw Error(ErrorKind::EmptyInput, "global_kmeans: empty image");
    if (n < 1)
        throw Error(ErrorKind::EmptyInput, "global_kmeans: n must be >= 1");
    const auto& pts = channel.data;

    // Degenerate input: fewer distinct values than requested clusters.
    std::set<double> distinct(pts.begin(), pts.end());
    if (static_cast<int>(distinct.size()) <= n) {
        ClusterModel model;
        model.centroids.assign(distinct.begin(), distinct.end());
        model.assignment = quantize(pts, model.centroids);
        return model;
    }

    const int h = channel.height, w = channel.width;
    const int radius = std::max(1, window.radius());

    ClusterModel model;
    {
        double wsum = 0.0, wxsum = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double wgt = weight_at(weights, i);
            wsum += wgt;
            wxsum += wgt * pts[i];
        }
        model.centroids = {wxsum / wsum};
    }

    std::vector<Candidate> candidates;
    for (int cy = 0; cy < h; cy += radius)
        for (int cx = 0; cx < w; cx += radius)
            candidates.push_back({cy, cx});

    std::vector<double> d_prev(pts.size());
    for (int k = 2; k <= n; ++k) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (double c : model.centroids)
                best = std::min(best, (pts[i] - c) * (pts[i] - c));
            d_prev[i] = best;
        }
        double best_theta = std::numeric_limits<double>::infinity();
        double best_seed = 0.0;
        for (const auto& cand : candidates) {
            double seed_wsum = 0.0, seed_wxsum = 0.0;
            const int r2 = radius * radius;
            for (int dy = -radius; dy <= radius; ++dy) {
                const int y = cand.cy + dy;
                if (y < 0 || y >= h) continue;
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int x = cand.cx + dx;
                    if (x < 0 || x >= w) continue;
                    if (dy * dy + dx * dx > r2) continue;
                    const std::size_t i = static_cast<std::size_t>(y) * w + x;
                    const double wgt = weight_at(weights, i);
                    seed_wsum += wgt;
                    seed_wxsum += wgt * pts[i];
                }
            }
            if (seed_wsum <= 0.0) continue;
            double seed = seed_wxsum / seed_wsum;
            seed = refine_in_window(channel, weights, d_prev, cand, radius, seed);
            double theta = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double d = (pts[i] - seed) * (pts[i] - seed);
                theta += weight_at(weights, i) * std::min(d, d_prev[i]);
            }
            if (theta < best_theta) {
                best_theta = theta;
                best_seed = seed;
            }
        }
        model.centroids.push_back(best_seed);

        // Full-image polish of the enlarged model.
        double prev_theta = distortion(pts, model.centroids, weights);
        for (int step = 0; step < kMaxLloydSteps; ++step) {
            model = lloyd_step(pts, model, weights);
            const double theta = distortion(pts, model.centroids, weights);
            if (std::abs(prev_theta - theta) <= kLloydRelTol * std::max(prev_theta, 1e-300))
                break;
            prev_theta = theta;
        }
    }

    std::sort(model.centroids.begin(), model.centroids.end());
    model.assignment = quantize(pts, model.centroids);
    return model;
}

} // namespace semimg
