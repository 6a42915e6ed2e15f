// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is checked against an independent oracle or a
// closed-form property, with pinned tolerances.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "semimg/clustering.hpp"
#include "semimg/levelset.hpp"
#include "semimg/maplayer.hpp"
#include "semimg/rankpool.hpp"
#include "semimg/verify.hpp"

using namespace semimg;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool passed, double seconds,
            const std::string& detail) {
    std::printf("%s  %d. %-38s (%6.2f s)  %s\n", passed ? "PASS" : "FAIL", index,
                name, seconds, detail.c_str());
    if (!passed) ++g_failures;
}

template <typename Fn>
void criterion(int index, const char* name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    bool passed = false;
    std::string detail;
    try {
        passed = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(index, name, passed, seconds, detail);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

FrameSequence random_frames(int t, int h, int w, int ch, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    FrameSequence frames;
    for (int i = 0; i < t; ++i) {
        Frame f(h, w, ch);
        for (double& s : f.data) s = unif(rng);
        frames.push_back(std::move(f));
    }
    return frames;
}

// ---------------------------------------------------------------------------

bool coefficient_oracle(std::string& detail) {
    bool ok = true;
    for (const auto& r : verify_coeffs()) {
        ok = ok && r.passed;
        if (!detail.empty()) detail += "; ";
        detail += r.detail;
    }
    return ok;
}

bool pooling_algebra(std::string& detail) {
    std::mt19937_64 rng(20260826);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int t = 2 + static_cast<int>(rng() % 9);
        const auto frames = random_frames(t, 16, 16, 3, rng);
        const auto coeffs = coefficients(t, RankVariant::Linear);
        const auto base = pool(frames, coeffs);

        double scale = 1.0;
        for (double s : base.grid.data) scale = std::max(scale, std::abs(s));

        FrameSequence shifted = frames;
        for (auto& f : shifted)
            for (double& s : f.data) s += 0.713;
        const auto shifted_pool = pool(shifted, coeffs);

        FrameSequence reversed(frames.rbegin(), frames.rend());
        const auto reversed_pool = pool(reversed, coeffs);

        const auto other = random_frames(t, 16, 16, 3, rng);
        const auto other_pool = pool(other, coeffs);
        FrameSequence combo = frames;
        for (int k = 0; k < t; ++k)
            for (std::size_t i = 0; i < combo[k].data.size(); ++i)
                combo[k].data[i] = 1.25 * frames[k].data[i] - 2.0 * other[k].data[i];
        const auto combo_pool = pool(combo, coeffs);

        for (std::size_t i = 0; i < base.grid.data.size(); ++i) {
            worst = std::max(worst,
                             std::abs(shifted_pool.grid.data[i] - base.grid.data[i]) / scale);
            worst = std::max(worst,
                             std::abs(reversed_pool.grid.data[i] + base.grid.data[i]) / scale);
            const double expect =
                1.25 * base.grid.data[i] - 2.0 * other_pool.grid.data[i];
            worst = std::max(worst, std::abs(combo_pool.grid.data[i] - expect) /
                                        std::max(scale, std::abs(expect)));
        }
    }
    detail = "max relative deviation " + fmt(worst);
    return worst <= 1e-9;
}

bool layer_jacobian(std::string& detail) {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 4);
    std::uniform_int_distribution<int> tdim(2, 6);
    double max_grad_err = 0.0, max_adjoint = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        FeatureMapStack stack(tdim(rng), dim(rng), dim(rng), dim(rng));
        for (double& x : stack.data) x = unif(rng);
        const auto coeffs = coefficients(
            stack.t_count, trial % 2 ? RankVariant::Harmonic : RankVariant::Linear);
        max_grad_err = std::max(max_grad_err, grad_check(stack, coeffs, 8, 1e-5, 500 + trial));

        std::vector<double> g(stack.map_size());
        for (double& x : g) x = unif(rng);
        const auto fwd = maplayer_forward(stack, coeffs);
        const auto bwd = maplayer_backward(g, stack.c, stack.h, stack.w, coeffs);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) lhs += g[i] * fwd[i];
        for (std::size_t i = 0; i < stack.data.size(); ++i) rhs += bwd.data[i] * stack.data[i];
        max_adjoint = std::max(
            max_adjoint, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0}));
    }
    detail = "grad err " + fmt(max_grad_err) + ", adjoint err " + fmt(max_adjoint);
    return max_grad_err <= 1e-6 && max_adjoint <= 1e-12;
}

bool potts_exactness(std::string& detail) {
    bool ok = true;
    for (const auto& r : verify_potts()) {
        ok = ok && r.passed;
        detail = r.detail;
    }
    return ok;
}

bool descent_monotonicity(std::string& detail) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Lloyd distortion is non-increasing over 50 steps, 100 datasets.
    int lloyd_violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> points(64 + rng() % 192);
        for (double& x : points) x = unif(rng);
        ClusterModel model;
        const int k = 2 + static_cast<int>(rng() % 7);
        for (int i = 0; i < k; ++i) model.centroids.push_back(unif(rng));
        std::sort(model.centroids.begin(), model.centroids.end());
        model.assignment = quantize(points, model.centroids);
        double prev = distortion(points, model.centroids);
        for (int step = 0; step < 50; ++step) {
            model = lloyd_step(points, model);
            const double cur = distortion(points, model.centroids);
            if (cur > prev + 1e-12) ++lloyd_violations;
            prev = cur;
        }
    }

    // Level-set energy is non-increasing per evolve step within 1e-9.
    int energy_violations = 0;
    for (int seed = 0; seed < 20; ++seed) {
        std::mt19937_64 lrng(9000 + seed);
        Image channel(16, 16, 1);
        for (double& x : channel.data)
            x = std::uniform_real_distribution<double>(0.0, 1.0)(lrng);
        const std::vector<double> centroids = {0.25, 0.75};
        const auto labels = quantize(channel.data, centroids);
        LevelSetState state =
            init_from_labels(labels, 16, 16, 1, centroids, 1.0, 0.01);
        double prev = energy(channel, state);
        for (int step = 0; step < 10; ++step) {
            state = evolve(channel, std::move(state), 1);
            const double cur = energy(channel, state);
            if (cur > prev + 1e-9) ++energy_violations;
            prev = cur;
        }
    }

    // Two-region synthetic: recovered means within 2%.
    Image two(32, 32, 1);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
            two.at(y, x, 0) = x < 16 ? 0.25 : 0.75;
    // Sharp Heaviside: with a wide one the arctan tails leak mass across the
    // boundary and bias both region averages toward the middle.
    const std::vector<double> seeds = {0.3, 0.7};
    LevelSetState state = init_from_labels(quantize(two.data, seeds), 32, 32, 1,
                                           seeds, 0.05, 0.01);
    state = evolve(two, std::move(state), 5);
    const double lo = std::min(state.means[0], state.means[1]);
    const double hi = std::max(state.means[0], state.means[1]);
    const bool means_ok =
        std::abs(lo - 0.25) <= 0.02 * 0.25 && std::abs(hi - 0.75) <= 0.02 * 0.75;

    detail = std::to_string(lloyd_violations) + " Lloyd / " +
             std::to_string(energy_violations) + " energy violations, means " +
             fmt(lo) + "/" + fmt(hi);
    return lloyd_violations == 0 && energy_violations == 0 && means_ok;
}

bool median_oracle(std::string& detail) {
    bool ok = true;
    for (const auto& r : verify_median()) {
        ok = ok && r.passed;
        detail = r.detail;
    }
    return ok;
}

bool windowing(std::string& detail) {
    const auto ranges = windows(100, {15, 9});
    bool ok = ranges.size() == 10;
    for (std::size_t i = 1; ok && i < ranges.size(); ++i)
        ok = ranges[i - 1].end - ranges[i].begin == 6;
    detail = std::to_string(ranges.size()) + " windows";
    return ok;
}

bool motion_localization(std::string& detail) {
    // 64x64, 30-frame video: an 8x8 bright square slides one pixel per frame
    // across a uniform background.
    const int size = 64, frames_n = 30, side = 8, row0 = 28;
    FrameSequence video;
    for (int t = 0; t < frames_n; ++t) {
        Frame f(size, size, 1, 0.3);
        for (int y = row0; y < row0 + side; ++y)
            for (int x = t; x < t + side; ++x)
                f.at(y, x, 0) = 0.9;
        video.push_back(std::move(f));
    }

    PipelineConfig cfg; // paper defaults, tau=15, stride=9
    const auto semis = multiple_semi(video, cfg, 2);
    const auto ranges = windows(video.size(), {cfg.tau, cfg.stride});
    if (semis.size() != ranges.size()) {
        detail = "window count mismatch";
        return false;
    }

    double worst_static = 0.0, worst_peak = 1e30;
    for (std::size_t w = 0; w < semis.size(); ++w) {
        // Coverage mask for this window.
        std::vector<std::uint8_t> covered(size * size, 0);
        for (std::size_t t = ranges[w].begin; t < ranges[w].end; ++t)
            for (int y = row0; y < row0 + side; ++y)
                for (int x = static_cast<int>(t); x < static_cast<int>(t) + side; ++x)
                    covered[y * size + x] = 1;
        double peak = 0.0;
        for (int p = 0; p < size * size; ++p) {
            const double v = std::abs(semis[w].grid.data[p]);
            if (covered[p]) peak = std::max(peak, v);
            else worst_static = std::max(worst_static, v);
        }
        worst_peak = std::min(worst_peak, peak);
    }

    const auto rerun = multiple_semi(video, cfg, 2);
    bool identical = rerun.size() == semis.size();
    for (std::size_t w = 0; identical && w < semis.size(); ++w)
        identical = std::memcmp(rerun[w].grid.data.data(), semis[w].grid.data.data(),
                                semis[w].grid.data.size() * sizeof(double)) == 0;

    detail = "static " + fmt(worst_static) + ", trail peak " + fmt(worst_peak) +
             (identical ? ", rerun identical" : ", RERUN DIFFERS");
    return worst_static <= 1e-4 && worst_peak > 0.01 && identical;
}

} // namespace

int main() {
    criterion(1, "coefficient oracle equivalence", coefficient_oracle);
    criterion(2, "rank-pooling algebra", pooling_algebra);
    criterion(3, "layer Jacobian and adjoint", layer_jacobian);
    criterion(4, "Potts exactness vs enumeration", potts_exactness);
    criterion(5, "clustering/level-set monotonicity", descent_monotonicity);
    criterion(6, "temporal median oracle", median_oracle);
    criterion(7, "clip windowing", windowing);
    criterion(8, "end-to-end motion localization", motion_localization);
    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all 8 criteria passed\n");
    return 0;
}
