#include "semimg/rankpool.hpp"

#include <algorithm>
#include <cmath>

#include "semimg/parallel.hpp"
#include "semimg/semantics.hpp"

namespace semimg {

RankCoefficients coefficients(int t_count, RankVariant variant) {
    if (t_count < 2)
        throw Error(ErrorKind::DegenerateWindow, "rank coefficients need T >= 2");
    RankCoefficients out;
    out.t_count = t_count;
    out.variant = variant;
    out.alpha.resize(t_count);
    if (variant == RankVariant::Linear) {
        for (int t = 1; t <= t_count; ++t)
            out.alpha[t - 1] = 2.0 * t - (t_count + 1);
    } else {
        // Harmonic numbers H_0..H_T with H_0 = 0.
        std::vector<double> harmonic(t_count + 1, 0.0);
        for (int k = 1; k <= t_count; ++k)
            harmonic[k] = harmonic[k - 1] + 1.0 / k;
        for (int t = 1; t <= t_count; ++t)
            out.alpha[t - 1] = 2.0 * (t_count - t + 1) -
                               (t_count + 1.0) * (harmonic[t_count] - harmonic[t - 1]);
        // The exact weights sum to zero but the harmonic differences round,
        // leaving a summation residual that grows with T. Left-to-right
        // float summation is monotone in alpha_1, so bisect alpha_1 inside a
        // +-1e-10 window until the residual vanishes (or is minimal).
        auto naive_sum = [&out] {
            double s = 0.0;
            for (double a : out.alpha) s += a;
            return s;
        };
        double lo = out.alpha[0] - 1e-10, hi = out.alpha[0] + 1e-10;
        double best_a0 = out.alpha[0], best_s = std::abs(naive_sum());
        for (int it = 0; it < 120 && best_s != 0.0; ++it) {
            out.alpha[0] = 0.5 * (lo + hi);
            const double s = naive_sum();
            if (std::abs(s) < best_s) {
                best_s = std::abs(s);
                best_a0 = out.alpha[0];
            }
            if (s == 0.0) break;
            if (s > 0.0) hi = out.alpha[0];
            else lo = out.alpha[0];
        }
        out.alpha[0] = best_a0;
    }
    return out;
}

RankCoefficients coefficients_bruteforce(int t_count, RankVariant variant) {
    if (t_count < 2)
        throw Error(ErrorKind::DegenerateWindow, "rank coefficients need T >= 2");
    RankCoefficients out;
    out.t_count = t_count;
    out.variant = variant;
    out.alpha.assign(t_count, 0.0);
    // a_basis[t][i] = weight of basis frame psi_{i+1} in A_{t+1}.
    std::vector<std::vector<double>> a_basis(t_count, std::vector<double>(t_count, 0.0));
    for (int t = 0; t < t_count; ++t) {
        if (variant == RankVariant::Linear) {
            a_basis[t][t] = 1.0;
        } else {
            for (int i = 0; i <= t; ++i)
                a_basis[t][i] = 1.0 / (t + 1);
        }
    }
    for (int t = 0; t < t_count; ++t)
        for (int q = t + 1; q < t_count; ++q)
            for (int i = 0; i < t_count; ++i)
                out.alpha[i] += a_basis[q][i] - a_basis[t][i];
    return out;
}

PooledImage pool(const FrameSequence& frames, const RankCoefficients& coeffs) {
    if (static_cast<int>(frames.size()) != coeffs.t_count)
        throw Error(ErrorKind::LengthMismatch, "pool: frame count != coefficient count");
    PooledImage out;
    out.kind = PoolKind::Dynamic;
    out.grid = Image(frames.front().height, frames.front().width, frames.front().channels);
    for (std::size_t t = 0; t < frames.size(); ++t) {
        if (!frames[t].same_shape(frames.front()))
            throw Error(ErrorKind::DimensionMismatch, "pool: frame shape mismatch");
        const double a = coeffs.alpha[t];
        for (std::size_t i = 0; i < out.grid.data.size(); ++i)
            out.grid.data[i] += a * frames[t].data[i];
    }
    return out;
}

PooledImage semof(const std::vector<FlowField>& flows, const RankCoefficients& coeffs) {
    if (static_cast<int>(flows.size()) != coeffs.t_count)
        throw Error(ErrorKind::LengthMismatch, "semof: flow count != coefficient count");
    PooledImage out;
    out.kind = PoolKind::Semof;
    out.grid = Image(flows.front().height, flows.front().width, 2);
    for (std::size_t t = 0; t < flows.size(); ++t) {
        const auto& f = flows[t];
        if (f.height != out.grid.height || f.width != out.grid.width)
            throw Error(ErrorKind::DimensionMismatch, "semof: flow shape mismatch");
        const double a = coeffs.alpha[t];
        for (std::size_t i = 0; i < f.u.size(); ++i) {
            out.grid.data[2 * i] += a * f.u[i];
            out.grid.data[2 * i + 1] += a * f.v[i];
        }
    }
    return out;
}

PooledImage mhi(const FrameSequence& frames, int decay_tau, double motion_threshold) {
    if (frames.size() < 2)
        throw Error(ErrorKind::DegenerateWindow, "mhi needs T >= 2");
    if (decay_tau < 1)
        throw Error(ErrorKind::ConfigError, "mhi decay_tau must be >= 1");
    const Frame& first = frames.front();
    const std::size_t npix = static_cast<std::size_t>(first.height) * first.width;
    std::vector<double> history(npix, 0.0);
    for (std::size_t t = 1; t < frames.size(); ++t) {
        if (!frames[t].same_shape(first))
            throw Error(ErrorKind::DimensionMismatch, "mhi: frame shape mismatch");
        for (std::size_t p = 0; p < npix; ++p) {
            double diff = 0.0;
            for (int c = 0; c < first.channels; ++c) {
                const std::size_t i = p * first.channels + c;
                diff = std::max(diff, std::abs(frames[t].data[i] - frames[t - 1].data[i]));
            }
            if (diff > motion_threshold)
                history[p] = decay_tau;
            else
                history[p] = std::max(history[p] - 1.0, 0.0);
        }
    }
    PooledImage out;
    out.kind = PoolKind::Mhi;
    out.grid = Image(first.height, first.width, 1);
    for (std::size_t p = 0; p < npix; ++p)
        out.grid.data[p] = history[p] / decay_tau;
    return out;
}

PooledImage mean_pool(const FrameSequence& frames) {
    if (frames.empty())
        throw Error(ErrorKind::NoFrames, "mean_pool: empty sequence");
    PooledImage out;
    out.kind = PoolKind::Mean;
    out.grid = Image(frames.front().height, frames.front().width, frames.front().channels);
    for (const auto& f : frames) {
        if (!f.same_shape(frames.front()))
            throw Error(ErrorKind::DimensionMismatch, "mean_pool: frame shape mismatch");
        for (std::size_t i = 0; i < out.grid.data.size(); ++i)
            out.grid.data[i] += f.data[i];
    }
    for (double& s : out.grid.data)
        s /= static_cast<double>(frames.size());
    return out;
}

PooledImage max_pool(const FrameSequence& frames) {
    if (frames.empty())
        throw Error(ErrorKind::NoFrames, "max_pool: empty sequence");
    PooledImage out;
    out.kind = PoolKind::Max;
    out.grid = frames.front();
    for (std::size_t t = 1; t < frames.size(); ++t) {
        if (!frames[t].same_shape(frames.front()))
            throw Error(ErrorKind::DimensionMismatch, "max_pool: frame shape mismatch");
        for (std::size_t i = 0; i < out.grid.data.size(); ++i)
            out.grid.data[i] = std::max(out.grid.data[i], frames[t].data[i]);
    }
    return out;
}

std::vector<WindowRange> windows(std::size_t total_frames, WindowSpec spec) {
    if (spec.tau < 2)
        throw Error(ErrorKind::ConfigError, "window tau must be >= 2");
    if (spec.stride < 1 || spec.stride > spec.tau)
        throw Error(ErrorKind::ConfigError, "window stride must satisfy 1 <= stride <= tau");
    if (total_frames < static_cast<std::size_t>(spec.tau))
        throw Error(ErrorKind::VideoTooShort, "video shorter than window duration");
    std::vector<WindowRange> out;
    for (std::size_t start = 0; start + spec.tau <= total_frames;
         start += static_cast<std::size_t>(spec.stride))
        out.push_back({start, start + static_cast<std::size_t>(spec.tau)});
    return out;
}

std::vector<PooledImage> multiple_semi(const FrameSequence& video,
                                       const PipelineConfig& config,
                                       unsigned jobs) {
    config.validate();
    const auto ranges = windows(video.size(), {config.tau, config.stride});
    const RankCoefficients coeffs = coefficients(config.tau, RankVariant::Linear);
    std::vector<PooledImage> out(ranges.size());
    parallel_for(ranges.size(), std::max(1u, jobs), [&](std::size_t w) {
        const FrameSequence clip(video.begin() + static_cast<std::ptrdiff_t>(ranges[w].begin),
                                 video.begin() + static_cast<std::ptrdiff_t>(ranges[w].end));
        // The segmentation itself is the expensive part; keep it serial here
        // since windows already run in parallel.
        const FrameSequence segmented = segment_sequence(clip, config, 1);
        const Frame background = estimate_background(segmented);
        std::vector<SilhouetteMask> masks;
        masks.reserve(segmented.size());
        for (const auto& f : segmented)
            masks.push_back(silhouette(f, background, config.sil_threshold,
                                       config.open_radius));
        const FrameSequence overlaid =
            overlay(segmented, background, masks, config.alpha_blend);
        PooledImage pooled = pool(overlaid, coeffs);
        pooled.kind = PoolKind::Semi;
        out[w] = std::move(pooled);
    });
    return out;
}

} // namespace semimg
