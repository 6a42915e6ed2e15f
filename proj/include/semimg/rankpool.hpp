#pragma once

#include <vector>

#include "semimg/image.hpp"
#include "semimg/lssgc.hpp"

namespace semimg {

enum class RankVariant { Linear, Harmonic };

// Approximate rank-pooling weights. Both variants sum to zero; the linear
// variant is antisymmetric and strictly increasing.
struct RankCoefficients {
    int t_count = 0;
    RankVariant variant = RankVariant::Linear;
    std::vector<double> alpha;
};

// Closed forms: linear alpha_t = 2t - (T+1); harmonic
// alpha_t = 2(T - t + 1) - (T+1)(H_T - H_{t-1}) with H_0 = 0.
RankCoefficients coefficients(int t_count, RankVariant variant);

// Independent oracle: expands sum_{q>t} (A_q - A_t) symbolically over basis
// frames (A_t = psi_t for the linear variant, running averages for the
// harmonic one) and reads off the per-frame weights.
RankCoefficients coefficients_bruteforce(int t_count, RankVariant variant);

enum class PoolKind { Semi, Dynamic, Semof, Mhi, Mean, Max };

struct PooledImage {
    Image grid;       // pre-normalization real values
    PoolKind kind = PoolKind::Dynamic;
};

// Weighted temporal sum sum_t alpha_t * frame_t.
PooledImage pool(const FrameSequence& frames, const RankCoefficients& coeffs);

// Rank pooling of flow fields; u and v pooled independently into a
// 2-channel grid.
PooledImage semof(const std::vector<FlowField>& flows, const RankCoefficients& coeffs);

// Classic motion-history recurrence, output scaled to [0,1] by decay_tau.
PooledImage mhi(const FrameSequence& frames, int decay_tau, double motion_threshold);

PooledImage mean_pool(const FrameSequence& frames);
PooledImage max_pool(const FrameSequence& frames);

// Clip windows of `tau` frames every `stride` frames.
struct WindowSpec {
    int tau = 15;
    int stride = 9;
};

struct WindowRange {
    std::size_t begin = 0; // 0-based, half-open [begin, end)
    std::size_t end = 0;
};

// Enumerates [start, start+tau) ranges while they fit; trailing remainder
// frames are dropped. Throws VideoTooShort when total < tau.
std::vector<WindowRange> windows(std::size_t total_frames, WindowSpec spec);

// Per window: segment_sequence -> temporal-median background -> silhouette
// per frame -> overlay -> linear rank pooling. One SemI per window.
std::vector<PooledImage> multiple_semi(const FrameSequence& video,
                                       const PipelineConfig& config,
                                       unsigned jobs = 1);

} // namespace semimg
