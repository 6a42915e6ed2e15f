#pragma once

#include <filesystem>
#include <string>

#include "semimg/image.hpp"

namespace semimg {

// Full pipeline configuration. Keys of the flat `key = value` config file
// map 1:1 onto these fields; unknown keys are rejected.
struct PipelineConfig {
    int n0 = 16;                     // initial cluster count (power of two)
    int z = 4;                       // segmentation epochs
    int a = 5;                       // level-set iterations per epoch
    int p0 = 9;                      // initial circular window diameter (odd)
    double epsilon = 1.0;            // Heaviside smoothing width
    double v = 0.01;                 // level-set length penalty
    double gamma = 0.05;             // Potts jump penalty
    int tau = 15;                    // window duration (frames)
    int stride = 9;                  // window stride (frames)
    double alpha_blend = 0.5;        // background overlay alpha
    double sil_threshold = 25.0 / 255.0; // silhouette threshold
    int potts_sweeps = 24;       // coupling sweeps until row/column consensus
    int open_radius = 1;

    void validate() const;           // throws ConfigError
};

PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& file);

// One LSSGC pass (epoch loop of global k-means seeding, per-channel
// multiphase level-set evolution, and final Potts fusion).
Frame segment(const Frame& frame, const PipelineConfig& config);

// Saturating elementwise addition in [0,1] followed by min-max
// renormalization.
Frame fuse(const Frame& potts_map, const Frame& segmented_map);

// Per-frame segmentation, order preserved; frames are independent and run
// on `jobs` threads.
FrameSequence segment_sequence(const FrameSequence& frames,
                               const PipelineConfig& config, unsigned jobs = 1);

} // namespace semimg
