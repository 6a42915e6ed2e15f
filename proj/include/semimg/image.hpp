#pragma once

#include <cstdint>
#include <vector>

#include "semimg/error.hpp"

namespace semimg {

// Dense real-valued raster. Row-major, channel-interleaved:
// data[(y*width + x)*channels + c]. Frames ingested from disk are kept
// in [0,1]; intermediate pooled images may leave that range.
struct Image {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<double> data;

    Image() = default;
    Image(int h, int w, int c, double fill = 0.0)
        : height(h), width(w), channels(c),
          data(static_cast<std::size_t>(h) * w * c, fill) {}

    double& at(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double at(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    std::size_t size() const { return data.size(); }

    bool same_shape(const Image& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
};

using Frame = Image;
using FrameSequence = std::vector<Frame>;

// Two-channel displacement field, components clipped to [-20, 20] pixels
// at ingestion time.
struct FlowField {
    int height = 0;
    int width = 0;
    std::vector<double> u;
    std::vector<double> v;
};

inline constexpr double kFlowClip = 20.0;

// 8-bit output image produced only at the encoding boundary.
struct EncodedImage {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;
};

// Per-image min-max map to [0,255], rounding half-up; constant input maps
// to all-zero. Throws NonFiniteInput on NaN/inf samples.
EncodedImage normalize_to_u8(const Image& image);

// Quantizes a frame already in [0,1] by x -> round(x*255), no rescaling.
EncodedImage encode_unit_range(const Image& image);

// 8-bit flow quantization: value -> round((value+20)*255/40), and its
// inverse sample -> sample*40/255 - 20.
std::uint8_t encode_flow_sample(double value);
double decode_flow_sample(std::uint8_t sample);

} // namespace semimg
