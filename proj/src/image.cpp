#include "semimg/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace semimg {

namespace {

std::uint8_t round_half_up_u8(double x) {
    double r = std::floor(x + 0.5);
    r = std::clamp(r, 0.0, 255.0);
    return static_cast<std::uint8_t>(r);
}

} // namespace

EncodedImage normalize_to_u8(const Image& image) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double s : image.data) {
        if (!std::isfinite(s))
            throw Error(ErrorKind::NonFiniteInput, "normalize_to_u8: non-finite sample");
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    EncodedImage out;
    out.height = image.height;
    out.width = image.width;
    out.channels = image.channels;
    out.data.resize(image.data.size(), 0);
    if (image.data.empty() || hi <= lo)
        return out; // constant image -> all zero
    const double scale = 255.0 / (hi - lo);
    for (std::size_t i = 0; i < image.data.size(); ++i)
        out.data[i] = round_half_up_u8((image.data[i] - lo) * scale);
    return out;
}

EncodedImage encode_unit_range(const Image& image) {
    EncodedImage out;
    out.height = image.height;
    out.width = image.width;
    out.channels = image.channels;
    out.data.resize(image.data.size());
    for (std::size_t i = 0; i < image.data.size(); ++i) {
        if (!std::isfinite(image.data[i]))
            throw Error(ErrorKind::NonFiniteInput, "encode_unit_range: non-finite sample");
        out.data[i] = round_half_up_u8(image.data[i] * 255.0);
    }
    return out;
}

std::uint8_t encode_flow_sample(double value) {
    const double clipped = std::clamp(value, -kFlowClip, kFlowClip);
    return round_half_up_u8((clipped + kFlowClip) * 255.0 / (2.0 * kFlowClip));
}

double decode_flow_sample(std::uint8_t sample) {
    const double value = sample * (2.0 * kFlowClip) / 255.0 - kFlowClip;
    return std::clamp(value, -kFlowClip, kFlowClip);
}

} // namespace semimg
