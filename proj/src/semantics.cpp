#include "semimg/semantics.hpp"

#include <algorithm>
#include <cmath>

namespace semimg {

Frame estimate_background(const FrameSequence& frames) {
    if (frames.empty())
        throw Error(ErrorKind::NoFrames, "estimate_background: empty sequence");
    const Frame& first = frames.front();
    for (const auto& f : frames)
        if (!f.same_shape(first))
            throw Error(ErrorKind::DimensionMismatch, "estimate_background: shape mismatch");
    const std::size_t t = frames.size();
    Frame bg(first.height, first.width, first.channels);
    std::vector<double> series(t);
    for (std::size_t i = 0; i < bg.data.size(); ++i) {
        for (std::size_t k = 0; k < t; ++k) series[k] = frames[k].data[i];
        // Lower median: index (t-1)/2 of the sorted series.
        const std::size_t mid = (t - 1) / 2;
        std::nth_element(series.begin(), series.begin() + mid, series.end());
        bg.data[i] = series[mid];
    }
    return bg;
}

namespace {

std::vector<std::pair<int, int>> disk_offsets(int radius) {
    std::vector<std::pair<int, int>> offsets;
    const double r2 = (radius + 0.5) * (radius + 0.5);
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dy * dy + dx * dx <= r2)
                offsets.emplace_back(dy, dx);
    return offsets;
}

std::vector<std::uint8_t> erode(const std::vector<std::uint8_t>& in, int h, int w,
                                const std::vector<std::pair<int, int>>& se) {
    std::vector<std::uint8_t> out(in.size(), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            bool keep = true;
            for (const auto& [dy, dx] : se) {
                const int yy = y + dy, xx = x + dx;
                // Outside the image counts as background.
                if (yy < 0 || yy >= h || xx < 0 || xx >= w ||
                    in[static_cast<std::size_t>(yy) * w + xx] == 0) {
                    keep = false;
                    break;
                }
            }
            out[static_cast<std::size_t>(y) * w + x] = keep ? 1 : 0;
        }
    return out;
}

std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& in, int h, int w,
                                 const std::vector<std::pair<int, int>>& se) {
    std::vector<std::uint8_t> out(in.size(), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (in[static_cast<std::size_t>(y) * w + x] == 0) continue;
            for (const auto& [dy, dx] : se) {
                const int yy = y + dy, xx = x + dx;
                if (yy >= 0 && yy < h && xx >= 0 && xx < w)
                    out[static_cast<std::size_t>(yy) * w + xx] = 1;
            }
        }
    return out;
}

} // namespace

SilhouetteMask silhouette(const Frame& frame, const Frame& background,
                          double threshold, int open_radius) {
    if (!frame.same_shape(background))
        throw Error(ErrorKind::DimensionMismatch, "silhouette: shape mismatch");
    if (threshold <= 0.0 || threshold >= 1.0)
        throw Error(ErrorKind::ConfigError, "silhouette threshold must be in (0,1)");
    if (open_radius < 1)
        throw Error(ErrorKind::ConfigError, "open_radius must be >= 1");

    const int h = frame.height, w = frame.width, ch = frame.channels;
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(h) * w, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double diff = 0.0;
            for (int c = 0; c < ch; ++c)
                diff = std::max(diff, std::abs(frame.at(y, x, c) - background.at(y, x, c)));
            raw[static_cast<std::size_t>(y) * w + x] = diff > threshold ? 1 : 0;
        }
    const auto se = disk_offsets(open_radius);
    SilhouetteMask out;
    out.height = h;
    out.width = w;
    out.open_radius = open_radius;
    out.mask = dilate(erode(raw, h, w, se), h, w, se);
    return out;
}

FrameSequence overlay(const FrameSequence& segmented, const Frame& background,
                      const std::vector<SilhouetteMask>& masks, double alpha) {
    if (segmented.size() != masks.size())
        throw Error(ErrorKind::LengthMismatch, "overlay: frame/mask count mismatch");
    if (alpha < 0.0 || alpha > 1.0)
        throw Error(ErrorKind::ConfigError, "overlay alpha must be in [0,1]");
    FrameSequence out;
    out.reserve(segmented.size());
    for (std::size_t t = 0; t < segmented.size(); ++t) {
        const Frame& seg = segmented[t];
        if (t == 0) {
            out.push_back(seg); // frame 1 passes through unmodified
            continue;
        }
        if (!seg.same_shape(background) || masks[t].height != seg.height ||
            masks[t].width != seg.width)
            throw Error(ErrorKind::DimensionMismatch, "overlay: shape mismatch");
        Frame blended(seg.height, seg.width, seg.channels);
        for (int y = 0; y < seg.height; ++y)
            for (int x = 0; x < seg.width; ++x) {
                const bool fg = masks[t].mask[static_cast<std::size_t>(y) * seg.width + x] != 0;
                for (int c = 0; c < seg.channels; ++c) {
                    const double s = seg.at(y, x, c);
                    blended.at(y, x, c) =
                        fg ? s : alpha * background.at(y, x, c) + (1.0 - alpha) * s;
                }
            }
        out.push_back(std::move(blended));
    }
    return out;
}

} // namespace semimg
