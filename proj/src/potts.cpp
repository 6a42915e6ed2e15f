#include "semimg/potts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace semimg {

PottsSolution1D potts_1d(std::span<const double> signal, int channels, double gamma) {
    if (channels < 1 || signal.size() % channels != 0 || signal.empty())
        throw Error(ErrorKind::EmptyInput, "potts_1d: bad signal");
    const int n = static_cast<int>(signal.size()) / channels;

    // Prefix sums for O(1) segment SSE.
    std::vector<std::vector<double>> s1(channels, std::vector<double>(n + 1, 0.0));
    std::vector<std::vector<double>> s2(channels, std::vector<double>(n + 1, 0.0));
    for (int i = 1; i <= n; ++i)
        for (int c = 0; c < channels; ++c) {
            const double x = signal[static_cast<std::size_t>(i - 1) * channels + c];
            s1[c][i] = s1[c][i - 1] + x;
            s2[c][i] = s2[c][i - 1] + x * x;
        }
    auto seg_sse = [&](int l, int r) { // 1-based inclusive
        double e = 0.0;
        const double len = r - l + 1;
        for (int c = 0; c < channels; ++c) {
            const double ssq = s2[c][r] - s2[c][l - 1];
            const double sum = s1[c][r] - s1[c][l - 1];
            double ec = ssq - sum * sum / len;
            // Cancellation leaves a mathematically zero SSE at rounding
            // scale (either sign), which would make phantom splits look
            // profitable at gamma = 0. Snap it to an exact zero.
            if (ec <= 1e-12 * ssq) ec = 0.0;
            e += ec;
        }
        return e;
    };

    std::vector<double> best(n + 1, 0.0);
    std::vector<int> segs(n + 1, 0);
    std::vector<int> arg_l(n + 1, 1);
    for (int r = 1; r <= n; ++r) {
        double b = std::numeric_limits<double>::infinity();
        int bsegs = 0, bl = 1;
        for (int l = 1; l <= r; ++l) {
            const double cost = best[l - 1] + seg_sse(l, r) + (l > 1 ? gamma : 0.0);
            const int nsegs = (l > 1 ? segs[l - 1] : 0) + 1;
            // Ties: fewest segments, then earliest boundary (smallest l wins
            // because l is scanned ascending).
            if (cost < b || (cost == b && nsegs < bsegs)) {
                b = cost;
                bsegs = nsegs;
                bl = l;
            }
        }
        best[r] = b;
        segs[r] = bsegs;
        arg_l[r] = bl;
    }

    PottsSolution1D out;
    out.channels = channels;
    out.objective = best[n];
    out.values.resize(signal.size());
    int r = n;
    while (r > 0) {
        const int l = arg_l[r];
        const double len = r - l + 1;
        for (int c = 0; c < channels; ++c) {
            // Constant segments snap to their value so piecewise-constant
            // inputs are exact fixed points.
            bool constant = true;
            const double first = signal[static_cast<std::size_t>(l - 1) * channels + c];
            for (int i = l + 1; i <= r && constant; ++i)
                constant = signal[static_cast<std::size_t>(i - 1) * channels + c] == first;
            const double mean = constant ? first : (s1[c][r] - s1[c][l - 1]) / len;
            for (int i = l; i <= r; ++i)
                out.values[static_cast<std::size_t>(i - 1) * channels + c] = mean;
        }
        if (l > 1) out.boundaries.push_back(l - 1);
        r = l - 1;
    }
    std::reverse(out.boundaries.begin(), out.boundaries.end());
    out.jumps = static_cast<int>(out.boundaries.size());
    return out;
}

namespace {

// Solve each row (or column) of the coupled data term
// (1+mu) * ||u - (f + mu*g)/(1+mu)||^2 + gamma * J  as a plain 1D Potts
// problem with effective penalty gamma/(1+mu).
Image direction_solve(const Image& f, const Image& g, double mu, double gamma,
                      bool rows) {
    const int h = f.height, w = f.width, ch = f.channels;
    Image out(h, w, ch);
    const double geff = gamma / (1.0 + mu);
    std::vector<double> line;
    if (rows) {
        line.resize(static_cast<std::size_t>(w) * ch);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x)
                for (int c = 0; c < ch; ++c)
                    line[static_cast<std::size_t>(x) * ch + c] =
                        f.at(y, x, c) +
                        (g.at(y, x, c) - f.at(y, x, c)) * (mu / (1.0 + mu));
            const auto sol = potts_1d(line, ch, geff);
            for (int x = 0; x < w; ++x)
                for (int c = 0; c < ch; ++c)
                    out.at(y, x, c) = sol.values[static_cast<std::size_t>(x) * ch + c];
        }
    } else {
        line.resize(static_cast<std::size_t>(h) * ch);
        for (int x = 0; x < w; ++x) {
            for (int y = 0; y < h; ++y)
                for (int c = 0; c < ch; ++c)
                    line[static_cast<std::size_t>(y) * ch + c] =
                        f.at(y, x, c) +
                        (g.at(y, x, c) - f.at(y, x, c)) * (mu / (1.0 + mu));
            const auto sol = potts_1d(line, ch, geff);
            for (int y = 0; y < h; ++y)
                for (int c = 0; c < ch; ++c)
                    out.at(y, x, c) = sol.values[static_cast<std::size_t>(y) * ch + c];
        }
    }
    return out;
}

} // namespace

PottsSolution potts_2d(const Image& image, double gamma, int sweeps) {
    if (sweeps < 1)
        throw Error(ErrorKind::EmptyInput, "potts_2d: sweeps must be >= 1");
    Image u = image, v = image;
    double mu = gamma / 4.0;
    for (int s = 0; s < sweeps; ++s) {
        u = direction_solve(image, v, mu, gamma, /*rows=*/true);
        v = direction_solve(image, u, mu, gamma, /*rows=*/false);
        double maxdiff = 0.0;
        for (std::size_t i = 0; i < u.data.size(); ++i)
            maxdiff = std::max(maxdiff, std::abs(u.data[i] - v.data[i]));
        if (maxdiff < 1e-4) break;
        mu *= 2.0;
    }
    PottsSolution out;
    out.gamma = gamma;
    out.values = Image(image.height, image.width, image.channels);
    for (std::size_t i = 0; i < u.data.size(); ++i)
        out.values.data[i] = 0.5 * (u.data[i] + v.data[i]);

    for (int y = 0; y < image.height; ++y)
        for (int x = 1; x < image.width; ++x)
            for (int c = 0; c < image.channels; ++c)
                if (out.values.at(y, x, c) != out.values.at(y, x - 1, c)) {
                    ++out.jumps;
                    break;
                }
    for (int x = 0; x < image.width; ++x)
        for (int y = 1; y < image.height; ++y)
            for (int c = 0; c < image.channels; ++c)
                if (out.values.at(y, x, c) != out.values.at(y - 1, x, c)) {
                    ++out.jumps;
                    break;
                }
    return out;
}

} // namespace semimg
