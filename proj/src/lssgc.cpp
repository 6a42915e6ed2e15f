#include "semimg/lssgc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "semimg/clustering.hpp"
#include "semimg/levelset.hpp"
#include "semimg/parallel.hpp"
#include "semimg/potts.hpp"

namespace semimg {

namespace {

bool is_power_of_two(int x) { return x >= 1 && (x & (x - 1)) == 0; }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

void PipelineConfig::validate() const {
    if (!is_power_of_two(n0) || n0 < 2)
        throw Error(ErrorKind::ConfigError, "n0 must be a power of two >= 2");
    if (z < 1) throw Error(ErrorKind::ConfigError, "z must be >= 1");
    if (n0 >> (z - 1) < 2)
        throw Error(ErrorKind::ConfigError, "n0 / 2^(z-1) must be >= 2");
    if (a < 1) throw Error(ErrorKind::ConfigError, "a must be >= 1");
    if (p0 < 3 || p0 % 2 == 0)
        throw Error(ErrorKind::ConfigError, "p0 must be odd and >= 3");
    if (epsilon <= 0.0) throw Error(ErrorKind::ConfigError, "epsilon must be > 0");
    if (v < 0.0) throw Error(ErrorKind::ConfigError, "v must be >= 0");
    if (gamma < 0.0) throw Error(ErrorKind::ConfigError, "gamma must be >= 0");
    if (tau < 2) throw Error(ErrorKind::ConfigError, "tau must be >= 2");
    if (stride < 1 || stride > tau)
        throw Error(ErrorKind::ConfigError, "stride must satisfy 1 <= stride <= tau");
    if (alpha_blend < 0.0 || alpha_blend > 1.0)
        throw Error(ErrorKind::ConfigError, "alpha_blend must be in [0,1]");
    if (sil_threshold <= 0.0 || sil_threshold >= 1.0)
        throw Error(ErrorKind::ConfigError, "sil_threshold must be in (0,1)");
    if (potts_sweeps < 1)
        throw Error(ErrorKind::ConfigError, "potts_sweeps must be >= 1");
    if (open_radius < 1)
        throw Error(ErrorKind::ConfigError, "open_radius must be >= 1");
}

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::ConfigError,
                        "config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "n0") cfg.n0 = std::stoi(value);
            else if (key == "z") cfg.z = std::stoi(value);
            else if (key == "a") cfg.a = std::stoi(value);
            else if (key == "p0") cfg.p0 = std::stoi(value);
            else if (key == "epsilon") cfg.epsilon = std::stod(value);
            else if (key == "v") cfg.v = std::stod(value);
            else if (key == "gamma") cfg.gamma = std::stod(value);
            else if (key == "tau") cfg.tau = std::stoi(value);
            else if (key == "stride") cfg.stride = std::stoi(value);
            else if (key == "alpha_blend") cfg.alpha_blend = std::stod(value);
            else if (key == "sil_threshold") cfg.sil_threshold = std::stod(value);
            else if (key == "potts_sweeps") cfg.potts_sweeps = std::stoi(value);
            else if (key == "open_radius") cfg.open_radius = std::stoi(value);
            else
                throw Error(ErrorKind::ConfigError, "unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            throw Error(ErrorKind::ConfigError, "bad value for config key: " + key);
        }
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is)
        throw Error(ErrorKind::ConfigError, "cannot open config file: " + file.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

namespace {

Image extract_channel(const Frame& frame, int c) {
    Image out(frame.height, frame.width, 1);
    for (int y = 0; y < frame.height; ++y)
        for (int x = 0; x < frame.width; ++x)
            out.at(y, x, 0) = frame.at(y, x, c);
    return out;
}

// Per-region mean fill: pixels are assigned to their most likely region
// under the smoothed indicators and filled with the crisp per-region mean,
// so an already piecewise-constant channel reproduces its tones exactly.
Image render_state(const LevelSetState& state, const Image& channel) {
    const int n = state.num_regions();
    std::vector<Image> indicators;
    indicators.reserve(n);
    for (int k = 0; k < n; ++k)
        indicators.push_back(region_indicator(state, k));
    std::vector<int> label(channel.data.size(), 0);
    std::vector<double> sum(n, 0.0);
    std::vector<double> count(n, 0.0);
    for (std::size_t i = 0; i < channel.data.size(); ++i) {
        int best = 0;
        double best_v = -1.0;
        for (int k = 0; k < n; ++k)
            if (indicators[k].data[i] > best_v) {
                best_v = indicators[k].data[i];
                best = k;
            }
        label[i] = best;
        sum[best] += channel.data[i];
        count[best] += 1.0;
    }
    std::vector<double> fill(n);
    for (int k = 0; k < n; ++k)
        fill[k] = count[k] > 0.0 ? sum[k] / count[k] : state.means[k];
    // Constant regions snap to their value (a mean of identical samples can
    // round).
    std::vector<bool> constant(n, true);
    std::vector<double> first(n, 0.0);
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < channel.data.size(); ++i) {
        const int k = label[i];
        if (!seen[k]) {
            seen[k] = true;
            first[k] = channel.data[i];
        } else if (channel.data[i] != first[k]) {
            constant[k] = false;
        }
    }
    for (int k = 0; k < n; ++k)
        if (seen[k] && constant[k]) fill[k] = first[k];
    Image out(state.height, state.width, 1);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = fill[label[i]];
    return out;
}

} // namespace

Frame segment(const Frame& frame, const PipelineConfig& config) {
    config.validate();
    if (frame.channels != 1 && frame.channels != 3)
        throw Error(ErrorKind::ConfigError, "segment expects 1- or 3-channel frames");

    Frame current = frame;
    int clusters = config.n0;
    int diameter = config.p0;
    for (int epoch = 0; epoch < config.z; ++epoch) {
        Frame next(frame.height, frame.width, frame.channels);
        for (int c = 0; c < frame.channels; ++c) {
            const Image chan = extract_channel(current, c);
            const ClusterModel model = global_kmeans(chan, clusters, {diameter});
            const int nc = static_cast<int>(model.centroids.size());
            Image rendered;
            if (nc <= 1) {
                rendered = Image(frame.height, frame.width, 1,
                                 model.centroids.empty() ? 0.0 : model.centroids[0]);
            } else {
                int m = 1;
                while ((1 << m) < nc) ++m;
                LevelSetState state =
                    init_from_labels(model.assignment, frame.height, frame.width, m,
                                     model.centroids, config.epsilon, config.v);
                state = evolve(chan, state, config.a);
                rendered = render_state(state, chan);
            }
            for (int y = 0; y < frame.height; ++y)
                for (int x = 0; x < frame.width; ++x)
                    next.at(y, x, c) = rendered.at(y, x, 0);
        }
        current = std::move(next);
        clusters = std::max(2, clusters / 2);
        diameter = 2 * diameter - 1;
    }

    const PottsSolution potts = potts_2d(frame, config.gamma, config.potts_sweeps);
    return fuse(potts.values, current);
}

Frame fuse(const Frame& potts_map, const Frame& segmented_map) {
    if (!potts_map.same_shape(segmented_map))
        throw Error(ErrorKind::DimensionMismatch, "fuse: shape mismatch");
    Frame out(potts_map.height, potts_map.width, potts_map.channels);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = std::clamp(potts_map.data[i] + segmented_map.data[i], 0.0, 1.0);
        lo = std::min(lo, out.data[i]);
        hi = std::max(hi, out.data[i]);
    }
    if (hi > lo) {
        for (double& s : out.data)
            s = (s - lo) / (hi - lo);
    } else {
        for (double& s : out.data)
            s = 0.0;
    }
    return out;
}

FrameSequence segment_sequence(const FrameSequence& frames,
                               const PipelineConfig& config, unsigned jobs) {
    if (frames.empty())
        throw Error(ErrorKind::NoFrames, "segment_sequence: empty sequence");
    FrameSequence out(frames.size());
    parallel_for(frames.size(), jobs,
                 [&](std::size_t i) { out[i] = segment(frames[i], config); });
    return out;
}

} // namespace semimg
