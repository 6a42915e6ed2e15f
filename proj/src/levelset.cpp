#include "semimg/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace semimg {

namespace {

constexpr double kGradFloor = 1e-8;

inline int clampi(int v, int lo, int hi) { return std::clamp(v, lo, hi); }

// Central differences with edge replication.
void gradients(const Image& f, Image& gx, Image& gy) {
    const int h = f.height, w = f.width;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            gx.at(y, x, 0) = 0.5 * (f.at(y, clampi(x + 1, 0, w - 1), 0) -
                                    f.at(y, clampi(x - 1, 0, w - 1), 0));
            gy.at(y, x, 0) = 0.5 * (f.at(clampi(y + 1, 0, h - 1), x, 0) -
                                    f.at(clampi(y - 1, 0, h - 1), x, 0));
        }
}

Image curvature(const Image& phi) {
    const int h = phi.height, w = phi.width;
    Image gx(h, w, 1), gy(h, w, 1), nx(h, w, 1), ny(h, w, 1), kappa(h, w, 1);
    gradients(phi, gx, gy);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double mag = std::max(
                std::sqrt(gx.at(y, x, 0) * gx.at(y, x, 0) + gy.at(y, x, 0) * gy.at(y, x, 0)),
                kGradFloor);
            nx.at(y, x, 0) = gx.at(y, x, 0) / mag;
            ny.at(y, x, 0) = gy.at(y, x, 0) / mag;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double dnx = 0.5 * (nx.at(y, clampi(x + 1, 0, w - 1), 0) -
                                      nx.at(y, clampi(x - 1, 0, w - 1), 0));
            const double dny = 0.5 * (ny.at(clampi(y + 1, 0, h - 1), x, 0) -
                                      ny.at(clampi(y - 1, 0, h - 1), x, 0));
            kappa.at(y, x, 0) = dnx + dny;
        }
    return kappa;
}

} // namespace

Image region_indicator(const LevelSetState& state, int region_index) {
    if (region_index < 0 || region_index >= state.num_regions())
        throw Error(ErrorKind::LengthMismatch, "region index out of range");
    Image ind(state.height, state.width, 1, 1.0);
    for (int j = 0; j < state.m; ++j) {
        const bool set = (region_index >> j) & 1;
        const Image& phi = state.phi[j];
        for (std::size_t i = 0; i < ind.data.size(); ++i) {
            const double hval = heaviside(phi.data[i], state.epsilon);
            ind.data[i] *= set ? hval : (1.0 - hval);
        }
    }
    return ind;
}

double energy(const Image& channel, const LevelSetState& state) {
    const int n = state.num_regions();
    double data_term = 0.0;
    for (int k = 0; k < n; ++k) {
        const Image ind = region_indicator(state, k);
        const double ck = state.means[k];
        for (std::size_t i = 0; i < channel.data.size(); ++i) {
            const double r = channel.data[i] - ck;
            data_term += r * r * ind.data[i];
        }
    }
    double length_term = 0.0;
    Image hmap(state.height, state.width, 1);
    Image gx(state.height, state.width, 1), gy(state.height, state.width, 1);
    for (int j = 0; j < state.m; ++j) {
        for (std::size_t i = 0; i < hmap.data.size(); ++i)
            hmap.data[i] = heaviside(state.phi[j].data[i], state.epsilon);
        gradients(hmap, gx, gy);
        for (std::size_t i = 0; i < hmap.data.size(); ++i)
            length_term += std::sqrt(gx.data[i] * gx.data[i] + gy.data[i] * gy.data[i]);
    }
    return data_term + state.nu * length_term;
}

std::vector<double> update_means(const Image& channel, const LevelSetState& state) {
    const int n = state.num_regions();
    std::vector<double> means = state.means;
    for (int k = 0; k < n; ++k) {
        const Image ind = region_indicator(state, k);
        double mass = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < channel.data.size(); ++i) {
            mass += ind.data[i];
            sum += channel.data[i] * ind.data[i];
        }
        if (mass > 0.0)
            means[k] = sum / mass;
    }
    return means;
}

LevelSetState evolve(const Image& channel, LevelSetState state, int iterations) {
    const int h = state.height, w = state.width;
    const int n = state.num_regions();
    const std::size_t npix = channel.data.size();

    for (int it = 0; it < iterations; ++it) {
        state.means = update_means(channel, state);

        // Smoothed Heaviside per level set.
        std::vector<std::vector<double>> hv(state.m, std::vector<double>(npix));
        for (int j = 0; j < state.m; ++j)
            for (std::size_t i = 0; i < npix; ++i)
                hv[j][i] = heaviside(state.phi[j].data[i], state.epsilon);

        // Data force on each phi_j: sum_k (I-c_k)^2 * d(indicator_k)/d H_j.
        std::vector<Image> force(state.m, Image(h, w, 1));
        double max_residual = 0.0;
        for (std::size_t i = 0; i < npix; ++i) {
            for (int k = 0; k < n; ++k) {
                const double r = channel.data[i] - state.means[k];
                const double r2 = r * r;
                max_residual = std::max(max_residual, r2);
                for (int j = 0; j < state.m; ++j) {
                    double partial = 1.0;
                    for (int j2 = 0; j2 < state.m; ++j2) {
                        if (j2 == j) continue;
                        partial *= ((k >> j2) & 1) ? hv[j2][i] : (1.0 - hv[j2][i]);
                    }
                    const double sign = ((k >> j) & 1) ? 1.0 : -1.0;
                    force[j].data[i] += r2 * sign * partial;
                }
            }
        }

        std::vector<Image> velocity(state.m, Image(h, w, 1));
        for (int j = 0; j < state.m; ++j) {
            const Image kappa = curvature(state.phi[j]);
            for (std::size_t i = 0; i < npix; ++i)
                velocity[j].data[i] = dirac(state.phi[j].data[i], state.epsilon) *
                                      (state.nu * kappa.data[i] - force[j].data[i]);
        }

        const double e0 = energy(channel, state);
        double dt = 0.4 / (state.nu + max_residual);
        LevelSetState trial = state;
        bool accepted = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            for (int j = 0; j < state.m; ++j)
                for (std::size_t i = 0; i < npix; ++i)
                    trial.phi[j].data[i] = state.phi[j].data[i] + dt * velocity[j].data[i];
            if (energy(channel, trial) <= e0 + 1e-12) {
                accepted = true;
                break;
            }
            dt *= 0.5;
        }
        if (accepted)
            state.phi = std::move(trial.phi);

        for (int j = 0; j < state.m; ++j)
            for (double v : state.phi[j].data)
                if (!std::isfinite(v))
                    throw Error(ErrorKind::EvolutionDiverged, "non-finite level set");
    }
    state.means = update_means(channel, state);
    return state;
}

LevelSetState init_from_labels(const std::vector<int>& labels, int height, int width,
                               int m, std::vector<double> means,
                               double epsilon, double nu) {
    LevelSetState state;
    state.height = height;
    state.width = width;
    state.m = m;
    state.epsilon = epsilon;
    state.nu = nu;
    state.means = std::move(means);
    state.means.resize(static_cast<std::size_t>(1) << m,
                       state.means.empty() ? 0.0 : state.means.back());

    const double clip = 3.0;
    for (int j = 0; j < m; ++j) {
        Image phi(height, width, 1);
        std::vector<int> dist(labels.size(), -1);
        std::deque<std::size_t> queue;
        auto plane = [&](std::size_t i) { return (labels[i] >> j) & 1; };
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * width + x;
                const int b = plane(i);
                const bool edge =
                    (x > 0 && plane(i - 1) != b) || (x + 1 < width && plane(i + 1) != b) ||
                    (y > 0 && plane(i - width) != b) ||
                    (y + 1 < height && plane(i + width) != b);
                if (edge) {
                    dist[i] = 1;
                    queue.push_back(i);
                }
            }
        while (!queue.empty()) {
            const std::size_t i = queue.front();
            queue.pop_front();
            const int y = static_cast<int>(i / width), x = static_cast<int>(i % width);
            const int neighbors[4][2] = {{y - 1, x}, {y + 1, x}, {y, x - 1}, {y, x + 1}};
            for (auto& nb : neighbors) {
                if (nb[0] < 0 || nb[0] >= height || nb[1] < 0 || nb[1] >= width) continue;
                const std::size_t ni = static_cast<std::size_t>(nb[0]) * width + nb[1];
                if (dist[ni] < 0) {
                    dist[ni] = dist[i] + 1;
                    queue.push_back(ni);
                }
            }
        }
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const double d = dist[i] < 0 ? clip : std::min(static_cast<double>(dist[i]), clip);
            phi.data[i] = plane(i) ? d : -d;
        }
        state.phi.push_back(std::move(phi));
    }
    return state;
}

} // namespace semimg
