#include "semimg/maplayer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace semimg {

std::vector<double> maplayer_forward(const FeatureMapStack& stack,
                                     const RankCoefficients& coeffs) {
    if (stack.t_count != coeffs.t_count)
        throw Error(ErrorKind::LengthMismatch, "maplayer_forward: length mismatch");
    const std::size_t msize = stack.map_size();
    std::vector<double> out(msize, 0.0);
    for (int t = 0; t < stack.t_count; ++t) {
        const double a = coeffs.alpha[t];
        const double* slice = stack.data.data() + static_cast<std::size_t>(t) * msize;
        for (std::size_t i = 0; i < msize; ++i)
            out[i] += a * slice[i];
    }
    return out;
}

FeatureMapStack maplayer_backward(const std::vector<double>& upstream,
                                  int c, int h, int w,
                                  const RankCoefficients& coeffs) {
    if (coeffs.t_count < 2)
        throw Error(ErrorKind::DegenerateWindow, "maplayer_backward: T must be >= 2");
    const std::size_t msize = static_cast<std::size_t>(c) * h * w;
    if (upstream.size() != msize)
        throw Error(ErrorKind::LengthMismatch, "maplayer_backward: upstream size mismatch");
    FeatureMapStack grad(coeffs.t_count, c, h, w);
    for (int t = 0; t < coeffs.t_count; ++t) {
        const double a = coeffs.alpha[t];
        double* slice = grad.data.data() + static_cast<std::size_t>(t) * msize;
        for (std::size_t i = 0; i < msize; ++i)
            slice[i] = a * upstream[i];
    }
    return grad;
}

double grad_check(const FeatureMapStack& stack, const RankCoefficients& coeffs,
                  int probe_count, double step, std::uint64_t seed) {
    if (probe_count < 1)
        throw Error(ErrorKind::EmptyInput, "grad_check: probe_count must be >= 1");
    if (step <= 0.0)
        throw Error(ErrorKind::EmptyInput, "grad_check: step must be > 0");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const std::size_t msize = stack.map_size();
    std::vector<double> g(msize);
    for (double& x : g) x = unif(rng);

    const FeatureMapStack analytic = maplayer_backward(g, stack.c, stack.h, stack.w, coeffs);

    auto loss = [&](const FeatureMapStack& s) {
        const auto fwd = maplayer_forward(s, coeffs);
        double acc = 0.0;
        for (std::size_t i = 0; i < msize; ++i)
            acc += g[i] * fwd[i];
        return acc;
    };

    std::uniform_int_distribution<std::size_t> pick(0, stack.data.size() - 1);
    FeatureMapStack probe = stack;
    double max_rel = 0.0;
    for (int p = 0; p < probe_count; ++p) {
        const std::size_t i = pick(rng);
        const double orig = probe.data[i];
        probe.data[i] = orig + step;
        const double f_plus = loss(probe);
        probe.data[i] = orig - step;
        const double f_minus = loss(probe);
        probe.data[i] = orig;
        const double numeric = (f_plus - f_minus) / (2.0 * step);
        const double exact = analytic.data[i];
        const double denom = std::max({std::abs(numeric), std::abs(exact), 1.0});
        max_rel = std::max(max_rel, std::abs(numeric - exact) / denom);
    }
    return max_rel;
}

} // namespace semimg
