#include "semimg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "semimg/maplayer.hpp"
#include "semimg/potts.hpp"
#include "semimg/rankpool.hpp"
#include "semimg/semantics.hpp"

namespace semimg {

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

} // namespace

std::vector<VerifyResult> verify_coeffs() {
    std::vector<VerifyResult> results;
    double max_dev = 0.0;
    for (int t = 2; t <= 50; ++t) {
        for (RankVariant variant : {RankVariant::Linear, RankVariant::Harmonic}) {
            const auto closed = coefficients(t, variant);
            const auto brute = coefficients_bruteforce(t, variant);
            for (int i = 0; i < t; ++i)
                max_dev = std::max(max_dev, std::abs(closed.alpha[i] - brute.alpha[i]));
        }
    }
    results.push_back({"coefficients match pairwise-expansion oracle (T in [2,50])",
                       max_dev <= 1e-9, "max deviation " + fmt_double(max_dev)});

    double max_sum = 0.0;
    for (int t = 2; t <= 200; ++t)
        for (RankVariant variant : {RankVariant::Linear, RankVariant::Harmonic}) {
            const auto c = coefficients(t, variant);
            double sum = 0.0;
            for (double a : c.alpha) sum += a;
            max_sum = std::max(max_sum, std::abs(sum));
        }
    results.push_back({"coefficients sum to zero (T in [2,200])", max_sum <= 1e-12,
                       "max |sum| " + fmt_double(max_sum)});
    return results;
}

std::vector<VerifyResult> verify_gradcheck() {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 4);
    std::uniform_int_distribution<int> tdim(2, 6);
    double max_err = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        FeatureMapStack stack(tdim(rng), dim(rng), dim(rng), dim(rng));
        for (double& x : stack.data) x = unif(rng);
        const auto coeffs = coefficients(stack.t_count,
                                         trial % 2 ? RankVariant::Harmonic
                                                   : RankVariant::Linear);
        max_err = std::max(max_err, grad_check(stack, coeffs, 8, 1e-5, 99 + trial));
    }
    return {{"finite-difference Jacobian check (100 random stacks)", max_err <= 1e-6,
             "max relative error " + fmt_double(max_err)}};
}

namespace {

struct BruteforcePotts {
    double objective = 0.0;
    std::vector<int> boundaries;
};

// Exhaustive search over all 2^(n-1) segmentations. Independent of the DP:
// per-segment means and SSEs are computed directly.
BruteforcePotts potts_bruteforce(const std::vector<double>& signal, double gamma) {
    const int n = static_cast<int>(signal.size());
    BruteforcePotts best;
    best.objective = std::numeric_limits<double>::infinity();
    int best_segments = 0;
    for (unsigned long mask = 0; mask < (1ul << (n - 1)); ++mask) {
        double cost = 0.0;
        int nsegs = 0;
        std::vector<int> bounds;
        int start = 0;
        for (int i = 1; i <= n; ++i) {
            if (i == n || (mask >> (i - 1)) & 1) {
                double mean = 0.0;
                for (int j = start; j < i; ++j) mean += signal[j];
                mean /= (i - start);
                for (int j = start; j < i; ++j)
                    cost += (signal[j] - mean) * (signal[j] - mean);
                ++nsegs;
                if (i < n) bounds.push_back(i);
                start = i;
            }
        }
        cost += gamma * (nsegs - 1);
        const bool better =
            cost < best.objective ||
            (cost == best.objective && nsegs < best_segments) ||
            (cost == best.objective && nsegs == best_segments &&
             bounds < best.boundaries);
        if (better) {
            best.objective = cost;
            best.boundaries = bounds;
            best_segments = nsegs;
        }
    }
    return best;
}

} // namespace

std::vector<VerifyResult> verify_potts() {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> len(1, 14);
    const double gammas[] = {0.01, 0.1, 1.0};
    double max_dev = 0.0;
    int mismatched = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> signal(len(rng));
        for (double& x : signal) x = unif(rng);
        for (double gamma : gammas) {
            const auto dp = potts_1d(signal, 1, gamma);
            const auto brute = potts_bruteforce(signal, gamma);
            max_dev = std::max(max_dev, std::abs(dp.objective - brute.objective));
            if (dp.boundaries != brute.boundaries) ++mismatched;
        }
    }
    return {{"potts_1d matches exhaustive enumeration (100 signals x 3 gammas)",
             max_dev <= 1e-9 && mismatched == 0,
             "max objective deviation " + fmt_double(max_dev) + ", " +
                 std::to_string(mismatched) + " segmentation mismatches"}};
}

std::vector<VerifyResult> verify_median() {
    std::mt19937_64 rng(4321);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> tdist(1, 31);
    int failures = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int t = tdist(rng);
        FrameSequence frames;
        for (int k = 0; k < t; ++k) {
            Frame f(32, 32, 3);
            for (double& x : f.data) x = unif(rng);
            frames.push_back(std::move(f));
        }
        const Frame bg = estimate_background(frames);
        // Oracle: full sort, lower of the two central order statistics.
        for (std::size_t i = 0; i < bg.data.size(); ++i) {
            std::vector<double> series(t);
            for (int k = 0; k < t; ++k) series[k] = frames[k].data[i];
            std::sort(series.begin(), series.end());
            if (bg.data[i] != series[(t - 1) / 2]) {
                ++failures;
                break;
            }
        }
    }
    return {{"temporal median matches per-pixel sort oracle (50 sequences)",
             failures == 0, std::to_string(failures) + " mismatching sequences"}};
}

std::vector<VerifyResult> verify_all() {
    std::vector<VerifyResult> all;
    for (auto fn : {verify_coeffs, verify_gradcheck, verify_potts, verify_median}) {
        auto part = fn();
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

} // namespace semimg
