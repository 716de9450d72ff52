#include "lagrangeflow/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lagrangeflow {

namespace {

double pairwise(const double* x, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise(x, half) + pairwise(x + half, n - half);
}

double tree_sum_impl(std::span<const double> xs, bool parallel) {
    const std::size_t n = xs.size();
    const std::size_t blocks = (n + kReduceBlock - 1) / kReduceBlock;
    if (blocks <= 1) return pairwise(xs.data(), n);
    std::vector<double> partial(blocks);
    const auto nb = static_cast<long long>(blocks);
#pragma omp parallel for schedule(static) if (parallel)
    for (long long b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t len = std::min(kReduceBlock, n - lo);
        partial[static_cast<std::size_t>(b)] = pairwise(xs.data() + lo, len);
    }
    return pairwise(partial.data(), blocks);
}

EstimateWithError estimate_impl(std::span<const double> xs, bool parallel) {
    const std::size_t n = xs.size();
    if (n == 0) return {};
    if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; })) return {xs[0], 0.0, n};
    const double mean = tree_sum_impl(xs, parallel) / static_cast<double>(n);
    if (n == 1) return {mean, 0.0, 1};
    std::vector<double> dev(n);
    const auto nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static) if (parallel)
    for (long long i = 0; i < nn; ++i) {
        const double d = xs[static_cast<std::size_t>(i)] - mean;
        dev[static_cast<std::size_t>(i)] = d * d;
    }
    const double var = tree_sum_impl(dev, parallel) / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

}  // namespace

double tree_sum(std::span<const double> xs) { return tree_sum_impl(xs, true); }
double tree_sum_serial(std::span<const double> xs) { return tree_sum_impl(xs, false); }

EstimateWithError estimate_mean(std::span<const double> xs) { return estimate_impl(xs, true); }
EstimateWithError estimate_mean_serial(std::span<const double> xs) { return estimate_impl(xs, false); }

}  // namespace lagrangeflow
