#pragma once

#include <cstddef>
#include <span>

namespace lagrangeflow {

struct EstimateWithError {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
};

/// Fixed-tree summation: blocks of kReduceBlock values are summed pairwise,
/// then the block sums are summed pairwise. The tree depends only on the
/// length, so every worker count gives the same bits.
inline constexpr std::size_t kReduceBlock = 2048;

double tree_sum(std::span<const double> xs);
/// Same tree, single thread. Kept as the reference for tree_sum.
double tree_sum_serial(std::span<const double> xs);

/// Mean and standard error (sample sd / sqrt n) with the fixed tree.
EstimateWithError estimate_mean(std::span<const double> xs);
EstimateWithError estimate_mean_serial(std::span<const double> xs);

}  // namespace lagrangeflow
