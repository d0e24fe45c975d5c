#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "moebius/mu_table.hpp"

namespace moebius {

// Density of squarefree integers, 6/pi^2; also the variance of the mu value
// distribution and the mean of the |mu| distribution.
inline constexpr double kSquarefreeDensity =
    6.0 / (std::numbers::pi * std::numbers::pi);

// Value distribution of mu (support {-1, 0, 1}) or |mu| (support {0, 1})
// under the squarefree-density model, with closed-form moments.
struct DistributionRule {
    std::vector<int> support;
    std::vector<double> probs;  // same order as support, sums to 1
    double mean = 0.0;
    double variance = 0.0;
};

DistributionRule theoretical_distribution(bool absolute);

// Per-block outcome counts over consecutive disjoint blocks and the exact
// empirical probabilities p_e = count / block_len.
struct BlockStatsRow {
    std::int64_t block_index = 0;  // 1-based
    std::int64_t block_len = 0;
    std::int64_t count_minus = 0;
    std::int64_t count_zero = 0;
    std::int64_t count_plus = 0;
    double pe_minus = 0.0;
    double pe_zero = 0.0;
    double pe_plus = 0.0;
};

// Partitions indices 1..block_len*max_blocks into consecutive disjoint
// blocks; a trailing partial block is never formed (the caller bounds
// max_blocks by n_max / block_len).
std::vector<BlockStatsRow> block_frequencies(const MuTable& table,
                                             std::int64_t block_len,
                                             std::int64_t max_blocks);

// Normalized error of the squarefree count against its density:
//   (sum_{n<=x} |mu(n)| - (6/pi^2) x) / sqrt(x).
double squarefree_residual(const MuTable& table, std::int64_t x);

// Standard normal CDF, absolute error well below 1e-10.
double normal_cdf(double x);

// Inverse of normal_cdf on (0, 1), found by bisection; absolute error well
// below 1e-8.  The central quantile K_{alpha/2} is normal_quantile(1-alpha/2).
double normal_quantile(double p);

// Probability that M(n) > C sqrt(n) under the CLT model
// M(n)/sqrt(6n/pi^2) ~ N(0,1):  1 - Phi(C / sqrt(6/pi^2)).  Independent of n.
double mertens_type_prob(double c);

// One report per (n, alpha): the bound value, the exact observed M(n), and
// whether the bound holds.  `quantile` is K_{alpha/2} for the CLT bound and
// the Chebyshev multiplier 1/sqrt(alpha) for the distribution-free bound.
struct BoundReport {
    std::int64_t n = 0;
    double alpha = 0.0;
    double quantile = 0.0;
    double bound = 0.0;
    std::int64_t observed_m = 0;
    bool holds = false;
    bool two_sided = false;
    // Half-width of the confidence interval for the mean of mu,
    // (sigma/sqrt(n)) K_{alpha/2}; zero for the Chebyshev variant.
    double mean_half_width = 0.0;
};

// CLT bound sqrt(6/pi^2) K_{alpha/2} sqrt(n), holding with probability
// 1 - alpha under the model.  One-sided by default (M(n) <= bound);
// two_sided tests |M(n)| <= bound.
BoundReport clt_bound(std::int64_t n, double alpha, const MertensSeries& series,
                      bool two_sided = false);

// Distribution-free bound sqrt(6/pi^2)/sqrt(alpha) * sqrt(n), holding with
// probability > 1 - alpha.  Recomputes M(n) as the sum of (-1)^omega(k) over
// squarefree k <= n and requires it to match the prefix sum exactly.
BoundReport chebyshev_bound(std::int64_t n, double alpha,
                            const MertensSeries& series,
                            const OmegaTable& omega, bool two_sided = false);

// Block sums of mu over disjoint blocks of length block_len, each divided by
// sqrt(6 block_len / pi^2).  Under the CLT model these are approximately
// standard normal; block_len must be at least 10^4 and at least 30 full
// blocks must fit in the table.
Eigen::VectorXd normalized_mertens_samples(const MuTable& table,
                                           std::int64_t block_len);

// Standardized squarefree count up to n:
//   (sum_{k<=n} |mu(k)| - 6n/pi^2) / sqrt(n (6/pi^2)(1 - 6/pi^2)).
double abs_sum_stat(const MuTable& table, std::int64_t n);

// Blockwise version of abs_sum_stat with the same per-block normalization;
// block preconditions as normalized_mertens_samples.
Eigen::VectorXd normalized_abs_sum_samples(const MuTable& table,
                                           std::int64_t block_len);

// Probability that sum_{k<=n} |mu(k)| > C n under the CLT model:
//   1 - Phi((C - 6/pi^2) n / sqrt(n (6/pi^2)(1 - 6/pi^2))).
// Tends to {0, 1/2, 1} for C {>, =, <} 6/pi^2 as n grows.
double abs_sum_exceedance(double c, std::int64_t n);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct HistogramBin {
    double center = 0.0;
    double density = 0.0;
};

// Equal-width density histogram over `range` (right edge closed on the last
// bin); normalized so the bin densities integrate to 1 over the in-range
// samples.  Out-of-range samples are dropped.
std::vector<HistogramBin> histogram(const Eigen::VectorXd& samples,
                                    int bin_count, Interval range);

}  // namespace moebius
