#include "moebius/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace moebius {

namespace {

constexpr double kQ = kSquarefreeDensity;

// Smallest block length for which the per-block sums are treated as
// CLT-regime samples, and the minimum number of full blocks required.
constexpr std::int64_t kCltMinBlockLen = 10'000;
constexpr std::int64_t kCltMinBlocks = 30;

double upper_tail(double z) {
    // 1 - Phi(z), computed through erfc to keep the far tail exact.
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

void check_alpha(double alpha, const char* what) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 1.0) {
        throw std::invalid_argument(std::string(what) + ": alpha must be in (0, 1)");
    }
}

void check_block_scheme(const MuTable& table, std::int64_t block_len,
                        const char* what) {
    if (block_len < kCltMinBlockLen) {
        throw std::invalid_argument(std::string(what) + ": block length below the CLT regime (" +
                                    std::to_string(kCltMinBlockLen) + ")");
    }
    if (table.n_max / block_len < kCltMinBlocks) {
        throw std::invalid_argument(std::string(what) + ": fewer than " +
                                    std::to_string(kCltMinBlocks) + " full blocks available");
    }
}

}  // namespace

DistributionRule theoretical_distribution(bool absolute) {
    DistributionRule rule;
    if (absolute) {
        rule.support = {0, 1};
        rule.probs = {1.0 - kQ, kQ};
        rule.mean = kQ;
        rule.variance = kQ * (1.0 - kQ);
    } else {
        rule.support = {-1, 0, 1};
        rule.probs = {kQ / 2.0, 1.0 - kQ, kQ / 2.0};
        rule.mean = 0.0;
        rule.variance = kQ;
    }
    return rule;
}

std::vector<BlockStatsRow> block_frequencies(const MuTable& table,
                                             std::int64_t block_len,
                                             std::int64_t max_blocks) {
    if (block_len < 1 || max_blocks < 1) {
        throw std::invalid_argument("block_frequencies: empty partition");
    }
    if (max_blocks > table.n_max / block_len) {
        throw std::invalid_argument("block_frequencies: partition exceeds the table");
    }
    std::vector<BlockStatsRow> rows;
    rows.reserve(static_cast<std::size_t>(max_blocks));
    for (std::int64_t b = 0; b < max_blocks; ++b) {
        BlockStatsRow row;
        row.block_index = b + 1;
        row.block_len = block_len;
        const std::int64_t base = b * block_len;
        for (std::int64_t i = 0; i < block_len; ++i) {
            const std::int8_t v = table.values[static_cast<std::size_t>(base + i)];
            if (v < 0) {
                ++row.count_minus;
            } else if (v == 0) {
                ++row.count_zero;
            } else {
                ++row.count_plus;
            }
        }
        const double len = static_cast<double>(block_len);
        row.pe_minus = static_cast<double>(row.count_minus) / len;
        row.pe_zero = static_cast<double>(row.count_zero) / len;
        row.pe_plus = static_cast<double>(row.count_plus) / len;
        rows.push_back(row);
    }
    return rows;
}

double squarefree_residual(const MuTable& table, std::int64_t x) {
    if (x < 1) {
        throw std::invalid_argument("squarefree_residual: x must be >= 1");
    }
    if (x > table.n_max) {
        throw std::invalid_argument("squarefree_residual: x exceeds the table");
    }
    std::int64_t squarefree = 0;
    for (std::int64_t n = 0; n < x; ++n) {
        squarefree += table.values[static_cast<std::size_t>(n)] != 0;
    }
    return (static_cast<double>(squarefree) - kQ * static_cast<double>(x)) /
           std::sqrt(static_cast<double>(x));
}

double normal_cdf(double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("normal_cdf: input must be finite");
    }
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    if (!std::isfinite(p) || p <= 0.0 || p >= 1.0) {
        throw std::invalid_argument("normal_quantile: p must be in (0, 1)");
    }
    // Phi is strictly increasing; 120 bisection steps shrink [-40, 40] to
    // well below double resolution.
    double lo = -40.0;
    double hi = 40.0;
    for (int iter = 0; iter < 120 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (normal_cdf(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double mertens_type_prob(double c) {
    if (!std::isfinite(c) || c <= 0.0) {
        throw std::invalid_argument("mertens_type_prob: C must be positive");
    }
    return upper_tail(c / std::sqrt(kQ));
}

BoundReport clt_bound(std::int64_t n, double alpha, const MertensSeries& series,
                      bool two_sided) {
    check_alpha(alpha, "clt_bound");
    if (n < 1 || n > series.n_max) {
        throw std::invalid_argument("clt_bound: n outside the series");
    }
    BoundReport report;
    report.n = n;
    report.alpha = alpha;
    report.two_sided = two_sided;
    report.quantile = normal_quantile(1.0 - alpha / 2.0);
    const double sigma = std::sqrt(kQ);
    const double root_n = std::sqrt(static_cast<double>(n));
    report.bound = sigma * report.quantile * root_n;
    report.mean_half_width = sigma / root_n * report.quantile;
    report.observed_m = series.value(n);
    const double observed = static_cast<double>(report.observed_m);
    report.holds = two_sided ? std::abs(observed) <= report.bound
                             : observed <= report.bound;
    return report;
}

BoundReport chebyshev_bound(std::int64_t n, double alpha,
                            const MertensSeries& series, const OmegaTable& omega,
                            bool two_sided) {
    check_alpha(alpha, "chebyshev_bound");
    if (n < 1 || n > series.n_max || n > omega.n_max) {
        throw std::invalid_argument("chebyshev_bound: n outside the series or omega table");
    }
    // M(n) recomputed as sum of (-1)^omega(k) over squarefree k <= n; the
    // squarefree indicator is recovered from the series steps (mu(k) != 0)
    // while the sign comes from omega, so the two tables must agree.
    std::int64_t recomputed = 0;
    std::int64_t previous = 0;
    for (std::int64_t k = 1; k <= n; ++k) {
        const std::int64_t mk = series.value(k);
        if (mk != previous) {
            recomputed += (omega.value(k) & 1) ? -1 : 1;
        }
        previous = mk;
    }
    if (recomputed != series.value(n)) {
        throw std::invalid_argument(
            "chebyshev_bound: squarefree recomputation of M(n) disagrees with the "
            "prefix sum (series and omega tables are inconsistent)");
    }
    BoundReport report;
    report.n = n;
    report.alpha = alpha;
    report.two_sided = two_sided;
    report.quantile = 1.0 / std::sqrt(alpha);
    report.bound = std::sqrt(kQ) / std::sqrt(alpha) * std::sqrt(static_cast<double>(n));
    report.mean_half_width = 0.0;
    report.observed_m = recomputed;
    const double observed = static_cast<double>(report.observed_m);
    report.holds = two_sided ? std::abs(observed) <= report.bound
                             : observed <= report.bound;
    return report;
}

Eigen::VectorXd normalized_mertens_samples(const MuTable& table,
                                           std::int64_t block_len) {
    check_block_scheme(table, block_len, "normalized_mertens_samples");
    const std::int64_t blocks = table.n_max / block_len;
    const double scale =
        1.0 / std::sqrt(6.0 * static_cast<double>(block_len) /
                        (std::numbers::pi * std::numbers::pi));
    Eigen::VectorXd samples(blocks);
    for (std::int64_t b = 0; b < blocks; ++b) {
        std::int64_t sum = 0;
        const std::int64_t base = b * block_len;
        for (std::int64_t i = 0; i < block_len; ++i) {
            sum += table.values[static_cast<std::size_t>(base + i)];
        }
        samples[b] = static_cast<double>(sum) * scale;
    }
    return samples;
}

double abs_sum_stat(const MuTable& table, std::int64_t n) {
    if (n < 1) {
        throw std::invalid_argument("abs_sum_stat: n must be >= 1");
    }
    if (n > table.n_max) {
        throw std::invalid_argument("abs_sum_stat: n exceeds the table");
    }
    std::int64_t squarefree = 0;
    for (std::int64_t k = 0; k < n; ++k) {
        squarefree += table.values[static_cast<std::size_t>(k)] != 0;
    }
    const double nn = static_cast<double>(n);
    return (static_cast<double>(squarefree) - kQ * nn) /
           std::sqrt(nn * kQ * (1.0 - kQ));
}

Eigen::VectorXd normalized_abs_sum_samples(const MuTable& table,
                                           std::int64_t block_len) {
    check_block_scheme(table, block_len, "normalized_abs_sum_samples");
    const std::int64_t blocks = table.n_max / block_len;
    const double len = static_cast<double>(block_len);
    const double denom = std::sqrt(len * kQ * (1.0 - kQ));
    Eigen::VectorXd samples(blocks);
    for (std::int64_t b = 0; b < blocks; ++b) {
        std::int64_t squarefree = 0;
        const std::int64_t base = b * block_len;
        for (std::int64_t i = 0; i < block_len; ++i) {
            squarefree += table.values[static_cast<std::size_t>(base + i)] != 0;
        }
        samples[b] = (static_cast<double>(squarefree) - kQ * len) / denom;
    }
    return samples;
}

double abs_sum_exceedance(double c, std::int64_t n) {
    if (n < 1) {
        throw std::invalid_argument("abs_sum_exceedance: n must be >= 1");
    }
    if (!std::isfinite(c)) {
        throw std::invalid_argument("abs_sum_exceedance: C must be finite");
    }
    const double nn = static_cast<double>(n);
    const double z = (c - kQ) * nn / std::sqrt(nn * kQ * (1.0 - kQ));
    return upper_tail(z);
}

std::vector<HistogramBin> histogram(const Eigen::VectorXd& samples,
                                    int bin_count, Interval range) {
    if (samples.size() == 0) {
        throw std::invalid_argument("histogram: no samples");
    }
    if (bin_count < 1) {
        throw std::invalid_argument("histogram: bin_count must be >= 1");
    }
    if (!(range.lo < range.hi)) {
        throw std::invalid_argument("histogram: empty range");
    }
    const double width = (range.hi - range.lo) / bin_count;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(bin_count), 0);
    std::int64_t in_range = 0;
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
        const double x = samples[i];
        if (x < range.lo || x > range.hi) {
            continue;
        }
        auto bin = static_cast<std::int64_t>((x - range.lo) / width);
        if (bin >= bin_count) {
            bin = bin_count - 1;  // right edge belongs to the last bin
        }
        ++counts[static_cast<std::size_t>(bin)];
        ++in_range;
    }
    if (in_range == 0) {
        throw std::invalid_argument("histogram: all samples fall outside the range");
    }
    std::vector<HistogramBin> bins(static_cast<std::size_t>(bin_count));
    const double norm = 1.0 / (static_cast<double>(in_range) * width);
    for (int b = 0; b < bin_count; ++b) {
        bins[static_cast<std::size_t>(b)].center = range.lo + (b + 0.5) * width;
        bins[static_cast<std::size_t>(b)].density =
            static_cast<double>(counts[static_cast<std::size_t>(b)]) * norm;
    }
    return bins;
}

}  // namespace moebius
