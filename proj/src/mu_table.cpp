#include "moebius/mu_table.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "moebius/errors.hpp"
#include "moebius/parallel.hpp"

namespace moebius {

namespace {

template <typename T>
std::vector<T> checked_buffer(std::int64_t count, const char* what) {
    try {
        return std::vector<T>(static_cast<std::size_t>(count));
    } catch (const std::bad_alloc&) {
    } catch (const std::length_error&) {
    }
    throw allocation_error(std::string(what) + ": failed to allocate " +
                           std::to_string(count * static_cast<std::int64_t>(sizeof(T))) +
                           " bytes");
}

}  // namespace

MuTable build_mu_recursive(std::int64_t n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("build_mu_recursive: n_max must be >= 1");
    }
    MuTable table;
    table.n_max = n_max;
    table.provenance = Provenance::Recursive;
    table.values = checked_buffer<std::int8_t>(n_max, "mu table");

    // acc[n] carries -sum of mu(d) over the proper divisors d of n processed
    // so far; once the sweep reaches n the sum is complete and acc[n] = mu(n).
    // Partial sums are bounded by the divisor count, far inside int16 range
    // for any n that fits in memory.
    auto acc = checked_buffer<std::int16_t>(n_max + 1, "divisor-sum accumulator");
    for (std::int64_t k = 1; k <= n_max; ++k) {
        const std::int16_t mu_k = (k == 1) ? std::int16_t{1} : acc[static_cast<std::size_t>(k)];
        table.values[static_cast<std::size_t>(k - 1)] = static_cast<std::int8_t>(mu_k);
        if (mu_k != 0) {
            for (std::int64_t j = 2 * k; j <= n_max; j += k) {
                acc[static_cast<std::size_t>(j)] =
                    static_cast<std::int16_t>(acc[static_cast<std::size_t>(j)] - mu_k);
            }
        }
    }
    return table;
}

int mu_recursive_naive(std::int64_t n, const MuTable& prefix) {
    if (n < 2) {
        throw std::invalid_argument("mu_recursive_naive: n must be >= 2");
    }
    if (prefix.n_max < n - 1) {
        throw std::invalid_argument("mu_recursive_naive: prefix shorter than n-1");
    }
    int sum = 0;
    for (std::int64_t k = 1; k < n; ++k) {
        if (n % k == 0) {
            sum += prefix.value(k);
        }
    }
    return -sum;
}

SieveTables build_mu_sieve(std::int64_t n_max, unsigned threads) {
    if (n_max < 1) {
        throw std::invalid_argument("build_mu_sieve: n_max must be >= 1");
    }
    SieveTables out;
    out.mu.n_max = n_max;
    out.mu.provenance = Provenance::Sieve;
    out.mu.values = checked_buffer<std::int8_t>(n_max, "mu table");
    out.omega.n_max = n_max;
    out.omega.omega = checked_buffer<std::uint8_t>(n_max, "omega table");
    out.mu.values[0] = 1;
    out.omega.omega[0] = 0;
    if (n_max == 1) {
        return out;
    }

    // Sieve of Eratosthenes marking the smallest prime factor of every
    // composite; primes keep spf[p] = p.
    auto spf = checked_buffer<std::uint32_t>(n_max + 1, "smallest-prime-factor sieve");
    for (std::int64_t p = 2; p <= n_max; ++p) {
        if (spf[static_cast<std::size_t>(p)] == 0) {
            spf[static_cast<std::size_t>(p)] = static_cast<std::uint32_t>(p);
            for (std::int64_t j = p * p; j <= n_max; j += p) {
                if (spf[static_cast<std::size_t>(j)] == 0) {
                    spf[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(p);
                }
            }
        }
    }

    // Factor every n through spf: mu from squarefreeness and the parity of
    // the distinct-prime count, omega from the count itself.  Chunks write
    // disjoint ranges, so any worker count gives identical tables.
    parallel_chunks(2, n_max + 1, /*chunk=*/1 << 16, threads,
                    [&](std::int64_t lo, std::int64_t hi) {
                        for (std::int64_t n = lo; n < hi; ++n) {
                            std::int64_t rest = n;
                            int distinct = 0;
                            bool squarefree = true;
                            while (rest > 1) {
                                const std::int64_t p = spf[static_cast<std::size_t>(rest)];
                                int exponent = 0;
                                do {
                                    rest /= p;
                                    ++exponent;
                                } while (rest % p == 0);
                                squarefree = squarefree && exponent == 1;
                                ++distinct;
                            }
                            out.omega.omega[static_cast<std::size_t>(n - 1)] =
                                static_cast<std::uint8_t>(distinct);
                            out.mu.values[static_cast<std::size_t>(n - 1)] =
                                squarefree ? static_cast<std::int8_t>((distinct & 1) ? -1 : 1)
                                           : std::int8_t{0};
                        }
                    });
    return out;
}

int mu_root_of_unity(std::int64_t n, std::int64_t n_limit) {
    if (n < 1 || n > n_limit) {
        throw std::invalid_argument("mu_root_of_unity: n must be in [1, " +
                                    std::to_string(n_limit) + "]");
    }
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    double re = 0.0;
    double im = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
        if (std::gcd(k, n) == 1) {
            const double angle = step * static_cast<double>(k);
            re += std::cos(angle);
            im += std::sin(angle);
        }
    }
    const double rounded = std::nearbyint(re);
    if (std::abs(im) >= 1e-6 || std::abs(re - rounded) >= 1e-6 ||
        std::abs(rounded) > 1.0) {
        throw numerical_error("mu_root_of_unity: sum for n=" + std::to_string(n) +
                              " does not round to a trit (re=" + std::to_string(re) +
                              ", im=" + std::to_string(im) + ")");
    }
    return static_cast<int>(rounded);
}

MertensSeries mertens_prefix(const MuTable& table) {
    if (table.n_max < 1 || table.values.empty()) {
        throw std::invalid_argument("mertens_prefix: table is empty");
    }
    MertensSeries series;
    series.n_max = table.n_max;
    series.m = checked_buffer<std::int64_t>(table.n_max, "mertens series");
    std::int64_t sum = 0;
    for (std::int64_t n = 1; n <= table.n_max; ++n) {
        sum += table.values[static_cast<std::size_t>(n - 1)];
        series.m[static_cast<std::size_t>(n - 1)] = sum;
    }
    return series;
}

Eigen::VectorXd running_mean(const MertensSeries& series) {
    if (series.n_max < 1 || series.m.empty()) {
        throw std::invalid_argument("running_mean: series is empty");
    }
    Eigen::VectorXd mean(series.n_max);
    for (std::int64_t n = 1; n <= series.n_max; ++n) {
        mean[n - 1] = static_cast<double>(series.m[static_cast<std::size_t>(n - 1)]) /
                      static_cast<double>(n);
    }
    return mean;
}

}  // namespace moebius
