#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace moebius {

enum class Provenance { Recursive, Sieve, Loaded };

// mu(1..n_max), one signed byte per index; every entry is in {-1, 0, +1}
// and mu(1) = +1.  A completed table is immutable and safe to share among
// concurrent readers.
struct MuTable {
    std::int64_t n_max = 0;
    std::vector<std::int8_t> values;  // values[n-1] = mu(n)
    Provenance provenance = Provenance::Loaded;

    std::int8_t value(std::int64_t n) const {
        return values[static_cast<std::size_t>(n - 1)];
    }
};

// omega(n) = number of distinct prime factors; omega(1) = 0 and for
// squarefree n, mu(n) = (-1)^omega(n).
struct OmegaTable {
    std::int64_t n_max = 0;
    std::vector<std::uint8_t> omega;  // omega[n-1] = omega(n)

    std::uint8_t value(std::int64_t n) const {
        return omega[static_cast<std::size_t>(n - 1)];
    }
};

// Mertens function M(n) = sum_{k<=n} mu(k) as exact signed integers.
// |M(n)| <= n, so a 64-bit accumulator cannot overflow for any table
// that fits in memory.
struct MertensSeries {
    std::int64_t n_max = 0;
    std::vector<std::int64_t> m;  // m[n-1] = M(n)

    std::int64_t value(std::int64_t n) const {
        return m[static_cast<std::size_t>(n - 1)];
    }
};

struct SieveTables {
    MuTable mu;
    OmegaTable omega;
};

// All-values computation of mu from the divisor-sum recurrence
//   mu(1) = 1,   mu(n) = -sum_{d | n, d < n} mu(d)    (n >= 2)
// realized as a forward sweep (each finished mu(k) is pushed to every proper
// multiple of k), O(n_max log n_max) total work.
MuTable build_mu_recursive(std::int64_t n_max);

// The same recurrence evaluated literally for a single n by trial division
// over every k < n.  A structurally different realization used to cross-check
// the sweep; prefix must be correct up to n-1.
int mu_recursive_naive(std::int64_t n, const MuTable& prefix);

// Independent oracle sharing no code path with the recurrence: a smallest-
// prime-factor sieve of Eratosthenes, mu read off each factorization
// (0 when a prime square divides n, else (-1)^#distinct primes) and omega
// counted alongside.  The factorization pass may be split across `threads`
// workers; the output is byte-identical for any worker count.
SieveTables build_mu_sieve(std::int64_t n_max, unsigned threads = 1);

// mu(n) as the sum of the primitive n-th roots of unity,
//   sum over 1 <= k <= n, gcd(k, n) = 1 of exp(2*pi*i*k/n).
// O(n) gcd evaluations per call, so n is capped by n_limit.  The imaginary
// part must vanish and the real part must round to a trit within 1e-6;
// anything else throws numerical_error rather than rounding silently.
int mu_root_of_unity(std::int64_t n, std::int64_t n_limit = 10'000);

// Prefix sums M(n) of a mu table, exact integer arithmetic.
MertensSeries mertens_prefix(const MuTable& table);

// M(n)/n for n = 1..n_max; values lie in [-1, 1].
Eigen::VectorXd running_mean(const MertensSeries& series);

}  // namespace moebius
