#include "moebius/matrices.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace moebius {

namespace {

void check_dimension(Eigen::Index n, Eigen::Index limit, const char* what) {
    if (n < 1) {
        throw std::invalid_argument(std::string(what) + ": dimension must be >= 1");
    }
    if (n > limit) {
        throw std::invalid_argument(std::string(what) + ": dimension " +
                                    std::to_string(n) + " exceeds the dense limit " +
                                    std::to_string(limit));
    }
}

using Int128 = __int128;
using BigInt = boost::multiprecision::cpp_int;

// Internal signal: a 128-bit intermediate would overflow; redo in BigInt.
struct escalate_to_bigint {};

Int128 checked_mul(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw escalate_to_bigint{};
    }
    return r;
}

Int128 checked_sub(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_sub_overflow(a, b, &r)) {
        throw escalate_to_bigint{};
    }
    return r;
}

BigInt checked_mul(const BigInt& a, const BigInt& b) { return a * b; }
BigInt checked_sub(const BigInt& a, const BigInt& b) { return a - b; }

Int128 abs_value(Int128 a) { return a < 0 ? -a : a; }
BigInt abs_value(const BigInt& a) { return abs(a); }

// Fraction-free elimination: every division below is exact, intermediate
// entries are minors of the input, and the final pivot is the determinant.
// Row pivoting on the largest entry keeps growth modest and handles zero
// pivots; a fully zero pivot column means a zero determinant.
template <typename Scalar>
Scalar bareiss_eliminate(const Int64Matrix& a) {
    const Eigen::Index n = a.rows();
    std::vector<Scalar> m(static_cast<std::size_t>(n * n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m[static_cast<std::size_t>(i * n + j)] = Scalar(a(i, j));
        }
    }
    auto at = [&](Eigen::Index i, Eigen::Index j) -> Scalar& {
        return m[static_cast<std::size_t>(i * n + j)];
    };

    bool negate = false;
    Scalar previous_pivot = Scalar(1);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        Eigen::Index pivot_row = k;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (abs_value(at(i, k)) > abs_value(at(pivot_row, k))) {
                pivot_row = i;
            }
        }
        if (at(pivot_row, k) == 0) {
            return Scalar(0);
        }
        if (pivot_row != k) {
            for (Eigen::Index j = k; j < n; ++j) {
                std::swap(at(k, j), at(pivot_row, j));
            }
            negate = !negate;
        }
        const Scalar pivot = at(k, k);
        for (Eigen::Index i = k + 1; i < n; ++i) {
            for (Eigen::Index j = k + 1; j < n; ++j) {
                const Scalar numerator =
                    checked_sub(checked_mul(at(i, j), pivot),
                                checked_mul(at(i, k), at(k, j)));
                at(i, j) = numerator / previous_pivot;
            }
            at(i, k) = Scalar(0);
        }
        previous_pivot = pivot;
    }
    const Scalar det = at(n - 1, n - 1);
    return negate ? Scalar(-det) : det;
}

std::int64_t narrow_to_int64(Int128 v) {
    if (v > Int128(INT64_MAX) || v < Int128(INT64_MIN)) {
        throw std::overflow_error("determinant does not fit in 64 bits");
    }
    return static_cast<std::int64_t>(v);
}

std::int64_t narrow_to_int64(const BigInt& v) {
    if (v > BigInt(INT64_MAX) || v < BigInt(INT64_MIN)) {
        throw std::overflow_error("determinant does not fit in 64 bits");
    }
    return v.convert_to<std::int64_t>();
}

}  // namespace

Int64Matrix divisibility_matrix(Eigen::Index n, Eigen::Index limit) {
    check_dimension(n, limit, "divisibility_matrix");
    Int64Matrix u = Int64Matrix::Zero(n, n);
    for (Eigen::Index i = 1; i <= n; ++i) {
        for (Eigen::Index j = i; j <= n; j += i) {
            u(i - 1, j - 1) = 1;
        }
    }
    return u;
}

Int64Matrix mobius_inverse_matrix(Eigen::Index n, const MuTable& mu,
                                  Eigen::Index limit) {
    check_dimension(n, limit, "mobius_inverse_matrix");
    if (mu.n_max < n) {
        throw std::invalid_argument("mobius_inverse_matrix: mu table shorter than n");
    }
    Int64Matrix v = Int64Matrix::Zero(n, n);
    for (Eigen::Index i = 1; i <= n; ++i) {
        for (Eigen::Index j = i; j <= n; j += i) {
            v(i - 1, j - 1) = mu.value(j / i);
        }
    }
    return v;
}

Int64Matrix redheffer_matrix(Eigen::Index n, Eigen::Index limit) {
    check_dimension(n, limit, "redheffer_matrix");
    Int64Matrix r = divisibility_matrix(n, limit);
    for (Eigen::Index i = 1; i < n; ++i) {
        r(i, 0) = 1;
    }
    return r;
}

Int64Matrix redheffer_border(Eigen::Index n, Eigen::Index limit) {
    check_dimension(n, limit, "redheffer_border");
    Int64Matrix s = Int64Matrix::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) {
        s(i, 0) = 1;
    }
    return s;
}

bool verify_inverse(Eigen::Index n, const MuTable& mu, Eigen::Index limit) {
    const Int64Matrix u = divisibility_matrix(n, limit);
    const Int64Matrix v = mobius_inverse_matrix(n, mu, limit);
    const Int64Matrix id = Int64Matrix::Identity(n, n);
    // Entries of U and V are trits, so the int64 products are exact.
    return ((u * v) - id).cwiseAbs().maxCoeff() == 0 &&
           ((v * u) - id).cwiseAbs().maxCoeff() == 0;
}

std::int64_t bareiss_determinant(const Int64Matrix& a) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw std::invalid_argument("bareiss_determinant: matrix must be square and nonempty");
    }
    try {
        return narrow_to_int64(bareiss_eliminate<Int128>(a));
    } catch (const escalate_to_bigint&) {
        return narrow_to_int64(bareiss_eliminate<BigInt>(a));
    }
}

std::int64_t redheffer_determinant(Eigen::Index n, Eigen::Index limit) {
    return bareiss_determinant(redheffer_matrix(n, limit));
}

}  // namespace moebius
