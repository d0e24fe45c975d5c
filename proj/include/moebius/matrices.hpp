#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "moebius/mu_table.hpp"

namespace moebius {

// Exact integer realizations of the matrix identities behind the divisor-sum
// recurrence:
//
//   U = { u_ij },  u_ij = 1  iff  i | j          (divisibility indicator)
//   V = { v_ij },  v_ij = mu(j/i) if i | j else 0
//   R = { r_ij },  r_ij = 1  iff  j = 1 or i | j (Redheffer matrix)
//
// U V = V U = I, R = S + U with s_ij = 1 iff j = 1 and i != 1, the first row
// of V is mu(1..n), and det(R_n) = M(n), the Mertens function.  These exist
// for verification, not scale: everything is dense and exact, guarded by a
// dimension limit.

using Int64Matrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr Eigen::Index kDenseDimensionLimit = 512;

Int64Matrix divisibility_matrix(Eigen::Index n,
                                Eigen::Index limit = kDenseDimensionLimit);

// Requires mu.n_max >= n.
Int64Matrix mobius_inverse_matrix(Eigen::Index n, const MuTable& mu,
                                  Eigen::Index limit = kDenseDimensionLimit);

Int64Matrix redheffer_matrix(Eigen::Index n,
                             Eigen::Index limit = kDenseDimensionLimit);

// The rank-one border S of the decomposition R = S + U.
Int64Matrix redheffer_border(Eigen::Index n,
                             Eigen::Index limit = kDenseDimensionLimit);

// Exact integer products U*V and V*U compared against the identity.
bool verify_inverse(Eigen::Index n, const MuTable& mu,
                    Eigen::Index limit = kDenseDimensionLimit);

// Exact determinant by fraction-free (Bareiss) elimination.  Runs in checked
// 128-bit arithmetic and escalates the whole elimination to arbitrary
// precision if any intermediate would overflow -- never wraps.  Throws
// std::overflow_error if the determinant itself exceeds the int64 range.
std::int64_t bareiss_determinant(const Int64Matrix& a);

// det(R_n), which equals M(n) exactly.
std::int64_t redheffer_determinant(Eigen::Index n,
                                   Eigen::Index limit = kDenseDimensionLimit);

}  // namespace moebius
