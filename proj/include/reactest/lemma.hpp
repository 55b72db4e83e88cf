#pragma once

#include <cstdint>
#include <vector>

#include "reactest/rational.hpp"
#include "reactest/rational_fn.hpp"

namespace reactest {

template <typename T>
using Matrix = std::vector<std::vector<T>>;

/// Largest n accepted by the escape-test matrix builders (the matrix is
/// 2^n x 2^n).
inline constexpr unsigned kMaxEscapeMatrixOrder = 3;

/// The 2^n x 2^n coefficient matrix relating the outcomes of the escape tests
/// `a1.T1 + sum_{j in J'} bj.omega` to the per-menu-class unknowns.
///
/// Built by doubling: Q_{n+1} holds Q_n in its upper-left block, Q_n minus its
/// first row in the lower-right block, ones at (2^n+1, 2^n) and
/// (2^n+1, 2^(n+1)) (1-based), and extends the first row with the fractions
/// a1/(a1 + sum_K bk + b_{n+1}). Variables are named `a1`, `b1` ... `bn`.
/// Throws std::out_of_range unless 1 <= n <= kMaxEscapeMatrixOrder.
Matrix<RationalFn> escape_test_matrix(unsigned n);

/// Exact determinant by fraction-preserving Gaussian elimination.
Rational determinant(Matrix<Rational> m);

/// Determinant of escape_test_matrix(n) at a pseudo-random strictly positive
/// rational point derived from `seed` (numerators and denominators in
/// [1, 1000]).
Rational lemma1_det(unsigned n, std::uint64_t seed);

/// Same, at an explicit point.
Rational escape_matrix_det_at(unsigned n, const Assignment& point);

} // namespace reactest
