#include "reactest/lemma.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace reactest {

namespace {

std::string b_name(unsigned k) { return "b" + std::to_string(k); }

} // namespace

Matrix<RationalFn> escape_test_matrix(unsigned n) {
    if (n < 1 || n > kMaxEscapeMatrixOrder) {
        throw std::out_of_range("escape test matrix order must be in [1, " +
                                std::to_string(kMaxEscapeMatrixOrder) + "]");
    }
    const RationalFn a1 = rf_var("a1");
    const RationalFn one = rf_const(1);

    // First-row denominators are tracked alongside so the doubling step can
    // append b_{n+1} without re-deriving them from the fractions.
    Matrix<RationalFn> q = {{a1 / a1, a1 / (a1 + rf_var(b_name(1)))}, {one, one}};
    std::vector<RationalFn> first_row_sums = {a1, a1 + rf_var(b_name(1))};

    for (unsigned order = 1; order < n; ++order) {
        const std::size_t half = q.size();
        const std::size_t size = 2 * half;
        Matrix<RationalFn> next(size, std::vector<RationalFn>(size));
        for (std::size_t i = 0; i < half; ++i) {
            for (std::size_t j = 0; j < half; ++j) {
                next[i][j] = q[i][j];
            }
        }
        next[half][half - 1] = one;
        next[half][size - 1] = one;
        for (std::size_t i = half + 1; i < size; ++i) {
            for (std::size_t j = half; j < size; ++j) {
                next[i][j] = q[i - half][j - half];
            }
        }
        const RationalFn b_new = rf_var(b_name(order + 1));
        for (std::size_t j = 0; j < half; ++j) {
            const RationalFn sum = first_row_sums[j] + b_new;
            next[0][half + j] = a1 / sum;
            first_row_sums.push_back(sum);
        }
        q = std::move(next);
    }
    return q;
}

Rational determinant(Matrix<Rational> m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t row = col + 1; row < n; ++row) {
            if (m[row][col] == 0) continue;
            const Rational factor = m[row][col] / m[col][col];
            for (std::size_t k = col; k < n; ++k) {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    return det;
}

Rational escape_matrix_det_at(unsigned n, const Assignment& point) {
    const auto q = escape_test_matrix(n);
    Matrix<Rational> values(q.size(), std::vector<Rational>(q.size()));
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            values[i][j] = rf_eval(q[i][j], point);
        }
    }
    return determinant(std::move(values));
}

Rational lemma1_det(unsigned n, std::uint64_t seed) {
    if (n < 1 || n > kMaxEscapeMatrixOrder) {
        throw std::out_of_range("escape test matrix order must be in [1, " +
                                std::to_string(kMaxEscapeMatrixOrder) + "]");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned> pick(1, 1000);
    auto sample = [&]() -> Rational { return Rational{pick(rng)} / Rational{pick(rng)}; };
    Assignment point;
    point["a1"] = sample();
    for (unsigned k = 1; k <= n; ++k) {
        point[b_name(k)] = sample();
    }
    return escape_matrix_det_at(n, point);
}

} // namespace reactest
