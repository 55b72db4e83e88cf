#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "reactest/rational.hpp"

namespace reactest {

using Variable = std::string;
using Assignment = std::map<Variable, Rational>;

/// Upper bound on the number of terms any polynomial operation may produce.
/// Exceeding it raises ResourceError. Process-wide; default 10^6.
std::size_t term_limit() noexcept;
void set_term_limit(std::size_t limit) noexcept;

/// Power product of variables, stored sorted by variable name.
class Monomial {
public:
    Monomial() = default;

    static Monomial of(const Variable& var, unsigned exponent = 1);

    const std::vector<std::pair<Variable, unsigned>>& powers() const noexcept { return powers_; }
    bool is_one() const noexcept { return powers_.empty(); }
    unsigned degree() const noexcept;

    /// `*this / other` when other divides it.
    std::optional<Monomial> divide(const Monomial& other) const;

    friend Monomial operator*(const Monomial& lhs, const Monomial& rhs);
    friend auto operator<=>(const Monomial&, const Monomial&) = default;
    friend bool operator==(const Monomial&, const Monomial&) = default;

private:
    std::vector<std::pair<Variable, unsigned>> powers_;
};

/// Pure lexicographic monomial order, earlier variable names more significant.
/// Unlike the container order of Monomial this is a proper term order.
bool lex_greater(const Monomial& lhs, const Monomial& rhs);

/// Sparse multivariate polynomial with exact rational coefficients.
/// No stored coefficient is zero.
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational>;

    Polynomial() = default;

    static Polynomial constant(const Rational& value);
    static Polynomial variable(const Variable& var);

    const Terms& terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    /// Coefficient of the constant monomial.
    Rational constant_term() const;

    /// Leading monomial and coefficient with respect to lex_greater.
    /// Precondition: not zero.
    const std::pair<const Monomial, Rational>& leading_term() const;

    std::set<Variable> variables() const;
    Rational evaluate(const Assignment& point) const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Rational& scalar);

    friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
    friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
    friend Polynomial operator*(Polynomial lhs, const Rational& scalar) { return lhs *= scalar; }

    /// Exact quotient `*this / divisor` if divisor divides this polynomial.
    /// Single-divisor division is exact iff the remainder vanishes, so the
    /// search stops at the first leading term the divisor cannot reduce.
    std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;

    friend bool operator==(const Polynomial& lhs, const Polynomial& rhs) {
        return lhs.terms_ == rhs.terms_;
    }
    /// Total order used for canonical sorting (not a term order).
    friend bool operator<(const Polynomial& lhs, const Polynomial& rhs);

private:
    void add_term(const Monomial& m, const Rational& c);
    void check_size() const;

    Terms terms_;
};

/// Deterministic infix rendering, terms in descending lex order,
/// e.g. `1/2*a*a*b + c + 3`. Zero renders as `0`.
std::string to_string(const Polynomial& p);

} // namespace reactest
