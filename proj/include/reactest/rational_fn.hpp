#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reactest/polynomial.hpp"
#include "reactest/rational.hpp"

namespace reactest {

/// Exact multivariate rational function over action-name variables,
/// closed under `+`, `*` and `/` with non-negative scalars.
///
/// The value is `numerator / (f1^k1 * ... * fn^kn)`. Denominator factors are
/// normalized (leading coefficient one under lex order, no constants), kept
/// sorted, and compared exactly; after every operation each factor is tried
/// as an exact divisor of the numerator. There is no GCD computation, so two
/// equal functions may have different representations: compare with rf_eq.
class RationalFn {
public:
    using Factor = std::pair<Polynomial, unsigned>;

    /// The zero function.
    RationalFn() = default;

    static RationalFn constant(const Rational& value);
    static RationalFn variable(std::string_view name);

    const Polynomial& numerator() const noexcept { return numerator_; }
    const std::vector<Factor>& denominator_factors() const noexcept { return factors_; }
    /// Expanded product of the denominator factors.
    Polynomial denominator() const;

    bool is_zero() const noexcept { return numerator_.is_zero(); }
    /// True when the representation carries no variables at all.
    bool is_scalar() const noexcept { return factors_.empty() && numerator_.is_constant(); }
    /// Value of a scalar function. Precondition: is_scalar().
    Rational scalar_value() const;
    std::set<Variable> variables() const;

    friend RationalFn operator+(const RationalFn& lhs, const RationalFn& rhs);
    friend RationalFn operator*(const RationalFn& lhs, const RationalFn& rhs);
    friend RationalFn operator/(const RationalFn& lhs, const RationalFn& rhs);
    RationalFn& operator+=(const RationalFn& rhs) { return *this = *this + rhs; }
    RationalFn& operator*=(const RationalFn& rhs) { return *this = *this * rhs; }

    /// Representation identity. Implies semantic equality, not conversely.
    friend bool operator==(const RationalFn& lhs, const RationalFn& rhs) {
        return lhs.numerator_ == rhs.numerator_ && lhs.factors_ == rhs.factors_;
    }

private:
    RationalFn(Polynomial numerator, std::vector<Factor> factors);
    void normalize();

    Polynomial numerator_;
    std::vector<Factor> factors_;
};

RationalFn rf_const(const Rational& value);
/// Throws std::invalid_argument for the reserved success symbol or a
/// malformed name.
RationalFn rf_var(std::string_view name);
RationalFn rf_add(const RationalFn& x, const RationalFn& y);
RationalFn rf_mul(const RationalFn& x, const RationalFn& y);
/// Throws std::domain_error when y is the zero function.
RationalFn rf_div(const RationalFn& x, const RationalFn& y);

/// Semantic equality on the positive orthant: cross-multiply over the least
/// common multiple of the two factor lists and compare expanded numerators.
bool rf_eq(const RationalFn& x, const RationalFn& y);

/// Exact evaluation. Every variable of x must be assigned a strictly
/// positive value (std::invalid_argument / std::domain_error otherwise).
Rational rf_eval(const RationalFn& x, const Assignment& point);

/// Infix rendering: sums are parenthesized whenever they are operands,
/// scalars appear as `p/q`, e.g. `1/2*h/(h + t)`. Deterministic for a
/// given representation.
std::string to_string(const RationalFn& x);

/// Parses the grammar produced by to_string: non-negative integers,
/// action names, `+`, `*`, `/` and parentheses.
RationalFn parse_rational_fn(std::string_view text);

} // namespace reactest
