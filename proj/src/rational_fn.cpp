#include "reactest/rational_fn.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "reactest/action.hpp"
#include "reactest/errors.hpp"

namespace reactest {

namespace {

using Factor = RationalFn::Factor;

Polynomial power_product(const Polynomial& base, const std::vector<Factor>& factors,
                         const auto& exponent_of) {
    Polynomial out = base;
    for (const auto& factor : factors) {
        const unsigned k = exponent_of(factor);
        for (unsigned i = 0; i < k; ++i) {
            out = out * factor.first;
        }
    }
    return out;
}

unsigned multiplicity(const std::vector<Factor>& factors, const Polynomial& f) {
    for (const auto& [g, k] : factors) {
        if (g == f) return k;
    }
    return 0;
}

std::vector<Factor> lcm(const std::vector<Factor>& x, const std::vector<Factor>& y) {
    std::vector<Factor> out = x;
    for (const auto& [f, k] : y) {
        auto it = std::find_if(out.begin(), out.end(), [&](const Factor& g) { return g.first == f; });
        if (it == out.end()) {
            out.emplace_back(f, k);
        } else {
            it->second = std::max(it->second, k);
        }
    }
    return out;
}

// Both numerators lifted to the common denominator `common`.
std::pair<Polynomial, Polynomial> lift(const RationalFn& x, const RationalFn& y,
                                       const std::vector<Factor>& common) {
    auto lifted = [&common](const RationalFn& r) {
        return power_product(r.numerator(), common, [&r](const Factor& f) {
            return f.second - multiplicity(r.denominator_factors(), f.first);
        });
    };
    return {lifted(x), lifted(y)};
}

} // namespace

RationalFn::RationalFn(Polynomial numerator, std::vector<Factor> factors)
    : numerator_(std::move(numerator)), factors_(std::move(factors)) {
    normalize();
}

void RationalFn::normalize() {
    if (numerator_.is_zero()) {
        factors_.clear();
        return;
    }
    std::vector<Factor> merged;
    for (auto& [f, k] : factors_) {
        if (k == 0) {
            continue;
        }
        if (f.is_constant()) {
            const Rational c = f.constant_term();
            for (unsigned i = 0; i < k; ++i) numerator_ *= Rational{1} / c;
            continue;
        }
        const Rational lead = f.leading_term().second;
        if (lead != 1) {
            f *= Rational{1} / lead;
            for (unsigned i = 0; i < k; ++i) numerator_ *= Rational{1} / lead;
        }
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&f](const Factor& g) { return g.first == f; });
        if (it == merged.end()) {
            merged.emplace_back(std::move(f), k);
        } else {
            it->second += k;
        }
    }
    for (auto& [f, k] : merged) {
        while (k > 0) {
            auto quotient = numerator_.divide_exact(f);
            if (!quotient) break;
            numerator_ = std::move(*quotient);
            --k;
        }
    }
    std::erase_if(merged, [](const Factor& f) { return f.second == 0; });
    std::sort(merged.begin(), merged.end(),
              [](const Factor& a, const Factor& b) { return a.first < b.first; });
    factors_ = std::move(merged);
}

RationalFn RationalFn::constant(const Rational& value) {
    if (value < 0) {
        throw std::invalid_argument("scalars must be non-negative");
    }
    return RationalFn{Polynomial::constant(value), {}};
}

RationalFn RationalFn::variable(std::string_view name) {
    if (is_reserved_name(name)) {
        throw std::invalid_argument("the success symbol cannot be used as a variable");
    }
    if (!is_action_name(name)) {
        throw std::invalid_argument("not an action name: '" + std::string(name) + "'");
    }
    return RationalFn{Polynomial::variable(std::string(name)), {}};
}

Polynomial RationalFn::denominator() const {
    return power_product(Polynomial::constant(1), factors_, [](const Factor& f) { return f.second; });
}

Rational RationalFn::scalar_value() const {
    if (!is_scalar()) {
        throw std::logic_error("rational function is not a scalar: " + to_string(*this));
    }
    return numerator_.constant_term();
}

std::set<Variable> RationalFn::variables() const {
    auto vars = numerator_.variables();
    for (const auto& [f, k] : factors_) {
        auto more = f.variables();
        vars.insert(more.begin(), more.end());
    }
    return vars;
}

RationalFn operator+(const RationalFn& lhs, const RationalFn& rhs) {
    if (lhs.is_zero()) return rhs;
    if (rhs.is_zero()) return lhs;
    if (lhs.factors_ == rhs.factors_) {
        return RationalFn{lhs.numerator_ + rhs.numerator_, lhs.factors_};
    }
    auto common = lcm(lhs.factors_, rhs.factors_);
    auto [l, r] = lift(lhs, rhs, common);
    return RationalFn{l + r, std::move(common)};
}

RationalFn operator*(const RationalFn& lhs, const RationalFn& rhs) {
    if (lhs.is_zero() || rhs.is_zero()) return RationalFn{};
    std::vector<Factor> factors = lhs.factors_;
    factors.insert(factors.end(), rhs.factors_.begin(), rhs.factors_.end());
    return RationalFn{lhs.numerator_ * rhs.numerator_, std::move(factors)};
}

RationalFn operator/(const RationalFn& lhs, const RationalFn& rhs) {
    if (rhs.is_zero()) {
        throw std::domain_error("division by the zero function");
    }
    if (lhs.is_zero()) return RationalFn{};
    Polynomial numerator = power_product(lhs.numerator_, rhs.factors_,
                                         [](const Factor& f) { return f.second; });
    std::vector<Factor> factors = lhs.factors_;
    factors.emplace_back(rhs.numerator_, 1);
    return RationalFn{std::move(numerator), std::move(factors)};
}

RationalFn rf_const(const Rational& value) { return RationalFn::constant(value); }
RationalFn rf_var(std::string_view name) { return RationalFn::variable(name); }
RationalFn rf_add(const RationalFn& x, const RationalFn& y) { return x + y; }
RationalFn rf_mul(const RationalFn& x, const RationalFn& y) { return x * y; }
RationalFn rf_div(const RationalFn& x, const RationalFn& y) { return x / y; }

bool rf_eq(const RationalFn& x, const RationalFn& y) {
    if (x == y) {
        return true;
    }
    if (x.is_zero() || y.is_zero()) {
        return false;
    }
    const auto common = lcm(x.denominator_factors(), y.denominator_factors());
    const auto [l, r] = lift(x, y, common);
    return l == r;
}

Rational rf_eval(const RationalFn& x, const Assignment& point) {
    for (const auto& var : x.variables()) {
        const auto it = point.find(var);
        if (it == point.end()) {
            throw std::invalid_argument("no value assigned to variable '" + var + "'");
        }
        if (it->second <= 0) {
            throw std::domain_error("variable '" + var + "' must be strictly positive");
        }
    }
    Rational value = x.numerator().evaluate(point);
    for (const auto& [f, k] : x.denominator_factors()) {
        const Rational v = f.evaluate(point);
        for (unsigned i = 0; i < k; ++i) value /= v;
    }
    return value;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

std::string as_operand(const Polynomial& p) {
    const std::string s = to_string(p);
    return p.term_count() > 1 ? "(" + s + ")" : s;
}

std::string as_divisor(const Polynomial& p) {
    const std::string s = to_string(p);
    return s.find_first_of("+*/") == std::string::npos ? s : "(" + s + ")";
}

class FnParser {
public:
    explicit FnParser(std::string_view text) : text_(text) {}

    RationalFn parse() {
        RationalFn value = expr();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return value;
    }

private:
    RationalFn expr() {
        RationalFn value = term();
        while (accept('+')) {
            value = value + term();
        }
        return value;
    }

    RationalFn term() {
        RationalFn value = atom();
        for (;;) {
            if (accept('*')) {
                value = value * atom();
            } else if (accept('/')) {
                value = value / atom();
            } else {
                return value;
            }
        }
    }

    RationalFn atom() {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            RationalFn inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e')) {
                fail("decimal literals are not exact; write p/q");
            }
            return rf_const(parse_rational(text_.substr(start, pos_ - start)));
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               std::string_view{"+*/()"}.find(text_[pos_]) == std::string_view::npos) {
            ++pos_;
        }
        if (start == pos_) fail("expected an operand");
        const auto name = text_.substr(start, pos_ - start);
        if (!is_action_name(name)) fail("invalid variable '" + std::string(name) + "'");
        return rf_var(name);
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(0, "rational function, offset " + std::to_string(pos_) + ": " + message);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

std::string to_string(const RationalFn& x) {
    if (x.denominator_factors().empty()) {
        return to_string(x.numerator());
    }
    std::vector<std::string> parts;
    for (const auto& [f, k] : x.denominator_factors()) {
        for (unsigned i = 0; i < k; ++i) {
            parts.push_back(parts.empty() && x.denominator_factors().size() == 1 && k == 1
                                ? as_divisor(f)
                                : as_operand(f));
        }
    }
    std::string den;
    if (parts.size() == 1) {
        den = parts.front();
    } else {
        den = "(";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            den += (i ? "*" : "") + parts[i];
        }
        den += ")";
    }
    return as_operand(x.numerator()) + "/" + den;
}

RationalFn parse_rational_fn(std::string_view text) {
    return FnParser{text}.parse();
}

} // namespace reactest
