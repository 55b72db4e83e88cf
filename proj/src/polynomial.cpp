#include "reactest/polynomial.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "reactest/errors.hpp"

namespace reactest {

namespace {

std::atomic<std::size_t> g_term_limit{1'000'000};

} // namespace

std::size_t term_limit() noexcept { return g_term_limit.load(std::memory_order_relaxed); }

void set_term_limit(std::size_t limit) noexcept {
    g_term_limit.store(limit, std::memory_order_relaxed);
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::of(const Variable& var, unsigned exponent) {
    Monomial m;
    if (exponent > 0) {
        m.powers_.emplace_back(var, exponent);
    }
    return m;
}

unsigned Monomial::degree() const noexcept {
    unsigned d = 0;
    for (const auto& [var, exp] : powers_) {
        d += exp;
    }
    return d;
}

Monomial operator*(const Monomial& lhs, const Monomial& rhs) {
    Monomial out;
    out.powers_.reserve(lhs.powers_.size() + rhs.powers_.size());
    auto l = lhs.powers_.begin();
    auto r = rhs.powers_.begin();
    while (l != lhs.powers_.end() || r != rhs.powers_.end()) {
        if (r == rhs.powers_.end() || (l != lhs.powers_.end() && l->first < r->first)) {
            out.powers_.push_back(*l++);
        } else if (l == lhs.powers_.end() || r->first < l->first) {
            out.powers_.push_back(*r++);
        } else {
            out.powers_.emplace_back(l->first, l->second + r->second);
            ++l;
            ++r;
        }
    }
    return out;
}

std::optional<Monomial> Monomial::divide(const Monomial& other) const {
    Monomial out;
    auto o = other.powers_.begin();
    for (const auto& [var, exp] : powers_) {
        if (o != other.powers_.end() && o->first < var) {
            return std::nullopt;
        }
        if (o != other.powers_.end() && o->first == var) {
            if (o->second > exp) {
                return std::nullopt;
            }
            if (o->second < exp) {
                out.powers_.emplace_back(var, exp - o->second);
            }
            ++o;
        } else {
            out.powers_.emplace_back(var, exp);
        }
    }
    if (o != other.powers_.end()) {
        return std::nullopt;
    }
    return out;
}

bool lex_greater(const Monomial& lhs, const Monomial& rhs) {
    auto l = lhs.powers().begin();
    auto r = rhs.powers().begin();
    const auto le = lhs.powers().end();
    const auto re = rhs.powers().end();
    while (l != le || r != re) {
        if (r == re) return true;
        if (l == le) return false;
        if (l->first != r->first) {
            // The side holding the earlier variable has a positive exponent
            // where the other has zero.
            return l->first < r->first;
        }
        if (l->second != r->second) {
            return l->second > r->second;
        }
        ++l;
        ++r;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::constant(const Rational& value) {
    Polynomial p;
    if (value != 0) {
        p.terms_.emplace(Monomial{}, value);
    }
    return p;
}

Polynomial Polynomial::variable(const Variable& var) {
    Polynomial p;
    p.terms_.emplace(Monomial::of(var), Rational{1});
    return p;
}

bool Polynomial::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_term() const {
    const auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational{0} : it->second;
}

const std::pair<const Monomial, Rational>& Polynomial::leading_term() const {
    if (terms_.empty()) {
        throw std::logic_error("leading term of the zero polynomial");
    }
    auto best = terms_.begin();
    for (auto it = std::next(best); it != terms_.end(); ++it) {
        if (lex_greater(it->first, best->first)) {
            best = it;
        }
    }
    return *best;
}

std::set<Variable> Polynomial::variables() const {
    std::set<Variable> vars;
    for (const auto& [m, c] : terms_) {
        for (const auto& [var, exp] : m.powers()) {
            vars.insert(var);
        }
    }
    return vars;
}

Rational Polynomial::evaluate(const Assignment& point) const {
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
        Rational term = c;
        for (const auto& [var, exp] : m.powers()) {
            const auto it = point.find(var);
            if (it == point.end()) {
                throw std::invalid_argument("no value assigned to variable '" + var + "'");
            }
            for (unsigned i = 0; i < exp; ++i) {
                term *= it->second;
            }
        }
        total += term;
    }
    return total;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

void Polynomial::check_size() const {
    if (terms_.size() > term_limit()) {
        throw ResourceError("polynomial exceeds the term limit of " +
                            std::to_string(term_limit()) + " terms");
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    for (const auto& [m, c] : other.terms_) {
        add_term(m, c);
    }
    check_size();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    for (const auto& [m, c] : other.terms_) {
        add_term(m, -c);
    }
    check_size();
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& scalar) {
    if (scalar == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) {
        c *= scalar;
    }
    return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
    Polynomial out;
    if (lhs.terms_.size() * rhs.terms_.size() > 0 &&
        std::max(lhs.terms_.size(), rhs.terms_.size()) > term_limit()) {
        throw ResourceError("polynomial exceeds the term limit");
    }
    for (const auto& [lm, lc] : lhs.terms_) {
        for (const auto& [rm, rc] : rhs.terms_) {
            out.add_term(lm * rm, lc * rc);
        }
        out.check_size();
    }
    return out;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
    if (divisor.is_zero()) {
        throw std::domain_error("polynomial division by zero");
    }
    const auto& [lead_m, lead_c] = divisor.leading_term();
    Polynomial rest = *this;
    Polynomial quotient;
    while (!rest.is_zero()) {
        const auto& [m, c] = rest.leading_term();
        const auto factor = m.divide(lead_m);
        if (!factor) {
            return std::nullopt;
        }
        Polynomial step;
        step.terms_.emplace(*factor, c / lead_c);
        quotient += step;
        rest -= step * divisor;
    }
    return quotient;
}

bool operator<(const Polynomial& lhs, const Polynomial& rhs) {
    return std::lexicographical_compare(
        lhs.terms_.begin(), lhs.terms_.end(), rhs.terms_.begin(), rhs.terms_.end(),
        [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return a.second < b.second;
        });
}

namespace {

std::string render_monomial(const Monomial& m) {
    std::string out;
    for (const auto& [var, exp] : m.powers()) {
        for (unsigned i = 0; i < exp; ++i) {
            if (!out.empty()) out += '*';
            out += var;
        }
    }
    return out;
}

} // namespace

std::string to_string(const Polynomial& p) {
    if (p.is_zero()) {
        return "0";
    }
    std::vector<const std::pair<const Monomial, Rational>*> ordered;
    for (const auto& term : p.terms()) {
        ordered.push_back(&term);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto* a, const auto* b) { return lex_greater(a->first, b->first); });
    std::string out;
    for (const auto* term : ordered) {
        if (!out.empty()) {
            out += term->second < 0 ? " - " : " + ";
        } else if (term->second < 0) {
            out += "-";
        }
        const Rational magnitude = abs(term->second);
        if (term->first.is_one()) {
            out += to_string(magnitude);
        } else {
            if (magnitude != 1) {
                out += to_string(magnitude) + "*";
            }
            out += render_monomial(term->first);
        }
    }
    return out;
}

} // namespace reactest
