#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reactest/model.hpp"
#include "reactest/rational.hpp"

namespace reactest {

/// Alternating menus and chosen actions (M1, a1, ..., M(n-1), a(n-1), Mn)
/// with each ai in Mi.
class ReadyTrace {
public:
    /// Throws std::invalid_argument unless there is exactly one more menu
    /// than actions (at least one menu) and every action is in its menu.
    ReadyTrace(std::vector<Menu> menus, std::vector<Action> actions);

    const std::vector<Menu>& menus() const noexcept { return menus_; }
    const std::vector<Action>& actions() const noexcept { return actions_; }
    std::size_t length() const noexcept { return menus_.size(); }

    /// This trace extended by `action` and then `next`.
    ReadyTrace then(const Action& action, const Menu& next) const;

    friend bool operator==(const ReadyTrace&, const ReadyTrace&) = default;

private:
    std::vector<Menu> menus_;
    std::vector<Action> actions_;
};

/// `{h,t} h {p}`.
std::string to_string(const ReadyTrace& trace);
/// Whitespace-separated menus in braces alternating with actions; commas
/// or spaces separate the actions inside a menu.
ReadyTrace parse_ready_trace(std::string_view text);

/// A conditional ready-trace probability; undefined when the conditioning
/// prefix cannot be observed.
class TraceProbability {
public:
    TraceProbability() = default;
    explicit TraceProbability(Rational value) : value_(std::move(value)) {}

    static TraceProbability undefined() { return {}; }

    bool is_defined() const noexcept { return value_.has_value(); }
    const Rational& value() const;

    friend bool operator==(const TraceProbability&, const TraceProbability&) = default;

private:
    std::optional<Rational> value_;
};

/// Rational value, or `undefined`.
std::string to_string(const TraceProbability& p);

/// Probability that `menu` is the first menu observed.
Rational p1(const ProcessGraph& graph, const Menu& menu);
Rational p1(const Node& root, const Menu& menu);

/// P^n(Mn | M1, a1, ..., M(n-1), a(n-1)); P^1 for a single-menu trace.
TraceProbability pn(const ProcessGraph& graph, const ReadyTrace& trace);

struct ReadyTraceVerdict {
    bool equivalent = true;
    /// A shortest distinguishing trace, when not equivalent.
    std::optional<ReadyTrace> witness;
    TraceProbability first;
    TraceProbability second;
};

/// 1 + the larger action depth: no longer ready trace can distinguish
/// two acyclic graphs.
std::size_t completeness_depth(const ProcessGraph& g1, const ProcessGraph& g2);

/// Compares every ready trace of at most `depth` menus, breadth first, so a
/// returned witness is shortest. Only menus with positive probability for
/// either process are explored.
ReadyTraceVerdict rt_equiv(const ProcessGraph& g1, const ProcessGraph& g2, std::size_t depth);

} // namespace reactest
