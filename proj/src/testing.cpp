#include "reactest/testing.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

#include "reactest/errors.hpp"
#include "reactest/ready_trace.hpp"

namespace reactest {

namespace {

// Copies the DAG under `root`, naming states t0, t1, ... in preorder.
NodePtr relabel(const NodePtr& root) {
    std::map<const Node*, NodePtr> done;
    std::size_t counter = 0;
    std::function<NodePtr(const NodePtr&)> copy = [&](const NodePtr& n) -> NodePtr {
        if (auto it = done.find(n.get()); it != done.end()) return it->second;
        auto fresh = std::make_shared<Node>();
        fresh->id = "t" + std::to_string(counter++);
        fresh->kind = n->kind;
        fresh->success = n->success;
        for (const auto& e : n->actions) fresh->actions.push_back({e.action, copy(e.target)});
        for (const auto& b : n->branches) fresh->branches.push_back({b.probability, copy(b.target)});
        done.emplace(n.get(), fresh);
        return fresh;
    };
    return copy(root);
}

NodePtr leaf(std::string id, bool success) {
    auto n = std::make_shared<Node>();
    n->id = std::move(id);
    n->success = success;
    return n;
}

} // namespace

// ---------------------------------------------------------------------------
// Test

Test::Test(ProcessGraph graph) : graph_(std::move(graph)) {
    if (auto violations = validate(graph_, GraphRole::Test); !violations.empty()) {
        throw ValidationError(std::move(violations));
    }
}

Test Test::unchecked(ProcessGraph graph) { return Test{std::move(graph), Unchecked{}}; }

bool Test::is_deterministic() const {
    const auto states = graph_.states();
    return std::none_of(states.begin(), states.end(),
                        [](const Node* n) { return n->is_probabilistic(); });
}

Test Test::success(const Alphabet& alphabet) {
    return Test{ProcessGraph{alphabet, leaf("t0", true)}, Unchecked{}};
}

Test Test::deadlock(const Alphabet& alphabet) {
    return Test{ProcessGraph{alphabet, leaf("t0", false)}, Unchecked{}};
}

Test Test::choice(const Alphabet& alphabet, const std::vector<std::pair<Action, Test>>& branches) {
    auto root = std::make_shared<Node>();
    root->id = "root";
    for (const auto& [a, t] : branches) {
        if (!alphabet.contains(a)) {
            throw std::invalid_argument("action " + a + " is not in the alphabet");
        }
        root->actions.push_back({a, t.root()});
    }
    std::sort(root->actions.begin(), root->actions.end(),
              [](const ActionEdge& x, const ActionEdge& y) { return x.action < y.action; });
    for (std::size_t i = 1; i < root->actions.size(); ++i) {
        if (root->actions[i].action == root->actions[i - 1].action) {
            throw std::invalid_argument("action " + root->actions[i].action + " offered twice");
        }
    }
    return Test{ProcessGraph{alphabet, relabel(root)}};
}

Test Test::mix(const Alphabet& alphabet, const std::vector<std::pair<Rational, Test>>& branches) {
    auto root = std::make_shared<Node>();
    root->id = "root";
    root->kind = StateKind::Probabilistic;
    for (const auto& [p, t] : branches) root->branches.push_back({p, t.root()});
    return Test{ProcessGraph{alphabet, relabel(root)}};
}

// ---------------------------------------------------------------------------
// result

const RationalFn& ResultCache::sync_weight(const Menu& joint, const Action& a) {
    auto key = std::make_pair(joint, a);
    if (auto it = weights_.find(key); it != weights_.end()) return it->second;
    RationalFn total;
    for (const auto& b : joint.actions()) total = total + RationalFn::variable(b);
    return weights_.emplace(std::move(key), RationalFn::variable(a) / total).first->second;
}

const RationalFn& ResultCache::operator()(const NodePtr& s, const NodePtr& t) {
    auto key = std::make_pair(s, t);
    if (auto it = results_.find(key); it != results_.end()) return it->second;
    RationalFn value;
    if (!t->is_probabilistic() && t->success) {
        value = RationalFn::constant(1);
    } else if (s->is_probabilistic()) {
        for (const auto& b : s->branches) {
            value += RationalFn::constant(b.probability) * (*this)(b.target, t);
        }
    } else if (t->is_probabilistic()) {
        for (const auto& b : t->branches) {
            value += RationalFn::constant(b.probability) * (*this)(s, b.target);
        }
    } else {
        const Menu joint = menu(*s) & menu(*t);
        for (const auto& a : joint.actions()) {
            const RationalFn& sub = (*this)(*s->successor(a), *t->successor(a));
            if (!sub.is_zero()) value += sync_weight(joint, a) * sub;
        }
    }
    return results_.emplace(std::move(key), std::move(value)).first->second;
}

TestOutcome result(const ProcessGraph& process, const Test& test, ResultCache& cache) {
    return cache(process.root(), test.root());
}

TestOutcome result(const ProcessGraph& process, const Test& test) {
    ResultCache cache;
    return result(process, test, cache);
}

// ---------------------------------------------------------------------------
// Enumeration

std::uint64_t count_det_tests(std::size_t alphabet_size, std::size_t depth) {
    // c(0) = 2, c(d) = 2 + Σ_k C(n,k) c(d-1)^k = 1 + (1 + c(d-1))^n.
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t count = 2;
    for (std::size_t d = 0; d < depth; ++d) {
        std::uint64_t power = 1;
        for (std::size_t i = 0; i < alphabet_size; ++i) {
            if (power > kMax / (count + 1)) return kMax;
            power *= count + 1;
        }
        if (power == kMax) return kMax;
        count = power + 1;
    }
    return count;
}

namespace {

class DetTestGenerator {
public:
    explicit DetTestGenerator(const Alphabet& alphabet) : alphabet_(alphabet) {
        subsets_ = subsets_by_size(Menu{alphabet.actions()});
        subsets_.erase(subsets_.begin()); // the empty set
    }

    // Materialized tests of depth <= d.
    const std::vector<NodePtr>& all(std::size_t d) {
        while (levels_.size() <= d) {
            std::vector<NodePtr> level;
            visit_level(levels_.size(), [&](const NodePtr& n) {
                level.push_back(n);
                return true;
            });
            levels_.push_back(std::move(level));
        }
        return levels_[d];
    }

    // Streams tests of depth <= d without materializing the top level.
    bool visit_level(std::size_t d, const std::function<bool(const NodePtr&)>& visit) {
        if (!visit(leaf(fresh_id(), true)) || !visit(leaf(fresh_id(), false))) return false;
        if (d == 0) return true;
        const auto& children = all(d - 1);
        for (const auto& subset : subsets_) {
            const auto& acts = subset.actions();
            std::vector<std::size_t> pick(acts.size(), 0);
            while (true) {
                auto n = std::make_shared<Node>();
                n->id = fresh_id();
                for (std::size_t i = 0; i < acts.size(); ++i) {
                    n->actions.push_back({acts[i], children[pick[i]]});
                }
                if (!visit(n)) return false;
                // Odometer over the children, last position fastest.
                std::size_t i = acts.size();
                while (i > 0 && ++pick[i - 1] == children.size()) {
                    pick[--i] = 0;
                }
                if (i == 0) break;
            }
        }
        return true;
    }

private:
    std::string fresh_id() { return "t" + std::to_string(counter_++); }

    const Alphabet& alphabet_;
    std::vector<Menu> subsets_;
    std::vector<std::vector<NodePtr>> levels_;
    std::size_t counter_ = 0;
};

} // namespace

void for_each_det_test(const Alphabet& alphabet, std::size_t depth,
                       const std::function<bool(const Test&)>& visit, std::uint64_t budget) {
    const auto count = count_det_tests(alphabet.size(), depth);
    if (count > budget) {
        throw ResourceError("enumerating deterministic tests of depth " + std::to_string(depth) +
                            " over " + std::to_string(alphabet.size()) +
                            " actions exceeds the budget of " + std::to_string(budget) + " tests");
    }
    DetTestGenerator gen(alphabet);
    gen.visit_level(depth, [&](const NodePtr& root) {
        return visit(Test::unchecked(ProcessGraph{alphabet, root}));
    });
}

std::vector<Test> enumerate_det_tests(const Alphabet& alphabet, std::size_t depth, std::uint64_t budget) {
    std::vector<Test> out;
    for_each_det_test(alphabet, depth, [&](const Test& t) {
        out.push_back(t);
        return true;
    }, budget);
    return out;
}

// ---------------------------------------------------------------------------
// Decision

std::size_t default_decision_depth(const ProcessGraph& g1, const ProcessGraph& g2) {
    return 1 + std::max(g1.action_depth(), g2.action_depth());
}

namespace {

struct Mass {
    NodePtr state;
    RationalFn weight;
};

using Side = std::vector<Mass>;

void deposit(Side& side, const NodePtr& state, const RationalFn& weight) {
    auto put = [&side](const NodePtr& s, RationalFn w) {
        for (auto& m : side) {
            if (m.state == s) {
                m.weight += w;
                return;
            }
        }
        side.push_back({s, std::move(w)});
    };
    if (!state->is_probabilistic()) {
        put(state, weight);
        return;
    }
    for (const auto& b : state->branches) {
        put(b.target, weight * RationalFn::constant(b.probability));
    }
}

RationalFn total(const Side& side) {
    RationalFn sum;
    for (const auto& m : side) sum += m.weight;
    return sum;
}

struct SpineStep {
    Action action;
    Menu offered;
};

struct SpineNode {
    std::vector<SpineStep> steps;
    Side left;
    Side right;
};

Test spine_test(const Alphabet& alphabet, const std::vector<SpineStep>& steps) {
    Test current = Test::success(alphabet);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        std::vector<std::pair<Action, Test>> branches;
        for (const auto& b : it->offered.actions()) {
            branches.emplace_back(b, b == it->action ? current : Test::deadlock(alphabet));
        }
        current = Test::choice(alphabet, branches);
    }
    return current;
}

Side advance(const Side& side, const Action& a, const Menu& offered, ResultCache& weights) {
    Side out;
    for (const auto& m : side) {
        const auto* next = m.state->successor(a);
        if (!next) continue;
        const Menu joint = menu(*m.state) & offered;
        deposit(out, *next, m.weight * weights.sync_weight(joint, a));
    }
    return out;
}

Menu offered_union(const SpineNode& node) {
    Menu u;
    for (const auto* side : {&node.left, &node.right}) {
        for (const auto& m : *side) u = u | menu(*m.state);
    }
    return u;
}

Verdict spine_equiv(const ProcessGraph& g1, const ProcessGraph& g2, std::size_t depth) {
    const Alphabet alphabet = g1.alphabet() | g2.alphabet();
    ResultCache weights;
    Verdict verdict;
    verdict.depth = depth;

    SpineNode start;
    deposit(start.left, g1.root(), RationalFn::constant(1));
    deposit(start.right, g2.root(), RationalFn::constant(1));
    std::vector<SpineNode> level{std::move(start)};
    ++verdict.tests_checked; // ω itself

    for (std::size_t length = 1; length <= depth; ++length) {
        std::vector<SpineNode> next;
        for (const auto& node : level) {
            const Menu u = offered_union(node);
            const auto subsets = subsets_by_size(u);
            for (const auto& a : u.actions()) {
                for (const auto& offered : subsets) {
                    if (!offered.contains(a)) continue;
                    SpineNode child{node.steps, advance(node.left, a, offered, weights),
                                    advance(node.right, a, offered, weights)};
                    child.steps.push_back({a, offered});
                    ++verdict.tests_checked;
                    if (child.left.empty() && child.right.empty()) continue;
                    if (!rf_eq(total(child.left), total(child.right))) {
                        Test test = spine_test(alphabet, child.steps);
                        ResultCache cache;
                        TestOutcome r1 = result(g1, test, cache);
                        TestOutcome r2 = result(g2, test, cache);
                        if (rf_eq(r1, r2)) {
                            throw std::logic_error("spine weights disagree with result()");
                        }
                        verdict.equivalent = false;
                        verdict.witness = TestWitness{std::move(test), std::move(r1), std::move(r2)};
                        return verdict;
                    }
                    if (length < depth) next.push_back(std::move(child));
                }
            }
        }
        if (next.empty() && length < depth) {
            // Every test of this length yields 0 on both processes, so
            // nothing longer can tell them apart.
            verdict.stopped_at = length;
            return verdict;
        }
        level = std::move(next);
    }
    return verdict;
}

Verdict exhaustive_equiv(const ProcessGraph& g1, const ProcessGraph& g2, std::size_t depth,
                         std::uint64_t budget) {
    // The all-zero stopping length is the same for both strategies; take it
    // from the spine search to bound the enumeration.
    const Verdict spine = spine_equiv(g1, g2, depth);
    const std::size_t bound = spine.stopped_at.value_or(depth);
    const Alphabet alphabet = g1.alphabet() | g2.alphabet();

    Verdict verdict;
    verdict.depth = depth;
    verdict.stopped_at = spine.stopped_at;
    ResultCache cache;
    for_each_det_test(alphabet, bound, [&](const Test& t) {
        ++verdict.tests_checked;
        const RationalFn& r1 = cache(g1.root(), t.root());
        const RationalFn& r2 = cache(g2.root(), t.root());
        if (rf_eq(r1, r2)) return true;
        verdict.equivalent = false;
        verdict.witness = TestWitness{Test{ProcessGraph{alphabet, relabel(t.root())}}, r1, r2};
        return false;
    }, budget);
    return verdict;
}

} // namespace

Verdict testing_equiv(const ProcessGraph& g1, const ProcessGraph& g2, const TestingOptions& options) {
    const std::size_t depth = options.depth.value_or(default_decision_depth(g1, g2));
    switch (options.strategy) {
    case Strategy::Spine:
        return spine_equiv(g1, g2, depth);
    case Strategy::Exhaustive:
        return exhaustive_equiv(g1, g2, depth, options.budget);
    }
    throw std::logic_error("unknown strategy");
}

Verdict testing_equiv(const ProcessGraph& g1, const ProcessGraph& g2, std::size_t depth) {
    TestingOptions options;
    options.depth = depth;
    return testing_equiv(g1, g2, options);
}

// ---------------------------------------------------------------------------
// Distinguisher synthesis

namespace {

std::vector<Menu> by_size(std::vector<Menu> menus) {
    std::stable_sort(menus.begin(), menus.end(), [](const Menu& x, const Menu& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    return menus;
}

bool rt_equivalent(const ProcessGraph& g1, const ProcessGraph& g2) {
    return rt_equiv(g1, g2, completeness_depth(g1, g2)).equivalent;
}

bool outcomes_differ(const ProcessGraph& g1, const ProcessGraph& g2, const Test& t) {
    ResultCache cache;
    return !rf_eq(result(g1, t, cache), result(g2, t, cache));
}

Test synthesize(const ProcessGraph& s, const ProcessGraph& t, const Alphabet& alphabet) {
    const auto first_s = first_level_menus(s);
    const auto first_t = first_level_menus(t);

    if (first_s != first_t) {
        std::vector<Menu> candidates;
        for (const auto& [m, p] : first_s) candidates.push_back(m);
        for (const auto& [m, p] : first_t) {
            if (!first_s.contains(m)) candidates.push_back(m);
        }
        for (const auto& m : by_size(std::move(candidates))) {
            if (p1(s, m) == p1(t, m)) continue;
            std::vector<std::pair<Action, Test>> escapes;
            for (const auto& a : alphabet.actions()) {
                if (!m.contains(a)) escapes.emplace_back(a, Test::success(alphabet));
            }
            return Test::choice(alphabet, escapes);
        }
    }

    std::vector<Menu> menus;
    Menu first_actions;
    for (const auto& [m, p] : first_s) {
        menus.push_back(m);
        first_actions = first_actions | m;
    }
    menus = by_size(std::move(menus));

    std::optional<Test> inner;
    Action a1;
    for (const auto& m : menus) {
        for (const auto& a : m.actions()) {
            const auto s1 = after(s, m, a);
            const auto t1 = after(t, m, a);
            if (rt_equivalent(s1, t1)) continue;
            inner = synthesize(s1, t1, alphabet);
            a1 = a;
            break;
        }
        if (inner) break;
    }
    if (!inner) {
        throw std::logic_error("no distinguishing continuation found");
    }

    // The smallest first-level menu containing a1 on which the inner test
    // still separates the derived processes.
    std::optional<Menu> m1;
    for (const auto& m : menus) {
        if (m.contains(a1) && outcomes_differ(after(s, m, a1), after(t, m, a1), *inner)) {
            m1 = m;
            break;
        }
    }
    if (!m1) {
        throw std::logic_error("inner test does not separate any derived pair");
    }

    std::vector<Action> outside;
    for (const auto& b : first_actions.actions()) {
        if (!m1->contains(b)) outside.push_back(b);
    }
    for (const auto& escape : subsets_by_size(Menu{outside})) {
        std::vector<std::pair<Action, Test>> branches{{a1, *inner}};
        for (const auto& b : escape.actions()) branches.emplace_back(b, Test::success(alphabet));
        Test candidate = Test::choice(alphabet, branches);
        if (outcomes_differ(s, t, candidate)) return candidate;
    }
    throw std::logic_error("no escape set distinguishes the processes");
}

} // namespace

std::optional<Test> synthesize_distinguisher(const ProcessGraph& g1, const ProcessGraph& g2) {
    if (rt_equivalent(g1, g2)) return std::nullopt;
    return synthesize(g1, g2, g1.alphabet() | g2.alphabet());
}

Theorem3Report verify_theorem3(const std::vector<std::pair<ProcessGraph, ProcessGraph>>& pairs,
                               std::optional<std::size_t> depth) {
    Theorem3Report report;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [g1, g2] = pairs[i];
        const std::size_t d = depth.value_or(default_decision_depth(g1, g2));
        const bool by_tests = testing_equiv(g1, g2, d).equivalent;
        const bool by_traces = rt_equiv(g1, g2, std::max(d, completeness_depth(g1, g2))).equivalent;
        ++report.pairs;
        if (by_tests && by_traces) ++report.equivalent;
        if (by_tests != by_traces) report.disagreements.push_back(i);
    }
    return report;
}

} // namespace reactest
