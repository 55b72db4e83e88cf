#include "reactest/model.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace reactest {

// ---------------------------------------------------------------------------
// Alphabet and Menu

Alphabet::Alphabet(std::vector<Action> actions) : actions_(std::move(actions)) {
    if (actions_.empty()) {
        throw std::invalid_argument("alphabet must not be empty");
    }
    for (const auto& a : actions_) {
        if (is_reserved_name(a)) {
            throw std::invalid_argument("the success symbol cannot be an action");
        }
        if (!is_action_name(a)) {
            throw std::invalid_argument("invalid action name '" + a + "'");
        }
    }
    std::sort(actions_.begin(), actions_.end());
    if (std::adjacent_find(actions_.begin(), actions_.end()) != actions_.end()) {
        throw std::invalid_argument("duplicate action in alphabet");
    }
}

Alphabet::Alphabet(std::initializer_list<const char*> actions)
    : Alphabet(std::vector<Action>(actions.begin(), actions.end())) {}

bool Alphabet::contains(std::string_view action) const {
    return std::binary_search(actions_.begin(), actions_.end(), action);
}

Alphabet operator|(const Alphabet& lhs, const Alphabet& rhs) {
    std::vector<Action> merged;
    std::set_union(lhs.actions_.begin(), lhs.actions_.end(), rhs.actions_.begin(),
                   rhs.actions_.end(), std::back_inserter(merged));
    Alphabet out;
    out.actions_ = std::move(merged);
    return out;
}

Menu::Menu(std::initializer_list<const char*> actions)
    : Menu(std::vector<Action>(actions.begin(), actions.end())) {}

Menu::Menu(std::vector<Action> actions) : actions_(std::move(actions)) {
    std::sort(actions_.begin(), actions_.end());
    actions_.erase(std::unique(actions_.begin(), actions_.end()), actions_.end());
}

bool Menu::contains(std::string_view action) const {
    return std::binary_search(actions_.begin(), actions_.end(), action);
}

bool Menu::is_subset_of(const Menu& other) const {
    return std::includes(other.actions_.begin(), other.actions_.end(), actions_.begin(),
                         actions_.end());
}

void Menu::insert(const Action& action) {
    const auto it = std::lower_bound(actions_.begin(), actions_.end(), action);
    if (it == actions_.end() || *it != action) {
        actions_.insert(it, action);
    }
}

Menu operator&(const Menu& lhs, const Menu& rhs) {
    Menu out;
    std::set_intersection(lhs.actions_.begin(), lhs.actions_.end(), rhs.actions_.begin(),
                          rhs.actions_.end(), std::back_inserter(out.actions_));
    return out;
}

Menu operator|(const Menu& lhs, const Menu& rhs) {
    Menu out;
    std::set_union(lhs.actions_.begin(), lhs.actions_.end(), rhs.actions_.begin(),
                   rhs.actions_.end(), std::back_inserter(out.actions_));
    return out;
}

std::string to_string(const Menu& menu) {
    std::string out = "{";
    for (std::size_t i = 0; i < menu.size(); ++i) {
        if (i) out += ',';
        out += menu.actions()[i];
    }
    return out + "}";
}

std::vector<Menu> subsets_by_size(const Menu& universe) {
    const std::size_t n = universe.size();
    std::vector<Menu> out;
    out.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<Action> chosen;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) chosen.push_back(universe.actions()[i]);
        }
        out.emplace_back(std::move(chosen));
    }
    std::stable_sort(out.begin(), out.end(), [](const Menu& a, const Menu& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Nodes and graphs

const NodePtr* Node::successor(std::string_view action) const {
    const auto it = std::lower_bound(actions.begin(), actions.end(), action,
                                     [](const ActionEdge& e, std::string_view a) { return e.action < a; });
    if (it == actions.end() || it->action != action) {
        return nullptr;
    }
    return &it->target;
}

ProcessGraph::ProcessGraph(Alphabet alphabet, NodePtr root)
    : alphabet_(std::move(alphabet)), root_(std::move(root)) {
    if (!root_) {
        throw std::invalid_argument("process graph needs a root state");
    }
}

std::vector<const Node*> ProcessGraph::states() const {
    std::vector<const Node*> order;
    std::unordered_set<const Node*> seen;
    std::vector<const Node*> stack{root_.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        order.push_back(n);
        for (auto it = n->branches.rbegin(); it != n->branches.rend(); ++it) {
            stack.push_back(it->target.get());
        }
        for (auto it = n->actions.rbegin(); it != n->actions.rend(); ++it) {
            stack.push_back(it->target.get());
        }
    }
    return order;
}

const Node* ProcessGraph::find_state(std::string_view id) const {
    for (const Node* n : states()) {
        if (n->id == id) return n;
    }
    return nullptr;
}

std::size_t ProcessGraph::action_depth() const {
    std::unordered_map<const Node*, std::size_t> memo;
    std::function<std::size_t(const Node*)> depth = [&](const Node* n) -> std::size_t {
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        std::size_t d = 0;
        for (const auto& e : n->actions) d = std::max(d, 1 + depth(e.target.get()));
        for (const auto& b : n->branches) d = std::max(d, depth(b.target.get()));
        memo.emplace(n, d);
        return d;
    };
    return depth(root_.get());
}

// ---------------------------------------------------------------------------
// Validation

std::string to_string(const Violation& violation) {
    return violation.state.empty() ? violation.message
                                   : "state " + violation.state + ": " + violation.message;
}

namespace {

std::string join_violations(const std::vector<Violation>& violations) {
    std::string out = "invalid process graph";
    for (const auto& v : violations) {
        out += "\n  " + to_string(v);
    }
    return out;
}

} // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

std::vector<Violation> validate(const ProcessGraph& graph, GraphRole role) {
    std::vector<Violation> out;
    for (const Node* n : graph.states()) {
        auto report = [&](std::string message) { out.push_back({n->id, std::move(message)}); };
        if (n->success) {
            if (role == GraphRole::Process) {
                report("success marker outside a test");
            } else if (n->is_probabilistic()) {
                report("success marker on a probabilistic state");
            }
        }
        if (n->is_probabilistic()) {
            if (!n->actions.empty()) {
                report("action transition from a probabilistic state");
            }
            if (n->branches.empty()) {
                report("probabilistic state without transitions");
                continue;
            }
            Rational total = 0;
            for (const auto& b : n->branches) {
                if (b.probability <= 0 || b.probability > 1) {
                    report("probability " + to_string(b.probability) + " outside (0,1]");
                }
                if (b.target->is_probabilistic()) {
                    report("probabilistic transition to probabilistic state " + b.target->id);
                }
                total += b.probability;
            }
            if (total != 1) {
                report("probabilities sum to " + to_string(total));
            }
        } else {
            if (!n->branches.empty()) {
                report("probabilistic transition from an action state");
            }
            for (std::size_t i = 0; i < n->actions.size(); ++i) {
                const auto& e = n->actions[i];
                if (!graph.alphabet().contains(e.action)) {
                    report("action " + e.action + " not in the alphabet");
                }
                if (i > 0 && n->actions[i - 1].action >= e.action) {
                    report(n->actions[i - 1].action == e.action
                               ? "action nondeterminism on " + e.action
                               : "action edges out of order");
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// GraphBuilder

GraphBuilder& GraphBuilder::state(const std::string& id, StateKind kind) {
    if (states_.contains(id)) {
        redeclared_.push_back(id);
        return *this;
    }
    states_.emplace(id, StateDecl{kind, states_.size()});
    return *this;
}

GraphBuilder& GraphBuilder::action(const std::string& from, const Action& a, const std::string& to) {
    actions_.push_back({from, a, to});
    return *this;
}

GraphBuilder& GraphBuilder::branch(const std::string& from, const Rational& p, const std::string& to) {
    branches_.push_back({from, p, to});
    return *this;
}

GraphBuilder& GraphBuilder::success(const std::string& id) {
    success_.push_back(id);
    return *this;
}

GraphBuilder& GraphBuilder::root(const std::string& id) {
    root_ = id;
    return *this;
}

std::vector<Violation> GraphBuilder::check(GraphRole role) const {
    std::vector<Violation> out;
    auto known = [&](const std::string& id, const std::string& where) {
        if (!states_.contains(id)) {
            out.push_back({where, "undeclared state " + id});
            return false;
        }
        return true;
    };

    if (!root_) {
        out.push_back({"", "no root declared"});
    } else {
        known(*root_, "");
    }

    std::map<std::string, std::map<Action, std::set<std::string>>> successors;
    std::map<std::string, Rational> totals;
    std::map<std::string, std::vector<std::string>> edges;
    for (const auto& id : redeclared_) {
        out.push_back({id, "state declared twice"});
    }
    for (const auto& d : actions_) {
        const bool ok = known(d.from, d.from) & known(d.to, d.from);
        if (is_reserved_name(d.action)) {
            out.push_back({d.from, "the success symbol cannot label a transition"});
        } else if (!alphabet_.contains(d.action)) {
            out.push_back({d.from, "action " + d.action + " not in the alphabet"});
        }
        if (!ok) continue;
        if (states_.at(d.from).kind == StateKind::Probabilistic) {
            out.push_back({d.from, "action transition from a probabilistic state"});
        }
        successors[d.from][d.action].insert(d.to);
        edges[d.from].push_back(d.to);
    }
    for (const auto& [from, by_action] : successors) {
        for (const auto& [a, targets] : by_action) {
            if (targets.size() > 1) {
                out.push_back({from, "action nondeterminism on " + a});
            }
        }
    }
    for (const auto& d : branches_) {
        if (!(known(d.from, d.from) & known(d.to, d.from))) continue;
        if (states_.at(d.from).kind == StateKind::Action) {
            out.push_back({d.from, "probabilistic transition from an action state"});
        }
        if (states_.at(d.to).kind == StateKind::Probabilistic) {
            out.push_back({d.from, "probabilistic transition to probabilistic state " + d.to});
        }
        if (d.probability <= 0 || d.probability > 1) {
            out.push_back({d.from, "probability " + to_string(d.probability) + " outside (0,1]"});
        }
        totals[d.from] += d.probability;
        edges[d.from].push_back(d.to);
    }
    for (const auto& [id, decl] : states_) {
        if (decl.kind != StateKind::Probabilistic) continue;
        const auto it = totals.find(id);
        if (it == totals.end()) {
            out.push_back({id, "probabilistic state without transitions"});
        } else if (it->second != 1) {
            out.push_back({id, "probabilities sum to " + to_string(it->second)});
        }
    }
    for (const auto& id : success_) {
        if (!known(id, id)) continue;
        if (role == GraphRole::Process) {
            out.push_back({id, "success marker outside a test"});
        } else if (states_.at(id).kind == StateKind::Probabilistic) {
            out.push_back({id, "success marker on a probabilistic state"});
        }
    }

    // Cycles and reachability, by iterative DFS colouring from the root.
    if (root_ && states_.contains(*root_)) {
        enum class Colour { White, Grey, Black };
        std::map<std::string, Colour> colour;
        for (const auto& [id, decl] : states_) colour[id] = Colour::White;
        std::vector<std::pair<std::string, std::size_t>> stack{{*root_, 0}};
        colour[*root_] = Colour::Grey;
        bool cyclic = false;
        while (!stack.empty()) {
            auto& [id, next] = stack.back();
            const auto& out_edges = edges[id];
            if (next == out_edges.size()) {
                colour[id] = Colour::Black;
                stack.pop_back();
                continue;
            }
            const std::string target = out_edges[next++];
            if (!states_.contains(target)) continue;
            if (colour[target] == Colour::Grey) {
                if (!cyclic) out.push_back({target, "cycle through this state"});
                cyclic = true;
            } else if (colour[target] == Colour::White) {
                colour[target] = Colour::Grey;
                stack.emplace_back(target, 0);
            }
        }
        for (const auto& [id, c] : colour) {
            if (c == Colour::White) {
                out.push_back({id, "unreachable from the root"});
            }
        }
    }
    return out;
}

ProcessGraph GraphBuilder::build(GraphRole role) const {
    if (auto violations = check(role); !violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    std::map<std::string, std::vector<ActionEdge>> action_edges;
    std::map<std::string, std::vector<std::pair<Rational, std::string>>> branch_edges;
    std::map<std::string, std::vector<std::pair<Action, std::string>>> raw_actions;
    for (const auto& d : actions_) raw_actions[d.from].emplace_back(d.action, d.to);
    for (const auto& d : branches_) branch_edges[d.from].emplace_back(d.probability, d.to);
    const std::set<std::string> successes(success_.begin(), success_.end());

    std::map<std::string, NodePtr> built;
    std::function<NodePtr(const std::string&)> make = [&](const std::string& id) -> NodePtr {
        if (auto it = built.find(id); it != built.end()) return it->second;
        auto node = std::make_shared<Node>();
        node->id = id;
        node->kind = states_.at(id).kind;
        node->success = successes.contains(id);
        auto& acts = raw_actions[id];
        std::sort(acts.begin(), acts.end());
        acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
        for (const auto& [a, to] : acts) node->actions.push_back({a, make(to)});
        for (const auto& [p, to] : branch_edges[id]) node->branches.push_back({p, make(to)});
        built.emplace(id, node);
        return node;
    };
    return ProcessGraph{alphabet_, make(*root_)};
}

// ---------------------------------------------------------------------------
// Menus and derived processes

Menu menu(const Node& state) {
    if (state.is_probabilistic()) {
        throw std::invalid_argument("menu of probabilistic state " + state.id);
    }
    std::vector<Action> actions;
    actions.reserve(state.actions.size());
    for (const auto& e : state.actions) actions.push_back(e.action);
    return Menu{std::move(actions)};
}

Menu menu(const ProcessGraph& graph, std::string_view state_id) {
    const Node* n = graph.find_state(state_id);
    if (!n) {
        throw std::invalid_argument("no state " + std::string(state_id));
    }
    return menu(*n);
}

std::map<Menu, Rational> first_level_menus(const Node& root) {
    std::map<Menu, Rational> out;
    if (!root.is_probabilistic()) {
        out.emplace(menu(root), Rational{1});
        return out;
    }
    for (const auto& b : root.branches) {
        out[menu(*b.target)] += b.probability;
    }
    return out;
}

std::map<Menu, Rational> first_level_menus(const ProcessGraph& graph) {
    return first_level_menus(*graph.root());
}

NodePtr after(const NodePtr& root, const Menu& observed, const Action& action) {
    if (!observed.contains(action)) {
        throw PreconditionError("action " + action + " is not in menu " + to_string(observed));
    }
    if (!root->is_probabilistic()) {
        if (menu(*root) != observed) {
            throw PreconditionError("state " + root->id + " does not offer menu " +
                                    to_string(observed));
        }
        return *root->successor(action);
    }

    Rational total = 0;
    for (const auto& b : root->branches) {
        if (menu(*b.target) == observed) total += b.probability;
    }
    if (total == 0) {
        throw PreconditionError("menu " + to_string(observed) + " has probability 0 at state " +
                                root->id);
    }

    auto fresh = std::make_shared<Node>();
    fresh->id = root->id + "_";
    for (const auto& a : observed.actions()) fresh->id += a;
    fresh->id += "_" + action;
    fresh->kind = StateKind::Probabilistic;
    auto add = [&fresh](const Rational& p, const NodePtr& target) {
        for (auto& b : fresh->branches) {
            if (b.target == target) {
                b.probability += p;
                return;
            }
        }
        fresh->branches.push_back({p, target});
    };
    for (const auto& b : root->branches) {
        if (menu(*b.target) != observed) continue;
        const NodePtr& next = *b.target->successor(action);
        if (!next->is_probabilistic()) {
            add(b.probability / total, next);
            continue;
        }
        for (const auto& inner : next->branches) {
            if (inner.target->is_probabilistic()) {
                throw std::logic_error("probabilistic transition to probabilistic state " +
                                       inner.target->id);
            }
            add(b.probability * inner.probability / total, inner.target);
        }
    }
    return fresh;
}

ProcessGraph after(const ProcessGraph& graph, const Menu& observed, const Action& action) {
    return graph.with_root(after(graph.root(), observed, action));
}

} // namespace reactest
