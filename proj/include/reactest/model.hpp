#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reactest/action.hpp"
#include "reactest/rational.hpp"

namespace reactest {

/// Finite, non-empty, duplicate-free set of action names, kept sorted.
class Alphabet {
public:
    Alphabet() = default;
    /// Throws std::invalid_argument on an empty list, duplicates, or names
    /// that are not valid actions (including the success symbol).
    explicit Alphabet(std::vector<Action> actions);
    Alphabet(std::initializer_list<const char*> actions);

    const std::vector<Action>& actions() const noexcept { return actions_; }
    std::size_t size() const noexcept { return actions_.size(); }
    bool contains(std::string_view action) const;

    /// Union of two alphabets.
    friend Alphabet operator|(const Alphabet& lhs, const Alphabet& rhs);
    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::vector<Action> actions_;
};

/// A set of actions offered together (possibly empty).
class Menu {
public:
    Menu() = default;
    Menu(std::initializer_list<const char*> actions);
    explicit Menu(std::vector<Action> actions);

    const std::vector<Action>& actions() const noexcept { return actions_; }
    std::size_t size() const noexcept { return actions_.size(); }
    bool empty() const noexcept { return actions_.empty(); }
    bool contains(std::string_view action) const;
    bool is_subset_of(const Menu& other) const;
    void insert(const Action& action);

    friend Menu operator&(const Menu& lhs, const Menu& rhs);
    friend Menu operator|(const Menu& lhs, const Menu& rhs);
    friend auto operator<=>(const Menu&, const Menu&) = default;
    friend bool operator==(const Menu&, const Menu&) = default;

private:
    std::vector<Action> actions_;
};

/// `{a,b}`; `{}` for the empty menu.
std::string to_string(const Menu& menu);

/// All subsets of `universe`, ordered by size and then lexicographically.
std::vector<Menu> subsets_by_size(const Menu& universe);

enum class StateKind { Action, Probabilistic };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct ActionEdge {
    Action action;
    NodePtr target;
};

struct Branch {
    Rational probability;
    NodePtr target;
};

/// One state of a process graph. Nodes are immutable once shared; graphs
/// are DAGs of nodes and derived graphs share the nodes they reach.
struct Node {
    std::string id;
    StateKind kind = StateKind::Action;
    /// Success marker; only tests may set it.
    bool success = false;
    /// Sorted by action.
    std::vector<ActionEdge> actions;
    std::vector<Branch> branches;

    bool is_probabilistic() const noexcept { return kind == StateKind::Probabilistic; }
    /// The a-successor, or nullptr.
    const NodePtr* successor(std::string_view action) const;
};

/// A rooted process graph over an alphabet.
class ProcessGraph {
public:
    ProcessGraph(Alphabet alphabet, NodePtr root);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const NodePtr& root() const noexcept { return root_; }

    /// Reachable states, depth-first preorder following edge order.
    std::vector<const Node*> states() const;
    const Node* find_state(std::string_view id) const;

    /// Largest number of action transitions on any path from the root.
    std::size_t action_depth() const;

    /// Same alphabet, different root.
    ProcessGraph with_root(NodePtr root) const { return ProcessGraph{alphabet_, std::move(root)}; }

private:
    Alphabet alphabet_;
    NodePtr root_;
};

struct Violation {
    std::string state;
    std::string message;
};

std::string to_string(const Violation& violation);

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

enum class GraphRole { Process, Test };

/// Every violated structural invariant, each tagged with the offending
/// state. Empty means valid.
std::vector<Violation> validate(const ProcessGraph& graph, GraphRole role = GraphRole::Process);

/// Assembles a graph from named states and edge lists. Unlike a built graph
/// the builder can hold malformed input (unknown states, cycles,
/// nondeterminism) and report it.
class GraphBuilder {
public:
    explicit GraphBuilder(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

    GraphBuilder& state(const std::string& id, StateKind kind);
    GraphBuilder& action(const std::string& from, const Action& action, const std::string& to);
    GraphBuilder& branch(const std::string& from, const Rational& probability, const std::string& to);
    GraphBuilder& success(const std::string& id);
    GraphBuilder& root(const std::string& id);

    std::vector<Violation> check(GraphRole role = GraphRole::Process) const;
    /// Throws ValidationError listing every violation.
    ProcessGraph build(GraphRole role = GraphRole::Process) const;

    const Alphabet& alphabet() const noexcept { return alphabet_; }

private:
    struct StateDecl {
        StateKind kind;
        std::size_t order;
    };
    struct ActionDecl {
        std::string from;
        Action action;
        std::string to;
    };
    struct BranchDecl {
        std::string from;
        Rational probability;
        std::string to;
    };

    Alphabet alphabet_;
    std::map<std::string, StateDecl> states_;
    std::vector<ActionDecl> actions_;
    std::vector<BranchDecl> branches_;
    std::vector<std::string> success_;
    std::vector<std::string> redeclared_;
    std::optional<std::string> root_;
};

/// I(s): the actions enabled at an action state. Throws std::invalid_argument
/// for a probabilistic state.
Menu menu(const Node& state);
Menu menu(const ProcessGraph& graph, std::string_view state_id);

/// Every menu observed with positive probability at the start, with its
/// probability. Values sum to one.
std::map<Menu, Rational> first_level_menus(const Node& root);
std::map<Menu, Rational> first_level_menus(const ProcessGraph& graph);

/// Thrown by after() when the menu cannot be observed (probability zero)
/// or the action is not in it.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The process after observing `menu` and performing `action`. For an
/// action root this is its action-successor; for a probabilistic root a
/// fresh probabilistic state whose branches are the renormalized
/// action-successors of the branches offering `menu`, with one level of
/// probabilistic successors flattened. Identical targets are merged.
NodePtr after(const NodePtr& root, const Menu& menu, const Action& action);
ProcessGraph after(const ProcessGraph& graph, const Menu& menu, const Action& action);

} // namespace reactest
