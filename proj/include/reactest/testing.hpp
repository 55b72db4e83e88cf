#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "reactest/model.hpp"
#include "reactest/rational_fn.hpp"

namespace reactest {

/// A finite non-recursive process whose states may carry the success marker.
class Test {
public:
    /// Throws ValidationError when `graph` is not a valid test.
    explicit Test(ProcessGraph graph);

    const ProcessGraph& graph() const noexcept { return graph_; }
    const Alphabet& alphabet() const noexcept { return graph_.alphabet(); }
    const NodePtr& root() const noexcept { return graph_.root(); }
    std::size_t depth() const { return graph_.action_depth(); }
    /// No probabilistic states.
    bool is_deterministic() const;

    /// ω.
    static Test success(const Alphabet& alphabet);
    /// 0: no actions, no success.
    static Test deadlock(const Alphabet& alphabet);
    /// Σ a.T_a. Throws std::invalid_argument on repeated actions or actions
    /// outside the alphabet.
    static Test choice(const Alphabet& alphabet, const std::vector<std::pair<Action, Test>>& branches);
    /// Σ π_i T_i over action-rooted tests.
    static Test mix(const Alphabet& alphabet, const std::vector<std::pair<Rational, Test>>& branches);
    /// Skips validation. Precondition: `graph` is a valid test.
    static Test unchecked(ProcessGraph graph);

private:
    struct Unchecked {};
    Test(ProcessGraph graph, Unchecked) : graph_(std::move(graph)) {}

    ProcessGraph graph_;
};

using TestOutcome = RationalFn;

/// Memo table for result(): keyed by (process state, test state) identity,
/// so it stays valid only as long as it holds the nodes, which it does.
/// Not thread-safe; use one per worker.
class ResultCache {
public:
    const RationalFn& operator()(const NodePtr& process, const NodePtr& test);
    /// a / (sum of K).
    const RationalFn& sync_weight(const Menu& joint, const Action& a);
    std::size_t size() const noexcept { return results_.size(); }

private:
    std::map<std::pair<NodePtr, NodePtr>, RationalFn> results_;
    std::map<std::pair<Menu, Action>, RationalFn> weights_;
};

/// R(s, T).
TestOutcome result(const ProcessGraph& process, const Test& test);
TestOutcome result(const ProcessGraph& process, const Test& test, ResultCache& cache);

inline constexpr std::uint64_t kDefaultTestBudget = 1'000'000;

/// Number of deterministic tests of action depth <= depth over an alphabet
/// of the given size, saturating at UINT64_MAX.
std::uint64_t count_det_tests(std::size_t alphabet_size, std::size_t depth);

/// Visits every deterministic test of action depth <= depth once: ω, 0, then
/// Σ_{a∈B} a.T_a for each non-empty B (by size, then lexicographically) with
/// continuations of depth - 1 in the same order. The visitor returns false
/// to stop. Throws ResourceError before generating anything when the count
/// exceeds `budget`.
void for_each_det_test(const Alphabet& alphabet, std::size_t depth,
                       const std::function<bool(const Test&)>& visit,
                       std::uint64_t budget = kDefaultTestBudget);
std::vector<Test> enumerate_det_tests(const Alphabet& alphabet, std::size_t depth,
                                      std::uint64_t budget = kDefaultTestBudget);

enum class Strategy {
    /// Single-path tests a1.(... ak.ω + Σ b.0 ...) + Σ b.0, explored level by
    /// level. Every deterministic result is a sum of such tests' results,
    /// so this is complete and far smaller than full enumeration.
    Spine,
    /// Every deterministic test, in for_each_det_test order.
    Exhaustive,
};

struct TestingOptions {
    /// Defaults to default_decision_depth().
    std::optional<std::size_t> depth;
    Strategy strategy = Strategy::Spine;
    std::uint64_t budget = kDefaultTestBudget;
};

struct TestWitness {
    Test test;
    TestOutcome first;
    TestOutcome second;
};

struct Verdict {
    bool equivalent = true;
    /// Present iff not equivalent; the outcomes differ under rf_eq.
    std::optional<TestWitness> witness;
    std::size_t depth = 0;
    std::size_t tests_checked = 0;
    /// Length at which every test yielded 0 on both processes, if reached
    /// before `depth`.
    std::optional<std::size_t> stopped_at;
};

/// 1 + the larger action depth.
std::size_t default_decision_depth(const ProcessGraph& g1, const ProcessGraph& g2);

/// Compares result() on deterministic tests up to the depth.
Verdict testing_equiv(const ProcessGraph& g1, const ProcessGraph& g2, const TestingOptions& options = {});
Verdict testing_equiv(const ProcessGraph& g1, const ProcessGraph& g2, std::size_t depth);

/// A deterministic test with different outcomes, built by induction on the
/// shortest distinguishing ready trace; std::nullopt when the processes are
/// ready-trace equivalent. Throws std::logic_error if no candidate
/// distinguishes, which the construction rules out.
std::optional<Test> synthesize_distinguisher(const ProcessGraph& g1, const ProcessGraph& g2);

struct Theorem3Report {
    std::size_t pairs = 0;
    std::size_t equivalent = 0;
    /// Indices of pairs on which the two deciders disagree.
    std::vector<std::size_t> disagreements;

    bool ok() const noexcept { return disagreements.empty(); }
};

/// Runs testing_equiv and rt_equiv on every pair; depth defaults per pair.
Theorem3Report verify_theorem3(const std::vector<std::pair<ProcessGraph, ProcessGraph>>& pairs,
                               std::optional<std::size_t> depth = std::nullopt);

} // namespace reactest
