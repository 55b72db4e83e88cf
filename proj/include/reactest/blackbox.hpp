#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "reactest/model.hpp"
#include "reactest/rational_fn.hpp"
#include "reactest/testing.hpp"

namespace reactest {

/// A system that shows only the menu of its current action state and
/// accepts steps. Probabilistic choices are made internally from the seed
/// given to reset().
class BlackBoxProcess {
public:
    virtual ~BlackBoxProcess() = default;

    /// Starts a fresh run; the same seed gives the same run. Forgets all
    /// checkpoints.
    virtual void reset(std::uint64_t seed) = 0;
    virtual Menu menu() = 0;
    /// False (and no state change) when `action` is not in the menu.
    virtual bool step(const Action& action) = 0;
    /// The first call with a given id saves the current position; later
    /// calls with that id return to it.
    virtual void fork(std::uint64_t id) = 0;
};

/// Picks the branch index taken at a probabilistic state. `draw` is derived
/// from the run seed and the number of steps taken so far, so every state
/// met after the same number of steps in a run sees the same draw.
using Resolver = std::function<std::size_t(const Node& state, std::uint64_t draw)>;

/// The SplitMix64 mixing step.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
/// A per-run seed derived from a base seed and an index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// A black box backed by a process graph.
class WhiteBoxProcess : public BlackBoxProcess {
public:
    /// The default resolver reads the draw as a uniform number in [0,1) and
    /// samples the branch distribution exactly.
    explicit WhiteBoxProcess(ProcessGraph graph);
    WhiteBoxProcess(ProcessGraph graph, Resolver resolver);
    WhiteBoxProcess(const WhiteBoxProcess&) = delete;
    WhiteBoxProcess& operator=(const WhiteBoxProcess&) = delete;

    void reset(std::uint64_t seed) override;
    Menu menu() override;
    bool step(const Action& action) override;
    void fork(std::uint64_t id) override;

    const ProcessGraph& graph() const noexcept { return graph_; }

private:
    struct Position {
        NodePtr state;
        std::size_t steps = 0;
    };

    NodePtr settle(const NodePtr& state) const;

    ProcessGraph graph_;
    Resolver resolver_;
    std::uint64_t seed_ = 0;
    Position current_;
    std::map<std::uint64_t, Position> checkpoints_;
};

/// Answers protocol requests for a box, one line at a time.
class BlackBoxServer {
public:
    explicit BlackBoxServer(BlackBoxProcess& box) : box_(box) {}

    /// `MENU` -> `MENU a,b`; `STEP a` -> `OK` | `REJECT`; `RESET n` -> `OK`;
    /// `FORK n` -> `OK`; anything else -> `ERROR <reason>`.
    std::string handle(std::string_view request);
    /// Serves requests until end of input, flushing every reply.
    void serve(std::istream& in, std::ostream& out);

private:
    BlackBoxProcess& box_;
};

/// The client side of the line protocol over a request/reply function.
class ProtocolBlackBox : public BlackBoxProcess {
public:
    using Transact = std::function<std::string(const std::string& request)>;

    explicit ProtocolBlackBox(Transact transact) : transact_(std::move(transact)) {}

    void reset(std::uint64_t seed) override;
    Menu menu() override;
    bool step(const Action& action) override;
    void fork(std::uint64_t id) override;

private:
    void expect_ok(const std::string& request);

    Transact transact_;
};

/// A protocol box served by a child process (`/bin/sh -c command`) over its
/// standard input and output.
class PipeBlackBox : public BlackBoxProcess {
public:
    explicit PipeBlackBox(const std::string& command);
    ~PipeBlackBox() override;
    PipeBlackBox(const PipeBlackBox&) = delete;
    PipeBlackBox& operator=(const PipeBlackBox&) = delete;

    void reset(std::uint64_t seed) override { client_.reset(seed); }
    Menu menu() override { return client_.menu(); }
    bool step(const Action& action) override { return client_.step(action); }
    void fork(std::uint64_t id) override { client_.fork(id); }

private:
    std::string transact(const std::string& request);

    int to_child_ = -1;
    int from_child_ = -1;
    int pid_ = -1;
    std::string buffer_;
    ProtocolBlackBox client_;
};

/// One run: reset the box with `seed`, then evaluate the deterministic test
/// against it, trying every jointly offered action at each step (returning
/// to a checkpoint between them). Throws std::invalid_argument for a
/// probabilistic test and ProtocolError when the box rejects an action it
/// offered.
RationalFn run_once(BlackBoxProcess& box, const Test& test, std::uint64_t seed);

/// Outcomes bucketed by rf_eq, in order of first appearance.
struct OutcomeDistribution {
    struct Entry {
        RationalFn outcome;
        std::size_t count = 0;
    };
    std::vector<Entry> entries;
    std::size_t runs = 0;

    Rational frequency(std::size_t i) const;
    /// Count of the bucket equal to `outcome`, or 0.
    std::size_t count_of(const RationalFn& outcome) const;
    void add(const RationalFn& outcome, std::size_t count = 1);
};

/// `runs` runs with seeds derive_seed(seed, 0), derive_seed(seed, 1), ...
/// Throws std::invalid_argument when runs is 0.
OutcomeDistribution estimate(BlackBoxProcess& box, const Test& test, std::size_t runs,
                             std::uint64_t seed);

struct TestComparison {
    std::size_t test_index = 0;
    OutcomeDistribution first;
    OutcomeDistribution second;
    double statistic = 0;
    std::size_t degrees_of_freedom = 0;
    double p_value = 1;
    bool distinguished = false;
};

struct ComparisonReport {
    std::vector<TestComparison> tests;
    bool any_distinguished() const;
};

/// Two-sample chi-square comparison per test over the pooled outcomes;
/// a test distinguishes the boxes when p < significance.
ComparisonReport compare(BlackBoxProcess& first, BlackBoxProcess& second, const std::vector<Test>& tests,
                         std::size_t runs, const Rational& significance, std::uint64_t seed);

/// Chi-square statistic, degrees of freedom and p-value for a 2 x k table.
struct ChiSquare {
    double statistic = 0;
    std::size_t degrees_of_freedom = 0;
    double p_value = 1;
};
ChiSquare chi_square_2xk(const std::vector<std::size_t>& row1, const std::vector<std::size_t>& row2);

} // namespace reactest
