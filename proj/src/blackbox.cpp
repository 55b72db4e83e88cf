#include "reactest/blackbox.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "reactest/errors.hpp"

namespace reactest {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

// ---------------------------------------------------------------------------
// WhiteBoxProcess

WhiteBoxProcess::WhiteBoxProcess(ProcessGraph graph) : WhiteBoxProcess(std::move(graph), nullptr) {}

WhiteBoxProcess::WhiteBoxProcess(ProcessGraph graph, Resolver resolver)
    : graph_(std::move(graph)), resolver_(std::move(resolver)) {
    if (!resolver_) {
        resolver_ = [](const Node& state, std::uint64_t draw) -> std::size_t {
            // u = draw / 2^64, compared exactly with the cumulative sums.
            mpz_class numerator;
            mpz_import(numerator.get_mpz_t(), 1, 1, sizeof draw, 0, 0, &draw);
            mpz_class denominator = 1;
            denominator <<= 64;
            const Rational u{numerator, denominator};
            Rational cumulative = 0;
            for (std::size_t i = 0; i < state.branches.size(); ++i) {
                cumulative += state.branches[i].probability;
                if (u < cumulative) return i;
            }
            return state.branches.size() - 1;
        };
    }
    current_ = {graph_.root(), 0};
}

NodePtr WhiteBoxProcess::settle(const NodePtr& state) const {
    if (!state->is_probabilistic()) return state;
    const std::size_t i = resolver_(*state, derive_seed(seed_, current_.steps));
    if (i >= state->branches.size()) {
        throw std::out_of_range("resolver chose a missing branch at " + state->id);
    }
    return state->branches[i].target;
}

void WhiteBoxProcess::reset(std::uint64_t seed) {
    seed_ = seed;
    checkpoints_.clear();
    current_ = {graph_.root(), 0};
    current_.state = settle(current_.state);
}

Menu WhiteBoxProcess::menu() {
    current_.state = settle(current_.state);
    return reactest::menu(*current_.state);
}

bool WhiteBoxProcess::step(const Action& action) {
    current_.state = settle(current_.state);
    const NodePtr* next = current_.state->successor(action);
    if (!next) return false;
    ++current_.steps;
    current_.state = settle(*next);
    return true;
}

void WhiteBoxProcess::fork(std::uint64_t id) {
    auto [it, inserted] = checkpoints_.try_emplace(id, current_);
    if (!inserted) current_ = it->second;
}

// ---------------------------------------------------------------------------
// Protocol

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::uint64_t parse_u64(const std::string& text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("expected a non-negative integer, got '" + text + "'");
    }
    try {
        return std::stoull(text);
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("integer out of range: " + text);
    }
}

std::string render_menu(const Menu& m) {
    std::string out = "MENU";
    for (std::size_t i = 0; i < m.actions().size(); ++i) {
        out += i == 0 ? " " : ",";
        out += m.actions()[i];
    }
    return out;
}

} // namespace

std::string BlackBoxServer::handle(std::string_view request) {
    const std::string line = trim(request);
    const auto space = line.find(' ');
    const std::string verb = line.substr(0, space);
    const std::string arg = space == std::string::npos ? "" : trim(line.substr(space + 1));
    try {
        if (verb == "MENU" && arg.empty()) return render_menu(box_.menu());
        if (verb == "STEP" && is_action_name(arg)) return box_.step(arg) ? "OK" : "REJECT";
        if (verb == "RESET") {
            box_.reset(parse_u64(arg));
            return "OK";
        }
        if (verb == "FORK") {
            box_.fork(parse_u64(arg));
            return "OK";
        }
    } catch (const std::exception& e) {
        return std::string("ERROR ") + e.what();
    }
    return "ERROR malformed request '" + line + "'";
}

void BlackBoxServer::serve(std::istream& in, std::ostream& out) {
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        out << handle(line) << '\n' << std::flush;
    }
}

void ProtocolBlackBox::expect_ok(const std::string& request) {
    const std::string reply = trim(transact_(request));
    if (reply != "OK") {
        throw ProtocolError("request '" + request + "' answered with '" + reply + "'");
    }
}

void ProtocolBlackBox::reset(std::uint64_t seed) { expect_ok("RESET " + std::to_string(seed)); }

void ProtocolBlackBox::fork(std::uint64_t id) { expect_ok("FORK " + std::to_string(id)); }

Menu ProtocolBlackBox::menu() {
    const std::string reply = trim(transact_("MENU"));
    if (reply != "MENU" && reply.rfind("MENU ", 0) != 0) {
        throw ProtocolError("MENU answered with '" + reply + "'");
    }
    std::vector<Action> actions;
    std::stringstream items(reply.size() > 4 ? reply.substr(5) : "");
    std::string item;
    while (std::getline(items, item, ',')) {
        item = trim(item);
        if (!is_action_name(item)) {
            throw ProtocolError("invalid action '" + item + "' in menu");
        }
        actions.push_back(item);
    }
    std::sort(actions.begin(), actions.end());
    if (std::adjacent_find(actions.begin(), actions.end()) != actions.end()) {
        throw ProtocolError("repeated action in menu '" + reply + "'");
    }
    return Menu{std::move(actions)};
}

bool ProtocolBlackBox::step(const Action& action) {
    const std::string reply = trim(transact_("STEP " + action));
    if (reply == "OK") return true;
    if (reply == "REJECT") return false;
    throw ProtocolError("STEP answered with '" + reply + "'");
}

// ---------------------------------------------------------------------------
// Runs

namespace {

class Explorer {
public:
    explicit Explorer(BlackBoxProcess& box) : box_(box) {}

    RationalFn operator()(const NodePtr& t) {
        if (t->is_probabilistic()) {
            throw std::invalid_argument("run_once needs a deterministic test");
        }
        if (t->success) return RationalFn::constant(1);
        const Menu joint = box_.menu() & reactest::menu(*t);
        if (joint.empty()) return {};
        const std::uint64_t checkpoint = next_id_++;
        box_.fork(checkpoint);
        RationalFn sum;
        bool first = true;
        for (const auto& a : joint.actions()) {
            if (!first) box_.fork(checkpoint);
            first = false;
            if (!box_.step(a)) {
                throw ProtocolError("box rejected offered action " + a);
            }
            const RationalFn sub = (*this)(*t->successor(a));
            if (sub.is_zero()) continue;
            const RationalFn& w = weights_.sync_weight(joint, a);
            sum += sub.is_scalar() && sub.scalar_value() == 1 ? w : w * sub;
        }
        return sum;
    }

private:
    BlackBoxProcess& box_;
    ResultCache weights_;
    std::uint64_t next_id_ = 0;
};

} // namespace

RationalFn run_once(BlackBoxProcess& box, const Test& test, std::uint64_t seed) {
    box.reset(seed);
    return Explorer{box}(test.root());
}

Rational OutcomeDistribution::frequency(std::size_t i) const {
    return Rational{static_cast<unsigned long>(entries.at(i).count)} /
           Rational{static_cast<unsigned long>(runs)};
}

std::size_t OutcomeDistribution::count_of(const RationalFn& outcome) const {
    for (const auto& e : entries) {
        if (e.outcome == outcome || rf_eq(e.outcome, outcome)) return e.count;
    }
    return 0;
}

void OutcomeDistribution::add(const RationalFn& outcome, std::size_t count) {
    runs += count;
    for (auto& e : entries) {
        if (e.outcome == outcome) {
            e.count += count;
            return;
        }
    }
    for (auto& e : entries) {
        if (rf_eq(e.outcome, outcome)) {
            e.count += count;
            return;
        }
    }
    entries.push_back({outcome, count});
}

OutcomeDistribution estimate(BlackBoxProcess& box, const Test& test, std::size_t runs, std::uint64_t seed) {
    if (runs == 0) {
        throw std::invalid_argument("estimate needs at least one run");
    }
    if (!test.is_deterministic()) {
        throw std::invalid_argument("estimate needs a deterministic test");
    }
    OutcomeDistribution d;
    for (std::size_t i = 0; i < runs; ++i) {
        d.add(run_once(box, test, derive_seed(seed, i)));
    }
    return d;
}

ChiSquare chi_square_2xk(const std::vector<std::size_t>& row1, const std::vector<std::size_t>& row2) {
    if (row1.size() != row2.size()) {
        throw std::invalid_argument("contingency rows differ in length");
    }
    double n1 = 0, n2 = 0;
    for (auto c : row1) n1 += static_cast<double>(c);
    for (auto c : row2) n2 += static_cast<double>(c);
    std::size_t columns = 0;
    double statistic = 0;
    for (std::size_t j = 0; j < row1.size(); ++j) {
        const double column = static_cast<double>(row1[j] + row2[j]);
        if (column == 0) continue;
        ++columns;
        const double e1 = n1 * column / (n1 + n2);
        const double e2 = n2 * column / (n1 + n2);
        const double d1 = static_cast<double>(row1[j]) - e1;
        const double d2 = static_cast<double>(row2[j]) - e2;
        if (e1 > 0) statistic += d1 * d1 / e1;
        if (e2 > 0) statistic += d2 * d2 / e2;
    }
    ChiSquare out;
    if (columns <= 1 || n1 == 0 || n2 == 0) return out;
    out.statistic = statistic;
    out.degrees_of_freedom = columns - 1;
    const boost::math::chi_squared dist(static_cast<double>(out.degrees_of_freedom));
    out.p_value = boost::math::cdf(boost::math::complement(dist, statistic));
    return out;
}

bool ComparisonReport::any_distinguished() const {
    for (const auto& t : tests) {
        if (t.distinguished) return true;
    }
    return false;
}

ComparisonReport compare(BlackBoxProcess& first, BlackBoxProcess& second, const std::vector<Test>& tests,
                         std::size_t runs, const Rational& significance, std::uint64_t seed) {
    ComparisonReport report;
    for (std::size_t k = 0; k < tests.size(); ++k) {
        TestComparison c;
        c.test_index = k;
        c.first = estimate(first, tests[k], runs, derive_seed(seed, 2 * k));
        c.second = estimate(second, tests[k], runs, derive_seed(seed, 2 * k + 1));

        std::vector<RationalFn> keys;
        for (const auto* d : {&c.first, &c.second}) {
            for (const auto& e : d->entries) {
                bool known = false;
                for (const auto& k2 : keys) known = known || rf_eq(k2, e.outcome);
                if (!known) keys.push_back(e.outcome);
            }
        }
        std::vector<std::size_t> row1, row2;
        for (const auto& key : keys) {
            row1.push_back(c.first.count_of(key));
            row2.push_back(c.second.count_of(key));
        }
        const ChiSquare chi = chi_square_2xk(row1, row2);
        c.statistic = chi.statistic;
        c.degrees_of_freedom = chi.degrees_of_freedom;
        c.p_value = chi.p_value;
        c.distinguished = chi.p_value < significance.get_d();
        report.tests.push_back(std::move(c));
    }
    return report;
}

} // namespace reactest
