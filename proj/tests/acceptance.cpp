// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bridge.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "reactest/blackbox.hpp"
#include "reactest/cli.hpp"
#include "reactest/lemma.hpp"
#include "reactest/pts_format.hpp"
#include "reactest/ready_trace.hpp"
#include "reactest/testing.hpp"

using namespace reactest;
using namespace reactest::testsupport;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

int failures = 0;

void criterion(int number, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = outcome.ok;
    std::string detail = outcome.detail;
    if (elapsed >= limit_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over the time limit");
    }
    if (!ok) ++failures;
    std::printf("%s %2d %-28s %8.2fs / %.0fs  %s\n", ok ? "PASS" : "FAIL", number, name, elapsed, limit_seconds,
                detail.c_str());
    std::fflush(stdout);
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : ", ") + p;
    return out;
}

// Pairs found inequivalent by the agreement suite, for the synthesis check.
std::vector<std::pair<ProcessGraph, ProcessGraph>> inequivalent_pairs;

Outcome coin_results() {
    const auto u = fixtures::user();
    const auto half = rf_const(Rational(1, 2));
    const auto rs = result(fixtures::coin_first(), u);
    const auto rb = result(fixtures::coin_after(), u);
    return {rf_eq(rs, half) && rf_eq(rb, half), "R(s,u) = " + to_string(rs) + ", R(sbar,u) = " + to_string(rb)};
}

Outcome coin_equivalence() {
    const auto s = fixtures::coin_first();
    const auto sbar = fixtures::coin_after();
    const bool traces = rt_equiv(s, sbar, 4).equivalent;
    const bool tests = testing_equiv(s, sbar, 4).equivalent;
    return {traces && tests, std::string("ready traces ") + (traces ? "equal" : "differ") + ", tests " +
                                 (tests ? "equivalent" : "distinguish")};
}

Outcome algebra_identity() {
    const auto a = rf_var("a");
    const auto b = rf_var("b");
    const auto half = rf_const(Rational(1, 2));
    const auto lhs = half * a / (a + b) + half * b / (a + b);
    return {rf_eq(lhs, half), "lhs = " + to_string(lhs)};
}

Outcome deciders_agree() {
    Rng rng(20240501);
    const std::size_t n = 600;
    std::size_t equivalent = 0;
    std::vector<std::string> disagreements;
    for (std::size_t i = 0; i < n; ++i) {
        const auto pair = random_pair(rng);
        const std::size_t depth = completeness_depth(pair.first, pair.second);
        const bool tests = testing_equiv(pair.first, pair.second, depth).equivalent;
        const bool traces = rt_equiv(pair.first, pair.second, depth).equivalent;
        if (tests != traces) disagreements.push_back("pair " + std::to_string(i));
        if (tests) {
            ++equivalent;
        } else {
            inequivalent_pairs.emplace_back(pair.first, pair.second);
        }
    }
    return {disagreements.empty() && n >= 500,
            std::to_string(n) + " pairs, " + std::to_string(equivalent) + " equivalent" +
                (disagreements.empty() ? "" : ", disagree on " + join(disagreements))};
}

Outcome deterministic_tests_suffice() {
    Rng rng(7331);
    const std::size_t pairs = 220;
    const std::size_t tests = 50;
    std::size_t distinguishing = 0;
    std::size_t exceptions = 0;
    std::vector<std::string> misses;
    for (std::size_t i = 0; i < pairs; ++i) {
        try {
            const auto pair = random_pair(rng);
            std::optional<bool> decided;
            for (std::size_t k = 0; k < tests; ++k) {
                const auto t = to_test(random_test_term(rng, pair.alphabet, uniform(rng, 1, 3), true), pair.alphabet);
                if (rf_eq(result(pair.first, t), result(pair.second, t))) continue;
                ++distinguishing;
                if (!decided) decided = testing_equiv(pair.first, pair.second).equivalent;
                if (*decided) {
                    misses.push_back("pair " + std::to_string(i));
                    break;
                }
            }
        } catch (const std::exception&) {
            ++exceptions;
        }
    }
    return {misses.empty() && exceptions == 0,
            std::to_string(pairs) + " pairs x " + std::to_string(tests) + " tests, " +
                std::to_string(distinguishing) + " separations, " + std::to_string(exceptions) + " exceptions" +
                (misses.empty() ? "" : ", missed on " + join(misses))};
}

Outcome distinguishers_sound() {
    std::size_t exceptions = 0;
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < inequivalent_pairs.size(); ++i) {
        const auto& [g1, g2] = inequivalent_pairs[i];
        try {
            const auto t = synthesize_distinguisher(g1, g2);
            if (!t || !t->is_deterministic() || rf_eq(result(g1, *t), result(g2, *t))) {
                bad.push_back("pair " + std::to_string(i));
            }
        } catch (const std::exception&) {
            ++exceptions;
        }
    }
    return {!inequivalent_pairs.empty() && bad.empty() && exceptions == 0,
            std::to_string(inequivalent_pairs.size()) + " inequivalent pairs, " + std::to_string(exceptions) +
                " exceptions" + (bad.empty() ? "" : ", unsound on " + join(bad))};
}

Outcome distribution_law() {
    const auto dir = std::filesystem::temp_directory_path() / "reactest_acceptance";
    std::filesystem::create_directories(dir);
    const auto late = (dir / "late.pts").string();
    const auto early = (dir / "early.pts").string();
    std::ofstream(late) << render_pts(fixtures::late_choice());
    std::ofstream(early) << render_pts(fixtures::early_choice());
    const std::vector<std::string> args{"reactest", "check", late, early, "--mode", "both"};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    std::string report = out.str() + err.str();
    while (!report.empty() && report.back() == '\n') report.pop_back();
    return {code == kExitEquivalent, "exit " + std::to_string(code) + ", " + report};
}

Outcome bayesian_axioms() {
    Rng rng(424242);
    const std::size_t graphs = 200;
    std::size_t prefixes = 0;
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < graphs; ++i) {
        const auto alphabet = random_alphabet(rng);
        const auto g = to_graph(random_term(rng, alphabet, uniform(rng, 1, 3)), alphabet);
        const auto menus = subsets_by_size(Menu{alphabet.actions()});
        bool ok = true;
        Rational first = 0;
        for (const auto& m : menus) first += p1(g, m);
        ok = first == 1;
        // Conditioning prefixes M1 a1 ... Mk ak with k <= 3 and positive
        // probability; the next menu's probabilities must sum to one.
        std::function<void(const std::vector<Menu>&, const std::vector<Action>&)> walk =
            [&](const std::vector<Menu>& ms, const std::vector<Action>& as) {
                ++prefixes;
                Rational sum = 0;
                for (const auto& m : menus) {
                    auto next = ms;
                    next.push_back(m);
                    const auto p = pn(g, ReadyTrace{next, as});
                    if (!p.is_defined()) {
                        ok = false;
                        return;
                    }
                    sum += p.value();
                    if (as.size() < 3 && p.value() > 0) {
                        for (const auto& a : m.actions()) {
                            auto acts = as;
                            acts.push_back(a);
                            walk(next, acts);
                        }
                    }
                }
                ok = ok && sum == 1;
            };
        walk({}, {});
        if (!ok) bad.push_back("graph " + std::to_string(i));
    }
    return {bad.empty(), std::to_string(graphs) + " graphs, " + std::to_string(prefixes) + " prefixes" +
                             (bad.empty() ? "" : ", violated on " + join(bad))};
}

Outcome lemma_numeric() {
    std::vector<std::string> zero;
    for (unsigned n = 1; n <= 3; ++n) {
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            if (lemma1_det(n, seed) == 0) zero.push_back(std::to_string(n) + "/" + std::to_string(seed));
        }
    }
    return {zero.empty(), "300 determinants" + (zero.empty() ? "" : ", zero at " + join(zero))};
}

Outcome bridge() {
    Rng rng(8675309);
    std::size_t checked = 0;
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < 50; ++i) {
        const auto alphabet = random_alphabet(rng);
        const auto g = to_graph(random_term(rng, alphabet, uniform(rng, 1, 3)), alphabet);
        for (std::size_t k = 0; k < 20; ++k) {
            const auto t = to_test(random_test_term(rng, alphabet, uniform(rng, 1, 3), false), alphabet);
            ++checked;
            if (!rf_eq(exact_run_mixture(g, t), result(g, t))) {
                bad.push_back(std::to_string(i) + "/" + std::to_string(k));
            }
        }
    }
    return {bad.empty(), std::to_string(checked) + " graph/test pairs" + (bad.empty() ? "" : ", differ on " + join(bad))};
}

Outcome estimate_coin() {
    const auto u = fixtures::user();
    const auto heads = parse_rational_fn("h/(h + t)");
    const auto tails = parse_rational_fn("t/(h + t)");
    const std::size_t seeds = 20;
    const std::size_t runs = 100000;
    std::size_t within = 0;
    double worst = 0;
    for (std::size_t seed = 1; seed <= seeds; ++seed) {
        WhiteBoxProcess box(fixtures::coin_first());
        const auto d = estimate(box, u, runs, seed);
        const double fh = static_cast<double>(d.count_of(heads)) / static_cast<double>(runs);
        const double ft = static_cast<double>(d.count_of(tails)) / static_cast<double>(runs);
        const double dev = std::max(std::abs(fh - 0.5), std::abs(ft - 0.5));
        worst = std::max(worst, dev);
        if (dev <= 0.01) ++within;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu/%zu seeds within 0.01, worst deviation %.4f", within, seeds, worst);
    return {within * 100 >= 95 * seeds, buf};
}

} // namespace

int main() {
    criterion(1, "coin example results", 1, coin_results);
    criterion(2, "coin example equivalence", 5, coin_equivalence);
    criterion(3, "algebra identity", 1, algebra_identity);
    criterion(4, "decider agreement", 600, deciders_agree);
    criterion(5, "deterministic tests suffice", 600, deterministic_tests_suffice);
    criterion(6, "distinguisher soundness", 600, distinguishers_sound);
    criterion(7, "distribution law", 5, distribution_law);
    criterion(8, "Bayesian axioms", 300, bayesian_axioms);
    criterion(9, "escape matrix determinants", 60, lemma_numeric);
    criterion(10, "black-box exactness bridge", 600, bridge);
    criterion(10, "black-box estimate", 120, estimate_coin);
    std::printf("%s\n", failures == 0 ? "all criteria pass" : (std::to_string(failures) + " failing").c_str());
    return failures == 0 ? 0 : 1;
}
