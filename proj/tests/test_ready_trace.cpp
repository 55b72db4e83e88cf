#include <catch_amalgamated.hpp>

#include <functional>
#include <set>

#include "fixtures.hpp"
#include "generators.hpp"
#include "reactest/errors.hpp"
#include "reactest/ready_trace.hpp"

using namespace reactest;
using namespace reactest::testsupport;

namespace {

// Compares every trace over all 2^|A| menus, not just observed ones.
bool naive_rt_equiv(const ProcessGraph& g1, const ProcessGraph& g2, std::size_t depth) {
    const Alphabet alphabet = g1.alphabet() | g2.alphabet();
    const auto menus = subsets_by_size(Menu{alphabet.actions()});
    std::function<bool(std::vector<Menu>&, std::vector<Action>&)> walk =
        [&](std::vector<Menu>& ms, std::vector<Action>& as) -> bool {
        for (const auto& m : menus) {
            ms.push_back(m);
            const ReadyTrace t{ms, as};
            const auto p = pn(g1, t);
            const auto q = pn(g2, t);
            if (!(p == q)) return false;
            if (ms.size() < depth && p.is_defined() && p.value() > 0) {
                for (const auto& a : m.actions()) {
                    as.push_back(a);
                    if (!walk(ms, as)) return false;
                    as.pop_back();
                }
            }
            ms.pop_back();
        }
        return true;
    };
    std::vector<Menu> ms;
    std::vector<Action> as;
    return walk(ms, as);
}

} // namespace

TEST_CASE("ready traces alternate menus and actions") {
    const ReadyTrace t{{Menu{"h", "t"}, Menu{"p"}}, {"h"}};
    CHECK(to_string(t) == "{h,t} h {p}");
    CHECK(parse_ready_trace("{h,t} h {p}") == t);
    CHECK(parse_ready_trace("{h t}h{p}") == t);
    CHECK(parse_ready_trace("{}") == ReadyTrace{{Menu{}}, {}});
    CHECK_THROWS_AS((ReadyTrace{{Menu{"h"}, Menu{}}, {"t"}}), std::invalid_argument);
    CHECK_THROWS_AS((ReadyTrace{{}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_ready_trace("{h} h"), ParseError);
    CHECK_THROWS_AS(parse_ready_trace("{h} t {p}"), ParseError);
    CHECK_THROWS_AS(parse_ready_trace("h {p}"), ParseError);
}

TEST_CASE("p1") {
    const auto s = fixtures::coin_first();
    CHECK(p1(s, Menu{"h", "t"}) == 1);
    CHECK(p1(s, Menu{"h"}) == 0);
    CHECK(p1(*s.find_state("s1"), Menu{"h", "t"}) == 1);
}

TEST_CASE("pn on the coin machines") {
    const auto trace = parse_ready_trace("{h,t} h {p}");
    CHECK(pn(fixtures::coin_first(), trace) == TraceProbability{Rational(1, 2)});
    CHECK(pn(fixtures::coin_after(), trace) == TraceProbability{Rational(1, 2)});
    CHECK_FALSE(pn(fixtures::coin_first(), parse_ready_trace("{h} h {p}")).is_defined());
    CHECK(to_string(pn(fixtures::coin_first(), parse_ready_trace("{h} h {p}"))) == "undefined");
    CHECK(pn(fixtures::coin_first(), parse_ready_trace("{h,t} t {} ")) == TraceProbability{Rational(1, 2)});
    CHECK_THROWS(TraceProbability::undefined().value());
}

TEST_CASE("rt_equiv") {
    const auto s = fixtures::coin_first();
    const auto sbar = fixtures::coin_after();
    CHECK(rt_equiv(s, sbar, 4).equivalent);
    CHECK(rt_equiv(s, s, 1).equivalent);
    const auto v = rt_equiv(fixtures::ca(), fixtures::cb(), 2);
    REQUIRE_FALSE(v.equivalent);
    CHECK(to_string(*v.witness) == "{c} c {a}");
    CHECK(v.first == TraceProbability{Rational(1)});
    CHECK(v.second == TraceProbability{Rational(0)});
    CHECK(rt_equiv(fixtures::ca(), fixtures::cb(), 1).equivalent);
    CHECK(completeness_depth(s, sbar) == 3);
    CHECK_THROWS_AS(rt_equiv(s, sbar, 0), std::invalid_argument);
}

TEST_CASE("probabilities satisfy the Bayesian axioms on random graphs") {
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        const auto alphabet = random_alphabet(rng);
        const auto g = to_graph(random_term(rng, alphabet, uniform(rng, 1, 3)), alphabet);
        const auto menus = subsets_by_size(Menu{alphabet.actions()});
        Rational total = 0;
        for (const auto& m : menus) total += p1(g, m);
        REQUIRE(total == 1);
        // Every defined prefix of length <= 3.
        std::function<void(std::vector<Menu>, std::vector<Action>)> walk = [&](std::vector<Menu> ms,
                                                                               std::vector<Action> as) {
            Rational sum = 0;
            for (const auto& m : menus) {
                auto next = ms;
                next.push_back(m);
                const auto p = pn(g, ReadyTrace{next, as});
                REQUIRE(p.is_defined());
                REQUIRE(p.value() >= 0);
                REQUIRE(p.value() <= 1);
                sum += p.value();
                if (next.size() < 3 && p.value() > 0) {
                    for (const auto& a : m.actions()) {
                        auto acts = as;
                        acts.push_back(a);
                        walk(next, acts);
                    }
                }
            }
            REQUIRE(sum == 1);
        };
        walk({}, {});
    }
}

TEST_CASE("rt_equiv agrees with full menu enumeration") {
    Rng rng(17);
    std::set<bool> seen;
    for (int i = 0; i < 150; ++i) {
        const auto pair = random_pair(rng);
        const std::size_t depth = completeness_depth(pair.first, pair.second);
        const auto fast = rt_equiv(pair.first, pair.second, depth);
        REQUIRE(fast.equivalent == naive_rt_equiv(pair.first, pair.second, depth));
        if (!fast.equivalent) {
            // The witness really distinguishes and nothing shorter does.
            REQUIRE_FALSE(pn(pair.first, *fast.witness) == pn(pair.second, *fast.witness));
            if (fast.witness->length() > 1) {
                REQUIRE(rt_equiv(pair.first, pair.second, fast.witness->length() - 1).equivalent);
            }
        }
        seen.insert(fast.equivalent);
    }
    CHECK(seen.size() == 2);
}
