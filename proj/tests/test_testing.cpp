#include <catch_amalgamated.hpp>

#include <functional>
#include <set>

#include "fixtures.hpp"
#include "generators.hpp"
#include "reactest/errors.hpp"
#include "reactest/pts_format.hpp"
#include "reactest/ready_trace.hpp"
#include "reactest/testing.hpp"

using namespace reactest;
using namespace reactest::testsupport;

namespace {

const Alphabet kAB{"a", "b"};

Test omega(const Alphabet& al = kAB) { return Test::success(al); }
Test zero(const Alphabet& al = kAB) { return Test::deadlock(al); }

// Canonical text of a deterministic test: w, 0 or [a:..,b:..].
std::string shape(const Node& n) {
    if (n.success) return "w";
    if (n.actions.empty()) return "0";
    std::string out = "[";
    for (const auto& e : n.actions) out += e.action + ":" + shape(*e.target) + ",";
    return out + "]";
}

// Independent enumerator of the same family, by strings.
std::set<std::string> all_shapes(const std::vector<Action>& alphabet, std::size_t depth) {
    std::set<std::string> out{"w", "0"};
    if (depth == 0) return out;
    const auto children = all_shapes(alphabet, depth - 1);
    std::function<void(std::size_t, std::string, bool)> build = [&](std::size_t i, std::string acc, bool any) {
        if (i == alphabet.size()) {
            if (any) out.insert("[" + acc + "]");
            return;
        }
        build(i + 1, acc, any);
        for (const auto& c : children) build(i + 1, acc + alphabet[i] + ":" + c + ",", true);
    };
    build(0, "", false);
    return out;
}

// R with the test-side case tried before the process-side one.
RationalFn result_test_first(const NodePtr& s, const NodePtr& t) {
    if (!t->is_probabilistic() && t->success) return rf_const(1);
    RationalFn value;
    if (t->is_probabilistic()) {
        for (const auto& b : t->branches) value += rf_const(b.probability) * result_test_first(s, b.target);
    } else if (s->is_probabilistic()) {
        for (const auto& b : s->branches) value += rf_const(b.probability) * result_test_first(b.target, t);
    } else {
        const Menu k = menu(*s) & menu(*t);
        RationalFn sum;
        for (const auto& a : k.actions()) sum += rf_var(a);
        for (const auto& a : k.actions()) {
            value += rf_var(a) / sum * result_test_first(*s->successor(a), *t->successor(a));
        }
    }
    return value;
}

Assignment random_point(Rng& rng, const Alphabet& alphabet) {
    Assignment p;
    for (const auto& a : alphabet.actions()) {
        p[a] = Rational{static_cast<unsigned long>(uniform(rng, 1, 1000))} /
               Rational{static_cast<unsigned long>(uniform(rng, 1, 1000))};
    }
    return p;
}

// A process in which every action state above `depth` offers something.
Term busy_action(Rng& rng, const Alphabet& alphabet, std::size_t depth);

Term busy_term(Rng& rng, const Alphabet& alphabet, std::size_t depth) {
    if (!coin(rng, 0.4)) return busy_action(rng, alphabet, depth);
    Term t;
    t.prob = true;
    const std::size_t k = uniform(rng, 1, 3);
    for (std::size_t i = 0; i < k; ++i) {
        t.probs.emplace_back(Rational{1} / Rational{static_cast<unsigned long>(k)});
        t.children.push_back(busy_action(rng, alphabet, depth));
    }
    return t;
}

Term busy_action(Rng& rng, const Alphabet& alphabet, std::size_t depth) {
    Term t;
    if (depth == 0) return t;
    for (const auto& a : alphabet.actions()) {
        if (coin(rng, 0.5) || (a == alphabet.actions().back() && t.labels.empty())) {
            t.labels.push_back(a);
            t.children.push_back(busy_term(rng, alphabet, depth - 1));
        }
    }
    return t;
}

Test full_test(const Alphabet& alphabet, std::size_t depth) {
    if (depth == 0) return Test::success(alphabet);
    std::vector<std::pair<Action, Test>> branches;
    for (const auto& a : alphabet.actions()) branches.emplace_back(a, full_test(alphabet, depth - 1));
    return Test::choice(alphabet, branches);
}

} // namespace

TEST_CASE("test factories") {
    const auto t = Test::choice(kAB, {{"b", zero()}, {"a", omega()}});
    CHECK(t.is_deterministic());
    CHECK(t.depth() == 1);
    CHECK(menu(*t.root()) == Menu{"a", "b"});
    CHECK_THROWS_AS(Test::choice(kAB, {{"a", omega()}, {"a", zero()}}), std::invalid_argument);
    CHECK_THROWS_AS(Test::choice(kAB, {{"z", omega()}}), std::invalid_argument);
    const auto m = Test::mix(kAB, {{Rational(1, 2), t}, {Rational(1, 2), omega()}});
    CHECK_FALSE(m.is_deterministic());
    CHECK_THROWS_AS(Test::mix(kAB, {{Rational(1, 2), t}}), ValidationError);
}

TEST_CASE("result on the coin machines is one half") {
    const auto u = fixtures::user();
    CHECK(rf_eq(result(fixtures::coin_first(), u), rf_const(Rational(1, 2))));
    CHECK(rf_eq(result(fixtures::coin_after(), u), rf_const(Rational(1, 2))));
    CHECK(to_string(result(fixtures::coin_first(), u)) == "1/2");
}

TEST_CASE("result case analysis") {
    const auto s = fixtures::process("actions a b\nr -a-> x\nr -b-> y\n");
    CHECK(rf_eq(result(s, omega()), rf_const(1)));
    CHECK(result(s, zero()).is_zero());
    const auto t = Test::choice(kAB, {{"a", omega()}, {"b", zero()}});
    CHECK(to_string(result(s, t)) == "a/(a + b)");
    // Empty joint menu gives 0 even below a success-free root.
    const auto only_b = fixtures::process("actions a b\nr -b-> y\n");
    CHECK(result(only_b, Test::choice(kAB, {{"a", omega()}})).is_zero());
}

TEST_CASE("deterministic test enumeration") {
    const Alphabet one{"a"};
    CHECK(enumerate_det_tests(one, 0).size() == 2);
    std::set<std::string> depth1;
    for (const auto& t : enumerate_det_tests(one, 1)) depth1.insert(shape(*t.root()));
    CHECK(depth1 == std::set<std::string>{"w", "0", "[a:w,]", "[a:0,]"});

    CHECK(count_det_tests(1, 1) == 4);
    CHECK(count_det_tests(2, 1) == 10);
    CHECK(count_det_tests(2, 2) == 122);
    CHECK(count_det_tests(2, 3) == 15130);
    CHECK(count_det_tests(3, 1) == 28);
    CHECK(count_det_tests(3, 2) == 24390);
    CHECK(count_det_tests(3, 5) == UINT64_MAX);

    for (const auto& [al, depth] : std::vector<std::pair<Alphabet, std::size_t>>{
             {Alphabet{"a", "b"}, 1}, {Alphabet{"a", "b"}, 2}, {Alphabet{"a", "b", "c"}, 1},
             {Alphabet{"a", "b"}, 3}, {Alphabet{"a", "b", "c"}, 2}}) {
        std::vector<std::string> shapes;
        for_each_det_test(al, depth, [&](const Test& t) {
            shapes.push_back(shape(*t.root()));
            return true;
        });
        const std::set<std::string> unique(shapes.begin(), shapes.end());
        CHECK(unique.size() == shapes.size());
        CHECK(unique == all_shapes(al.actions(), depth));
        CHECK(shapes.size() == count_det_tests(al.size(), depth));
    }
}

TEST_CASE("enumeration respects the budget") {
    CHECK_THROWS_AS(enumerate_det_tests(Alphabet{"a", "b", "c"}, 3), ResourceError);
    CHECK_THROWS_AS(enumerate_det_tests(Alphabet{"a", "b"}, 2, 100), ResourceError);
    std::size_t seen = 0;
    for_each_det_test(Alphabet{"a", "b"}, 2, [&](const Test&) { return ++seen < 5; });
    CHECK(seen == 5);
}

TEST_CASE("testing_equiv examples") {
    const auto s = fixtures::coin_first();
    const auto sbar = fixtures::coin_after();
    CHECK(testing_equiv(s, sbar, 4).equivalent);
    CHECK(testing_equiv(s, sbar).equivalent);
    CHECK(testing_equiv(s, s).equivalent);

    const auto v = testing_equiv(fixtures::ca(), fixtures::cb());
    REQUIRE_FALSE(v.equivalent);
    REQUIRE(v.witness);
    CHECK(shape(*v.witness->test.root()) == "[c:[a:w,],]");
    CHECK(to_string(v.witness->first) == "1");
    CHECK(v.witness->second.is_zero());

    TestingOptions exhaustive;
    exhaustive.strategy = Strategy::Exhaustive;
    exhaustive.depth = 2;
    const auto e = testing_equiv(fixtures::ca(), fixtures::cb(), exhaustive);
    REQUIRE_FALSE(e.equivalent);
    CHECK_FALSE(rf_eq(result(fixtures::ca(), e.witness->test), result(fixtures::cb(), e.witness->test)));
}

TEST_CASE("the distribution law holds") {
    CHECK(testing_equiv(fixtures::late_choice(), fixtures::early_choice()).equivalent);
    CHECK(rt_equiv(fixtures::late_choice(), fixtures::early_choice(), 4).equivalent);
}

TEST_CASE("the all-zero stopping rule") {
    const auto dead = fixtures::process("actions a\nroot x\n");
    const auto v = testing_equiv(dead, dead, 5);
    CHECK(v.equivalent);
    CHECK(v.stopped_at == 1u);
    const auto short1 = fixtures::process("actions a\nx -a-> y\n");
    const auto w = testing_equiv(short1, short1, 6);
    CHECK(w.stopped_at == 2u);
}

TEST_CASE("default decision depth") {
    CHECK(default_decision_depth(fixtures::coin_first(), fixtures::ca()) == 3);
}

TEST_CASE("spine and exhaustive strategies agree") {
    Rng rng(41);
    int different = 0;
    for (int i = 0; i < 120; ++i) {
        auto pair = random_pair(rng);
        const std::size_t depth = default_decision_depth(pair.first, pair.second);
        if (count_det_tests(pair.alphabet.size(), depth) > 30000) continue;
        TestingOptions spine, exhaustive;
        spine.depth = exhaustive.depth = depth;
        exhaustive.strategy = Strategy::Exhaustive;
        const auto a = testing_equiv(pair.first, pair.second, spine);
        const auto b = testing_equiv(pair.first, pair.second, exhaustive);
        REQUIRE(a.equivalent == b.equivalent);
        different += !a.equivalent;
    }
    CHECK(different > 5);
}

TEST_CASE("outcomes lie in [0,1] at random points") {
    Rng rng(8);
    for (int i = 0; i < 60; ++i) {
        const auto alphabet = random_alphabet(rng);
        const auto g = to_graph(random_term(rng, alphabet, uniform(rng, 1, 3)), alphabet);
        const auto t = to_test(random_test_term(rng, alphabet, uniform(rng, 1, 3), true), alphabet);
        const auto r = result(g, t);
        for (int k = 0; k < 100; ++k) {
            const auto value = rf_eval(r, random_point(rng, alphabet));
            REQUIRE(value >= 0);
            REQUIRE(value <= 1);
        }
    }
}

TEST_CASE("full tests on busy processes always succeed") {
    Rng rng(12);
    for (int i = 0; i < 40; ++i) {
        const auto alphabet = random_alphabet(rng);
        const std::size_t depth = uniform(rng, 1, 3);
        const auto g = to_graph(busy_term(rng, alphabet, depth), alphabet);
        REQUIRE(validate(g).empty());
        const auto r = result(g, full_test(alphabet, depth));
        REQUIRE(r.is_scalar());
        REQUIRE(r.scalar_value() == 1);
    }
}

TEST_CASE("case order does not change the outcome") {
    Rng rng(21);
    for (int i = 0; i < 150; ++i) {
        const auto alphabet = random_alphabet(rng);
        const auto g = to_graph(random_term(rng, alphabet, uniform(rng, 1, 3)), alphabet);
        const auto t = to_test(random_test_term(rng, alphabet, uniform(rng, 1, 3), true), alphabet);
        REQUIRE(rf_eq(result(g, t), result_test_first(g.root(), t.root())));
    }
}

TEST_CASE("probabilistic tests never beat deterministic ones") {
    Rng rng(33);
    int distinguished = 0;
    for (int i = 0; i < 60; ++i) {
        const auto pair = random_pair(rng);
        std::optional<bool> decided;
        for (int k = 0; k < 50; ++k) {
            const auto t = to_test(random_test_term(rng, pair.alphabet, uniform(rng, 1, 3), true), pair.alphabet);
            if (rf_eq(result(pair.first, t), result(pair.second, t))) continue;
            if (!decided) decided = testing_equiv(pair.first, pair.second).equivalent;
            REQUIRE_FALSE(*decided);
            ++distinguished;
        }
    }
    CHECK(distinguished > 0);
}

TEST_CASE("distinguisher synthesis") {
    const Alphabet ab{"a", "b"};
    const auto only_a = fixtures::process("actions a b\nr -a-> x\n");
    const auto only_b = fixtures::process("actions a b\nr -b-> x\n");
    const auto t = synthesize_distinguisher(only_a, only_b);
    REQUIRE(t);
    CHECK(shape(*t->root()) == "[b:w,]");
    CHECK(result(only_a, *t).is_zero());
    CHECK(to_string(result(only_b, *t)) == "1");

    CHECK_FALSE(synthesize_distinguisher(fixtures::coin_first(), fixtures::coin_after()));

    const auto c = synthesize_distinguisher(fixtures::ca(), fixtures::cb());
    REQUIRE(c);
    REQUIRE(c->root()->successor("c"));
    CHECK_FALSE(rf_eq(result(fixtures::ca(), *c), result(fixtures::cb(), *c)));
}

TEST_CASE("synthesized tests distinguish random inequivalent pairs") {
    Rng rng(55);
    int found = 0;
    for (int i = 0; i < 150; ++i) {
        const auto pair = random_pair(rng);
        const bool equivalent = rt_equiv(pair.first, pair.second, completeness_depth(pair.first, pair.second)).equivalent;
        const auto t = synthesize_distinguisher(pair.first, pair.second);
        REQUIRE(t.has_value() == !equivalent);
        if (!t) continue;
        REQUIRE(t->is_deterministic());
        REQUIRE_FALSE(rf_eq(result(pair.first, *t), result(pair.second, *t)));
        ++found;
    }
    CHECK(found > 20);
}

TEST_CASE("verify_theorem3") {
    const auto s = fixtures::coin_first();
    const auto report = verify_theorem3({{s, s}, {fixtures::ca(), fixtures::cb()}, {s, fixtures::coin_after()}});
    CHECK(report.ok());
    CHECK(report.pairs == 3);
    CHECK(report.equivalent == 2);

    Rng rng(71);
    std::vector<std::pair<ProcessGraph, ProcessGraph>> pairs;
    for (int i = 0; i < 100; ++i) {
        auto p = random_pair(rng);
        pairs.emplace_back(p.first, p.second);
    }
    const auto random_report = verify_theorem3(pairs);
    CHECK(random_report.ok());
    CHECK(random_report.equivalent > 10);
    CHECK(random_report.equivalent < 90);
}
