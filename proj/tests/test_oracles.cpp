#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "advbound/oracles.hpp"

using namespace advbound;

namespace {

SimpleGraph cycle(int n) {
    SimpleGraph g;
    g.n = n;
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

SimpleGraph complete(int n) {
    SimpleGraph g;
    g.n = n;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

SimpleGraph petersen() {
    SimpleGraph g;
    g.n = 10;
    for (int i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);   // outer cycle
        g.add_edge(i, i + 5);         // spoke
        g.add_edge(5 + i, 5 + (i + 2) % 5);  // inner pentagram
    }
    return g;
}

}  // namespace

TEST_CASE("function evaluation") {
    CHECK(eval_kdist({1, 2, 1}, 2));
    CHECK_FALSE(eval_kdist({1, 2, 3}, 2));
    CHECK(eval_kdist({4, 1, 4, 2, 4}, 3));
    CHECK_FALSE(eval_kdist({4, 1, 4, 2, 3}, 3));
    CHECK_THROWS(eval_kdist({1, 1}, 1));

    auto c3 = complete(3);
    CHECK(eval_graph_collision(c3, {1, 1, 0}));
    CHECK_FALSE(eval_graph_collision(c3, {1, 0, 0}));
    CHECK_FALSE(eval_graph_collision(cycle(4), {1, 0, 1, 0}));
    CHECK_THROWS(eval_graph_collision(c3, {1, 1}));
}

TEST_CASE("witness extraction") {
    CHECK(has_unique_ktuple({1, 2, 1, 3}, 2));
    CHECK_FALSE(has_unique_ktuple({1, 1, 2, 2}, 2));    // two pairs
    CHECK_FALSE(has_unique_ktuple({1, 1, 1}, 2));       // triple, not exact
    CHECK(has_unique_ktuple({2, 1, 2, 1, 2}, 3));

    CHECK(marked_positions({3, 1, 3, 1}, 2) == std::vector<int>{0, 2});
    CHECK(marked_positions({2, 1, 1, 2}, 2) == std::vector<int>{0, 3});  // lex-first pair
    CHECK(marked_positions({1, 2, 3}, 2).empty());
    CHECK(marked_positions({1, 1, 1, 1}, 3) == std::vector<int>{0, 1, 2});

    auto c4 = cycle(4);
    auto e = marked_edge(c4, {1, 1, 1, 0});
    REQUIRE(e.has_value());
    CHECK(*e == std::pair<int, int>{0, 1});
    CHECK_FALSE(marked_edge(c4, {1, 0, 1, 0}).has_value());
}

TEST_CASE("1-certificate size") {
    auto kd2 = ProblemSpec::kdist(2);
    CHECK(certificate_complexity_1(kd2, {1, 1, 2}) == 2);
    // m=3 over 5 positions: the empty assignment already forces a repeat.
    CHECK(certificate_complexity_1(kd2, {1, 2, 3, 1, 2}, 3) == 0);
    CHECK(certificate_complexity_1(kd2, {1, 2, 3}) == -1);
    CHECK(certificate_complexity_1(ProblemSpec::kdist(3), {2, 1, 2, 1, 2}) == 3);

    auto gc = ProblemSpec::graph_collision(complete(3), 1);
    CHECK(certificate_complexity_1(gc, {1, 1, 0}) == 2);
    CHECK(certificate_complexity_1(gc, {1, 0, 0}) == -1);
}

TEST_CASE("independence number") {
    CHECK(independence_number(petersen()) == 4);
    CHECK(independence_number(complete(5)) == 1);
    SimpleGraph empty5;
    empty5.n = 5;
    CHECK(independence_number(empty5) == 5);
    CHECK(independence_number(cycle(8)) == 4);
    CHECK(independence_number(cycle(7)) == 3);
}

TEST_CASE("reduction schedule") {
    CHECK(reduction_schedule(100, 2) ==
          std::vector<int>{100, 80, 64, 52, 41, 33, 27, 21, 17, 14, 11,
                           9,   7,  6,  5,  4,  3,  3,  2,  2,  2});
    CHECK(reduction_schedule(30, 3) ==
          std::vector<int>{30, 26, 23, 19, 17, 14, 12, 11, 9, 8, 7, 6, 5, 5, 4, 3, 3, 3});
    CHECK(reduction_schedule(1, 2) == std::vector<int>{1});
    CHECK(reduction_schedule(8, 3) == std::vector<int>{8, 7, 6, 6, 5, 4, 4, 3, 3});
    CHECK_THROWS(reduction_schedule(10, 1));
}

TEST_CASE("exhaustive domains") {
    auto kd2 = ProblemSpec::kdist(2);
    auto d1 = sample_promise_domain(kd2, 3, 2, SampleCounts::exhaustive(), 0);
    CHECK(d1.positives.size() == 8);  // pigeonhole: every word over {1,2} repeats
    CHECK(d1.negatives.empty());

    auto d2 = sample_promise_domain(kd2, 5, 3, SampleCounts::exhaustive(), 0);
    CHECK(d2.positives.size() == 243);
    CHECK(d2.negatives.empty());

    auto d3 = sample_promise_domain(kd2, 5, 3, SampleCounts::exhaustive(), 0,
                                    PromiseMode::UniqueKTuple);
    CHECK(d3.positives.empty());  // 2+1+1 < 5: no word has exactly one pair
    CHECK(d3.negatives.empty());

    auto d4 = sample_promise_domain(kd2, 5, 5, SampleCounts::exhaustive(), 0,
                                    PromiseMode::UniqueKTuple);
    CHECK(d4.positives.size() == 1200);
    CHECK(d4.negatives.size() == 120);
    CHECK(std::is_sorted(d4.positives.begin(), d4.positives.end()));

    auto gc = ProblemSpec::graph_collision(cycle(8), 4);
    auto d5 = sample_promise_domain(gc, 8, 2, SampleCounts::exhaustive(), 0, PromiseMode::MaxOnes);
    CHECK(d5.positives.size() == 209);
    CHECK(d5.negatives.size() == 47);

    auto kd3 = ProblemSpec::kdist(3);
    auto d6 = sample_promise_domain(kd3, 8, 4, SampleCounts::exhaustive(), 0,
                                    PromiseMode::UniqueKTuple);
    CHECK(d6.positives.size() == 20160);
    CHECK(d6.negatives.size() == 2520);

    CHECK_THROWS(sample_promise_domain(kd2, 20, 4, SampleCounts::exhaustive(), 0));
}

TEST_CASE("sampled domains are deterministic") {
    auto kd3 = ProblemSpec::kdist(3);
    auto a = sample_promise_domain(kd3, 10, 6, SampleCounts::sample(40, 40), 7,
                                   PromiseMode::UniqueKTuple);
    auto b = sample_promise_domain(kd3, 10, 6, SampleCounts::sample(40, 40), 7,
                                   PromiseMode::UniqueKTuple);
    CHECK(a.positives == b.positives);
    CHECK(a.negatives == b.negatives);
    CHECK(a.positives.size() == 40);
    CHECK(a.negatives.size() == 40);
    for (const auto& x : a.positives) CHECK(has_unique_ktuple(x, 3));
    for (const auto& y : a.negatives) CHECK_FALSE(eval_kdist(y, 3));

    auto c = sample_promise_domain(kd3, 10, 6, SampleCounts::sample(40, 40), 8,
                                   PromiseMode::UniqueKTuple);
    CHECK(a.positives != c.positives);
}

TEST_CASE("unachievable sample counts throw") {
    auto kd2 = ProblemSpec::kdist(2);
    // m=2, n=3: no negative exists at all.
    CHECK_THROWS(sample_promise_domain(kd2, 3, 2, SampleCounts::sample(0, 1), 1));
}

TEST_CASE("exact rationals") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(1, -3) == Rat(-1, 3));
    CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
    CHECK(Rat(1, 3) - Rat(1, 2) == Rat(-1, 6));
    CHECK(Rat(2, 3) * Rat(9, 4) == Rat(3, 2));
    CHECK(Rat(1, 2) / Rat(3) == Rat(1, 6));
    CHECK(Rat(1, 2) < Rat(2, 3));
    CHECK(Rat(5) == 5);
    CHECK(Rat(1, 3) != 0);
    CHECK(-Rat(1, 3) < 0);
    CHECK(rat_to_string(Rat(-6, 8)) == "-3/4");
    CHECK(rat_from_json(rat_to_json(Rat(22, 7))) == Rat(22, 7));
    CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
    long long big = 0x7fffffffffffffffLL;
    CHECK_THROWS_AS(Rat(big, 3) * Rat(big, 5), std::overflow_error);
    CHECK(Rat(big, 2) * Rat(2, big) == 1);  // reduces before it overflows
}

TEST_CASE("combinatorial helpers") {
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(6, 6) == 1);
    CHECK(binomial(4, 7) == 0);
    CHECK(multinomial(5, {1, 1, 1, 1, 1}) == 120);
    CHECK(multinomial(8, {1, 1}) == 56);
    CHECK(multinomial(3, {2}) == 3);

    WeightSq w(Rat(9, 4));
    CHECK(w.value() == doctest::Approx(1.5));
    auto j = w.to_json();
    CHECK(WeightSq::from_json(j).sq == Rat(9, 4));
}

TEST_CASE("graph parsing round trip") {
    auto g = SimpleGraph::from_edge_list("1 2\n2 3\n\n3 1\n");
    CHECK(g.n == 3);
    CHECK(g.edges.size() == 3);
    CHECK(independence_number(g) == 1);
    auto h = SimpleGraph::from_json(g.to_json());
    CHECK(h.edges == g.edges);
    CHECK_THROWS(SimpleGraph::from_edge_list("0 2\n"));
}
