#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ccn/library.hpp"
#include "ccn/network.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ccn;
using testing::make_net;
using testing::part;

TEST_CASE("network construction rejects bad input") {
    Network net;
    net.add_node(1, "A");
    CHECK_THROWS_AS(net.add_node(1, "A"), std::runtime_error);
    CHECK_THROWS_AS(net.add_arrow(1, 2, "s"), std::runtime_error);
    net.add_node(2, "A");
    net.add_arrow(1, 2, "s", 5);
    CHECK_THROWS_AS(net.add_arrow(2, 1, "s", 5), std::runtime_error);
    CHECK_THROWS_AS((void)net.index_of(7), std::runtime_error);
}

TEST_CASE("inputs are in standard order") {
    auto net = make_net(3, {{3, 1, "t"}, {2, 1, "s"}, {3, 1, "s"}});
    const auto& in = net.inputs(0);
    REQUIRE(in.size() == 3);
    CHECK(net.arrow(in[0]).type == "s");
    CHECK(net.node_id(net.arrow(in[0]).tail) == 2);
    CHECK(net.node_id(net.arrow(in[1]).tail) == 3);
    CHECK(net.arrow(in[2]).type == "t");
}

TEST_CASE("vertex group orders") {
    auto ring = library::three_ring_mixed();
    CHECK(vertex_group(ring, 0).order() == 1);

    auto three = make_net(4, {{2, 1, "s"}, {3, 1, "s"}, {4, 1, "s"}});
    CHECK(vertex_group(three, 0).order() == 6);
    CHECK(vertex_group(three, 0).elements().size() == 6);

    auto mixed = make_net(2, {{2, 1, "solid"}, {2, 1, "dashed"}});
    CHECK(vertex_group(mixed, 0).order() == 1);

    // two blocks: S2 x S3
    auto blocks = make_net(4, {{2, 1, "s"}, {3, 1, "s"}, {2, 1, "t"}, {3, 1, "t"}, {4, 1, "t"}});
    CHECK(vertex_group(blocks, 0).order() == 12);
}

TEST_CASE("vertex group order equals the number of self input isomorphisms") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        auto net = oracle::random_network(rng, 3, 2, 3);
        for (std::size_t c = 0; c < net.size(); ++c)
            CHECK(vertex_group(net, c).order() == input_isomorphisms(net, c, c).size());
    }
}

TEST_CASE("input classes") {
    auto ring = library::three_ring_mixed();
    CHECK(input_classes(ring) == part(ring, {{1, 2}, {3}}));

    auto pair = library::symmetric_pair();
    CHECK(input_classes(pair) == part(pair, {{1, 2}}));

    // all-to-all with a distinct arrow type per head
    auto all = make_net(3, {{2, 1, "a"}, {3, 1, "a"}, {1, 2, "b"}, {3, 2, "b"}, {1, 3, "c"}, {2, 3, "c"}});
    CHECK(input_classes(all) == part(all, {{1}, {2}, {3}}));

    auto types = make_net(2, {}, {"A", "B"});
    CHECK_FALSE(input_equivalent(types, 0, 1));
}

TEST_CASE("state equivalence") {
    auto ring = library::three_ring_mixed();
    CHECK(state_equivalence(ring) == part(ring, {{1, 2, 3}}));

    auto iso = make_net(2, {}, {"A", "B"});
    CHECK(state_equivalence(iso) == part(iso, {{1}, {2}}));

    // 1, 2 input equivalent with tails 3, 4 of distinct types: closure merges 3 and 4
    auto forced = make_net(4, {{3, 1, "s"}, {4, 2, "s"}}, {"A", "A", "B", "C"});
    CHECK(state_equivalence(forced) == part(forced, {{1, 2}, {3, 4}}));
}

TEST_CASE("input classes refine state equivalence") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto net = oracle::random_network(rng, 4, 2, 3, 2);
        auto ic = input_class_labels(net);
        auto se = labels_from_partition(state_equivalence(net), net.size());
        CHECK(oracle::finer_eq(ic, se));
    }
}

TEST_CASE("validation") {
    auto ring = library::three_ring_mixed();
    auto rep = validate_network(ring, {2, 2, 2});
    CHECK(rep.state_classes.size() == 1);
    CHECK(rep.warnings.empty());
    CHECK_THROWS_AS(validate_network(ring, {2, 2, 3}), std::runtime_error);
    CHECK_THROWS_AS(validate_network(ring, {2, 2}), std::runtime_error);

    auto red = make_net(2, {{1, 1, "s"}, {1, 2, "s"}, {2, 2, "t"}});
    CHECK_FALSE(validate_network(red, {1, 1}).warnings.empty());
}

TEST_CASE("transitive components") {
    auto fig = library::two_source_feedforward();
    auto dag = transitive_components(fig);
    CHECK(dag.components.size() == 3);
    std::set<std::vector<std::size_t>> maximal;
    for (auto k : dag.maximal) maximal.insert(dag.components[k]);
    CHECK(maximal == std::set<std::vector<std::size_t>>{{0}, {1}});
    CHECK_FALSE(is_transitive(fig));

    auto ring = library::three_ring_mixed();
    CHECK(transitive_components(ring).components.size() == 1);
    CHECK(is_transitive(ring));

    auto ff = make_net(2, {{1, 2, "s"}});
    auto d2 = transitive_components(ff);
    REQUIRE(d2.maximal.size() == 1);
    CHECK(d2.components[d2.maximal[0]] == std::vector<std::size_t>{0});
}

TEST_CASE("condensation is acyclic") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto net = oracle::random_network(rng, 5, 2, 4);
        auto dag = transitive_components(net);
        const std::size_t k = dag.components.size();
        // Kahn's algorithm must consume every component
        std::vector<int> indeg(k, 0);
        for (std::size_t a = 0; a < k; ++a)
            for (auto b : dag.downstream[a]) {
                CHECK(b != a);
                ++indeg[b];
            }
        for (std::size_t a = 0; a < k; ++a) {
            bool is_max = std::find(dag.maximal.begin(), dag.maximal.end(), a) != dag.maximal.end();
            CHECK(is_max == (indeg[a] == 0));
        }
        std::vector<std::size_t> queue;
        for (std::size_t a = 0; a < k; ++a)
            if (indeg[a] == 0) queue.push_back(a);
        std::size_t seen = 0;
        while (!queue.empty()) {
            auto a = queue.back();
            queue.pop_back();
            ++seen;
            for (auto b : dag.downstream[a])
                if (--indeg[b] == 0) queue.push_back(b);
        }
        CHECK(seen == k);
    }
}

TEST_CASE("upstream closure") {
    auto fig = library::two_source_feedforward();
    auto up = upstream_closure(fig, {2});
    CHECK(up == std::vector<std::size_t>{0, 1, 2});
    CHECK(upstream_closure(fig, {0}) == std::vector<std::size_t>{0});
}

TEST_CASE("automorphisms") {
    CHECK(automorphisms(library::symmetric_pair()).size() == 2);
    CHECK(automorphisms(library::three_ring_mixed()).size() == 1);
    auto z3 = automorphisms(library::three_ring_uniform());
    CHECK(z3.size() == 3);

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 80; ++trial) {
        auto net = oracle::random_network(rng, 4, 2, 4, 2);
        auto got = automorphisms(net);
        auto want = oracle::automorphisms(net);
        std::sort(got.begin(), got.end());
        CHECK(got == want);
        // group axioms: identity, closure, inverses
        std::set<Permutation> g(got.begin(), got.end());
        Permutation id(net.size());
        for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
        CHECK(g.count(id) == 1);
        for (const auto& p : got) {
            Permutation inv(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
            CHECK(g.count(inv) == 1);
            for (const auto& q : got) {
                Permutation pq(p.size());
                for (std::size_t i = 0; i < p.size(); ++i) pq[i] = p[q[i]];
                CHECK(g.count(pq) == 1);
            }
        }
    }
    CHECK_THROWS_AS(automorphisms(make_net(9, {})), std::runtime_error);
}

TEST_CASE("isomorphism search") {
    auto a = library::three_ring_uniform();
    auto b = make_net(3, {{2, 1, "solid"}, {3, 2, "solid"}, {1, 3, "solid"}});
    CHECK(find_isomorphism(a, b).has_value());
    CHECK_FALSE(find_isomorphism(a, library::three_ring_mixed()).has_value());
}
