#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace stacksp;
using testsupport::graph_y;

TEST_CASE("consumer picks the optimistic side of cost ties") {
    const StackInstance inst = graph_y();

    // Uniform 3: s->a->t costs 4, tying the direct edge; revenue wins the tie.
    PurchaseResult r = consumer_best_response(inst, testsupport::flat_pricing(inst, Rat(3)));
    CHECK(r.path == std::vector<int>{1, 2});
    CHECK(r.total_cost == Rat(4));
    CHECK(r.revenue == Rat(3));
    CHECK(r.pricable_count == 1);

    // Uniform 1: both detours cost 2; the two-pricable one earns more.
    r = consumer_best_response(inst, testsupport::flat_pricing(inst, Rat(1)));
    CHECK(r.path == std::vector<int>{3, 4});
    CHECK(r.total_cost == Rat(2));
    CHECK(r.revenue == Rat(2));
}

TEST_CASE("INFINITE prices remove edges from consideration") {
    const StackInstance inst = graph_y();
    const PurchaseResult r = consumer_best_response(inst, testsupport::sparse_pricing(inst, {}));
    CHECK(r.path == std::vector<int>{0});
    CHECK(r.total_cost == Rat(4));
    CHECK(r.revenue == Rat(0));
    CHECK(r.pricable_count == 0);
}

TEST_CASE("consumer requires a well-formed pricing and a reachable sink") {
    const StackInstance inst = graph_y();
    Pricing partial;
    partial.prices[1] = Price::finite(Rat(1));
    CHECK_THROWS_AS(consumer_best_response(inst, partial), InputError);

    StackInstance cut;  // single pricable edge, priced INFINITE
    cut.node_count = 2;
    cut.edges = {{0, 0, 1, EdgeKind::Pricable, Rat(0)}};
    cut.source = 0;
    cut.sink = 1;
    CHECK_THROWS_AS(consumer_best_response(cut, testsupport::sparse_pricing(cut, {})),
                    NoPathError);
}

TEST_CASE("equal cost and revenue fall back to the least edge sequence") {
    StackInstance inst;
    inst.node_count = 3;
    inst.edges = {
        {0, 0, 2, EdgeKind::Fixed, Rat(1)}, {1, 0, 1, EdgeKind::Fixed, Rat(1)},
        {2, 1, 2, EdgeKind::Fixed, Rat(0)},
    };
    inst.source = 0;
    inst.sink = 2;
    const PurchaseResult r = consumer_best_response(inst, Pricing{});
    CHECK(r.path == std::vector<int>{0});
}

TEST_CASE("normalize_pricing keeps only purchased prices finite") {
    const StackInstance inst = graph_y();
    const Pricing all_one = testsupport::flat_pricing(inst, Rat(1));
    const auto [normalized, purchase] = normalize_pricing(inst, all_one);
    CHECK(purchase.path == std::vector<int>{3, 4});
    CHECK(normalized.at(1).is_infinite());
    CHECK(normalized.at(3) == Price::finite(Rat(1)));
    CHECK(normalized.at(4) == Price::finite(Rat(1)));
    CHECK(consumer_best_response(inst, normalized) == purchase);
}

TEST_CASE("consumer handles cycles with zero-cost edges") {
    // 0 -> 1 -> 0 cycle at cost 0 plus a costlier direct edge; the cheapest
    // simple path must still be found and be cycle-free.
    StackInstance inst;
    inst.node_count = 3;
    inst.edges = {
        {0, 0, 1, EdgeKind::Fixed, Rat(0)}, {1, 1, 0, EdgeKind::Fixed, Rat(0)},
        {2, 1, 2, EdgeKind::Fixed, Rat(2)}, {3, 0, 2, EdgeKind::Fixed, Rat(3)},
    };
    inst.source = 0;
    inst.sink = 2;
    const PurchaseResult r = consumer_best_response(inst, Pricing{});
    CHECK(r.path == std::vector<int>{0, 2});
    CHECK(r.total_cost == Rat(2));
}

TEST_CASE("consumer matches the exhaustive oracle on random DAGs") {
    Rng rng(2024);
    int compared = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const StackInstance inst = testsupport::random_dag(rng);
        const Pricing p = testsupport::random_pricing(inst, rng);
        const auto expected = testsupport::oracle_best_response(inst, p);
        if (!expected) {
            CHECK_THROWS_AS(consumer_best_response(inst, p), NoPathError);
            continue;
        }
        const PurchaseResult got = consumer_best_response(inst, p);
        REQUIRE(got.path == expected->path);
        REQUIRE(got.total_cost == expected->cost);
        REQUIRE(got.revenue == expected->revenue);
        REQUIRE(got.pricable_count == expected->pricable_count);
        ++compared;
    }
    CHECK(compared > 200);  // most random instances must actually have a path
}

TEST_CASE("consumer matches the exhaustive oracle on random cyclic graphs") {
    Rng rng(77);
    int compared = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const StackInstance inst = testsupport::random_cyclic(rng);
        const Pricing p = testsupport::random_pricing(inst, rng);
        const auto expected = testsupport::oracle_best_response(inst, p);
        if (!expected) {
            CHECK_THROWS_AS(consumer_best_response(inst, p), NoPathError);
            continue;
        }
        const PurchaseResult got = consumer_best_response(inst, p);
        REQUIRE(got.path == expected->path);
        REQUIRE(got.total_cost == expected->cost);
        REQUIRE(got.revenue == expected->revenue);
        REQUIRE(got.pricable_count == expected->pricable_count);
        ++compared;
    }
    CHECK(compared > 100);
}
