#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace stacksp;
using testsupport::lc1;
using testsupport::lc2;
using testsupport::lc3;
using testsupport::lc_long_shortcut;
using testsupport::sparse_pricing;

TEST_CASE("reduce lays out spine, branches, and bypasses deterministically") {
    const auto [inst, map] = reduce(lc1());
    CHECK(inst.node_count == 4);
    CHECK(inst.edges.size() == 4);
    CHECK(map.shortcuts.empty());
    CHECK(inst.source == 0);
    CHECK(inst.sink == 1);

    REQUIRE(map.gadgets.size() == 1);
    const Gadget& g = map.gadgets[0];
    CHECK(g.bypass_edge == 0);
    CHECK(inst.edge(0).fixed_cost == Rat(2));
    REQUIRE(g.branches.size() == 1);
    CHECK(g.branches[0].in_edge == 1);
    CHECK(g.branches[0].pricable_edge == 2);
    CHECK(g.branches[0].out_edge == 3);
    CHECK(inst.is_pricable(2));
    CHECK(validate_reduction_map(inst, map).ok());
}

TEST_CASE("reduce joins conflicting branches with gap-cost shortcuts") {
    const auto [inst, map] = reduce(lc2());
    CHECK(inst.node_count == 7);
    CHECK(inst.edges.size() == 9);
    REQUIRE(map.shortcuts.size() == 1);
    const ShortcutRecord& sc = map.shortcuts[0];
    CHECK(sc.gadget_i == 1);
    CHECK(sc.pair_i == LabelPair{1, 1});
    CHECK(sc.gadget_j == 2);
    CHECK(sc.pair_j == LabelPair{2, 1});
    CHECK(sc.cost == 0);
    CHECK(sc.edge == 8);
    CHECK(inst.edge(8).fixed_cost == Rat(0));

    // Frozen edge order: per gadget bypass, then in/pricable/out per pair.
    CHECK(map.gadgets[0].bypass_edge == 0);
    CHECK(map.gadgets[0].branches[0].pricable_edge == 2);
    CHECK(map.gadgets[1].bypass_edge == 4);
    CHECK(map.gadgets[1].branches[0].pricable_edge == 6);
}

TEST_CASE("shortcut set of the three-constraint chain") {
    const auto [inst, map] = reduce(lc3());
    REQUIRE(map.shortcuts.size() == 3);
    auto has = [&](int i, LabelPair pi, int j, LabelPair pj, int cost) {
        for (const ShortcutRecord& sc : map.shortcuts)
            if (sc.gadget_i == i && sc.pair_i == pi && sc.gadget_j == j && sc.pair_j == pj)
                return sc.cost == cost;
        return false;
    };
    CHECK(has(1, {1, 1}, 2, {2, 1}, 0));
    CHECK(has(1, {1, 1}, 3, {2, 1}, 1));
    CHECK(has(2, {1, 1}, 3, {2, 1}, 0));
    // Branches agreeing on the shared left vertex are never joined.
    CHECK_FALSE(has(2, {2, 1}, 3, {2, 1}, 0));
    CHECK(validate_reduction_map(inst, map).ok());
}

TEST_CASE("reduce rejects an empty constraint list") {
    LabelCoverInstance lc = lc1();
    lc.edges.clear();
    CHECK_THROWS_AS(reduce(lc), InputError);
}

TEST_CASE("validate_reduction_map flags mismatched files") {
    auto [inst, map] = reduce(lc2());
    SECTION("wrong bypass cost") {
        inst.edges[0].fixed_cost = Rat(3);
        CHECK_FALSE(validate_reduction_map(inst, map).ok());
    }
    SECTION("shortcut cost must equal the gadget gap") {
        map.shortcuts[0].cost = 1;
        CHECK_FALSE(validate_reduction_map(inst, map).ok());
        CHECK_THROWS_AS(require_consistent(inst, map), InputError);
    }
    SECTION("edge id out of range") {
        map.gadgets[0].branches[0].pricable_edge = 99;
        CHECK_FALSE(validate_reduction_map(inst, map).ok());
    }
}

TEST_CASE("completeness pricing pays 2 per satisfied constraint") {
    SECTION("satisfying assignment on the single-edge instance") {
        const auto [inst, map] = reduce(lc1());
        Assignment a;
        a.left_labels = {1};
        a.right_labels = {1};
        const PurchaseResult r = consumer_best_response(inst, completeness_pricing(map, a));
        CHECK(r.revenue == Rat(2));
        CHECK(r.total_cost == Rat(2));
        CHECK(r.pricable_count == 1);
    }
    SECTION("unsatisfying assignment forces the bypass") {
        const auto [inst, map] = reduce(lc1());
        Assignment a;
        a.left_labels = {2};
        a.right_labels = {1};
        const PurchaseResult r = consumer_best_response(inst, completeness_pricing(map, a));
        CHECK(r.revenue == Rat(0));
        CHECK(r.total_cost == Rat(2));
        CHECK(r.path == std::vector<int>{0});
    }
    SECTION("two of three constraints satisfied") {
        const auto [inst, map] = reduce(lc3());
        Assignment a;
        a.left_labels = {1};
        a.right_labels = {1, 1, 1};
        const PurchaseResult r = consumer_best_response(inst, completeness_pricing(map, a));
        CHECK(r.revenue == Rat(4));
        CHECK(r.total_cost == Rat(6));
        CHECK(r.pricable_count == 2);
    }
    SECTION("identity holds for arbitrary assignments on planted instances") {
        PlantedParams params;
        params.left_count = 3;
        params.right_count = 4;
        params.label_count = 3;
        params.edge_count = 8;
        params.decoys_per_edge = 2;
        params.corrupt_fraction = 0.25;
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            const PlantedInstance planted = generate_planted(params, seed);
            const auto [inst, map] = reduce(planted.lc);
            Rng rng(seed * 31);
            Assignment a;
            for (int i = 0; i < params.left_count; ++i)
                a.left_labels.push_back(static_cast<int>(rng.between(1, params.label_count)));
            for (int i = 0; i < params.right_count; ++i)
                a.right_labels.push_back(static_cast<int>(rng.between(1, params.label_count)));
            const PurchaseResult r = consumer_best_response(inst, completeness_pricing(map, a));
            CHECK(r.revenue == Rat(2 * satisfied_count(planted.lc, a)));
            CHECK(r.total_cost == Rat(2 * params.edge_count));
        }
    }
}

TEST_CASE("reduction map json round-trips") {
    const auto [inst, map] = reduce(lc3());
    const Json j = reduction_map_to_json(map);
    const ReductionMap back = reduction_map_from_json(j);
    CHECK(reduction_map_to_json(back) == j);
    CHECK(validate_reduction_map(inst, back).ok());
    CHECK(back.source == map.source);
    CHECK(back.sink == map.sink);
}

TEST_CASE("decomposition of the two-gadget instance priced at 2,2") {
    const auto [inst, map] = reduce(lc2());
    const Pricing p = sparse_pricing(inst, {{2, Rat(2)}, {6, Rat(2)}});
    const IslandDecomposition dec = decompose_islands(inst, map, p);

    CHECK(dec.purchase.path == std::vector<int>{1, 2, 3, 5, 6, 7});
    CHECK(dec.purchase.revenue == Rat(4));
    REQUIRE(dec.significant.size() == 2);
    CHECK(dec.significant[0].gadget == 1);
    CHECK(dec.significant[1].gadget == 2);
    REQUIRE(dec.islands.size() == 1);
    CHECK(dec.islands[0].alpha == 1);
    CHECK(dec.islands[0].omega == 2);
    for (const SignificantGadget& sg : dec.significant) {
        CHECK(sg.in_length == 0);
        CHECK(sg.out_length == 0);
        CHECK(sg.chain_length == 0);
        CHECK_FALSE(sg.enters_by_shortcut);
        CHECK_FALSE(sg.exits_by_shortcut);
    }

    const IslandDiagnostics diag = island_diagnostics(inst, map, p);
    REQUIRE(diag.rows.size() == 2);
    CHECK(diag.rows[0].step_bound_lhs == Rat(2));
    CHECK(diag.rows[0].step_bound_rhs == Rat(2));  // tight
    CHECK(diag.revenue == Rat(4));
    CHECK(diag.revenue_bound == Rat(4));  // tight: 2(r-1)+m = 4
    CHECK(diag.revenue_bound_applies);
    CHECK(diag.clean());
}

TEST_CASE("unrelated used gadgets split into singleton islands") {
    const auto [inst, map] = reduce(lc_long_shortcut());
    // Price gadgets 1 and 2 cheaply; they do not conflict, so no shortcut
    // joins them and each forms its own island.
    const Pricing p = sparse_pricing(inst, {{2, Rat(1)}, {6, Rat(1)}});
    const IslandDecomposition dec = decompose_islands(inst, map, p);
    REQUIRE(dec.significant.size() == 2);
    REQUIRE(dec.islands.size() == 2);
    CHECK(dec.islands[0].alpha == 1);
    CHECK(dec.islands[0].omega == 1);
    CHECK(dec.islands[1].alpha == 2);
    CHECK(dec.islands[1].omega == 2);
    CHECK(dec.significant[0].island_start);
    CHECK(dec.significant[0].island_end);
    CHECK(island_diagnostics(inst, map, p).clean());
}

TEST_CASE("no pricable purchases yields an empty decomposition") {
    const auto [inst, map] = reduce(lc2());
    const Pricing p = sparse_pricing(inst, {});
    const IslandDecomposition dec = decompose_islands(inst, map, p);
    CHECK(dec.significant.empty());
    CHECK(dec.islands.empty());
    CHECK(dec.purchase.revenue == Rat(0));
    const IslandDiagnostics diag = island_diagnostics(inst, map, p);
    CHECK(diag.clean());
    CHECK(diag.significant_count == 0);
}

// The five-gadget chain whose only shortcut (cost 3) joins gadgets 1 and 5.
// Pricable edge ids: 2, 6, 10, 14, 18; shortcut edge id 20.
TEST_CASE("a traversed long shortcut splits its cost between exit and entry") {
    const auto [inst, map] = reduce(lc_long_shortcut());
    REQUIRE(map.shortcuts.size() == 1);
    CHECK(map.shortcuts[0].cost == 3);
    CHECK(map.shortcuts[0].edge == 20);

    SECTION("high price before the jump pushes charge onto the exit") {
        const Pricing p = sparse_pricing(inst, {{2, Rat(3)}, {18, Rat(1)}});
        const IslandDiagnostics diag = island_diagnostics(inst, map, p);
        CHECK(diag.decomposition.purchase.path == std::vector<int>{1, 2, 20, 18, 19});
        CHECK(diag.revenue == Rat(4));
        REQUIRE(diag.rows.size() == 2);
        CHECK(diag.rows[0].chain_length == 3);
        CHECK(diag.rows[0].out_charge == Rat(1));  // 3 - 2 - 0
        CHECK(diag.rows[1].in_charge == Rat(2));   // remainder of the shortcut
        CHECK(diag.rows[0].pricable_segment == Rat(0));
        CHECK(diag.decomposition.significant[0].exits_by_shortcut);
        CHECK(diag.decomposition.significant[1].enters_by_shortcut);
        CHECK_FALSE(diag.decomposition.significant[0].enters_by_shortcut);
        CHECK_FALSE(diag.decomposition.significant[1].exits_by_shortcut);
        CHECK(diag.clean());
    }
    SECTION("prices that exhaust both sides stay within every bound") {
        const Pricing p = sparse_pricing(inst, {{2, Rat(3)}, {18, Rat(4)}});
        const IslandDiagnostics diag = island_diagnostics(inst, map, p);
        CHECK(diag.revenue == Rat(7));
        CHECK(diag.revenue == diag.step_bound_total);  // 2r + chain = 7, tight
        CHECK(diag.revenue == diag.revenue_bound);     // 2(r-1)+m = 7, tight
        CHECK(diag.clean());
    }
    SECTION("cheap exit leaves the whole shortcut on the entry side") {
        const Pricing p = sparse_pricing(inst, {{2, Rat(1)}, {18, Rat(4)}});
        const IslandDiagnostics diag = island_diagnostics(inst, map, p);
        CHECK(diag.revenue == Rat(5));
        REQUIRE(diag.rows.size() == 2);
        CHECK(diag.rows[0].out_charge == Rat(0));
        CHECK(diag.rows[1].in_charge == Rat(3));
        CHECK(diag.clean());
    }
}

TEST_CASE("used gadgets skipped by a jump feed the pricable segment") {
    const auto [inst, map] = reduce(lc_long_shortcut());
    // All five branches finite; the middle three are free, so the purchased
    // path walks the spine and uses every branch, but the scan still jumps
    // from gadget 1 to gadget 5 because their branches are joined.
    const Pricing p = sparse_pricing(
        inst, {{2, Rat(1)}, {6, Rat(0)}, {10, Rat(0)}, {14, Rat(0)}, {18, Rat(1)}});
    const IslandDiagnostics diag = island_diagnostics(inst, map, p);
    CHECK(diag.revenue == Rat(2));
    REQUIRE(diag.decomposition.significant.size() == 2);
    CHECK(diag.decomposition.significant[0].gadget == 1);
    CHECK(diag.decomposition.significant[1].gadget == 5);
    CHECK(diag.decomposition.significant[0].chain_length == 3);
    REQUIRE(diag.decomposition.islands.size() == 1);
    CHECK(diag.rows[0].pricable_segment == Rat(0));  // skipped branches are free
    CHECK(diag.rows[0].fixed_segment == Rat(0));
    CHECK(diag.rows[0].in_charge == Rat(0));
    CHECK(diag.rows[0].out_charge == Rat(0));  // the path exits over connectors
    CHECK(diag.clean());

    const Assignment a = extract_assignment(lc_long_shortcut(), map, diag.decomposition);
    CHECK(satisfied_count(lc_long_shortcut(), a) == 4);
}

TEST_CASE("extraction reads off every other significant gadget") {
    const auto [inst, map] = reduce(lc2());
    const Pricing p = sparse_pricing(inst, {{2, Rat(2)}, {6, Rat(2)}});
    const IslandDecomposition dec = decompose_islands(inst, map, p);
    const Assignment a = extract_assignment(lc2(), map, dec);
    CHECK(a.left_labels == std::vector<int>{1});
    CHECK(a.right_labels == std::vector<int>{1, 1});  // w2 defaults to 1
    CHECK(satisfied_count(lc2(), a) == 1);
}

TEST_CASE("diagnostics survive randomized pricings on varied instances") {
    PlantedParams params;
    params.left_count = 2;
    params.right_count = 3;
    params.label_count = 2;
    params.edge_count = 6;
    params.decoys_per_edge = 1;
    params.corrupt_fraction = 0.5;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const PlantedInstance planted = generate_planted(params, seed);
        const auto [inst, map] = reduce(planted.lc);
        Rng rng(seed);
        for (int trial = 0; trial < 60; ++trial) {
            const Pricing p = sample_pricing(inst, rng);
            const IslandDiagnostics diag = island_diagnostics_collect(inst, map, p);
            CHECK(diag.clean());
            if (!diag.clean()) {
                for (const DiagnosticsViolation& v : diag.violations)
                    UNSCOPED_INFO("seed " << seed << " trial " << trial << ": " << v.what);
            }
        }
    }
}
