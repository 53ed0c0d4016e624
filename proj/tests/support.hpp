#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "stacksp/stacksp.hpp"

// Shared fixtures and a reference consumer implementation. The oracle here
// deliberately repeats nothing from the library's search: it enumerates every
// simple path outright and compares whole tuples.
namespace testsupport {

using stacksp::Edge;
using stacksp::EdgeKind;
using stacksp::LabelCoverInstance;
using stacksp::Price;
using stacksp::Pricing;
using stacksp::Rat;
using stacksp::Rng;
using stacksp::StackInstance;

struct OraclePath {
    std::vector<int> path;
    Rat cost;
    Rat revenue;
    int pricable_count = 0;
};

// Best response by exhaustive enumeration under (cost asc, revenue desc,
// edge sequence asc). Returns nothing when no finite-cost path exists.
inline std::optional<OraclePath> oracle_best_response(const StackInstance& inst,
                                                      const Pricing& p) {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(inst.node_count));
    for (const Edge& e : inst.edges) out[static_cast<std::size_t>(e.tail)].push_back(e.id);

    std::optional<OraclePath> best;
    std::vector<int> stack;
    std::vector<char> seen(static_cast<std::size_t>(inst.node_count), 0);
    auto consider = [&]() {
        OraclePath cand{stack, Rat(0), Rat(0), 0};
        for (int id : stack) {
            const Edge& e = inst.edge(id);
            if (e.kind == EdgeKind::Pricable) {
                const Rat& value = p.prices.at(id).value();
                cand.cost += value;
                cand.revenue += value;
                ++cand.pricable_count;
            } else {
                cand.cost += e.fixed_cost;
            }
        }
        if (!best) {
            best = std::move(cand);
            return;
        }
        if (cand.cost != best->cost) {
            if (cand.cost < best->cost) best = std::move(cand);
            return;
        }
        if (cand.revenue != best->revenue) {
            if (cand.revenue > best->revenue) best = std::move(cand);
            return;
        }
        if (cand.path < best->path) best = std::move(cand);
    };
    auto dfs = [&](auto&& self, int v) -> void {
        if (v == inst.sink) {
            consider();
            return;
        }
        seen[static_cast<std::size_t>(v)] = 1;
        for (int id : out[static_cast<std::size_t>(v)]) {
            const Edge& e = inst.edge(id);
            if (seen[static_cast<std::size_t>(e.head)]) continue;
            if (e.kind == EdgeKind::Pricable && p.prices.at(id).is_infinite()) continue;
            stack.push_back(id);
            self(self, e.head);
            stack.pop_back();
        }
        seen[static_cast<std::size_t>(v)] = 0;
    };
    dfs(dfs, inst.source);
    return best;
}

// Fan of three routes: a direct fixed edge, a one-pricable detour, and a
// two-pricable detour.
inline StackInstance graph_y() {
    StackInstance inst;
    inst.node_count = 4;  // s=0, a=1, b=2, t=3
    inst.edges = {
        {0, 0, 3, EdgeKind::Fixed, Rat(4)},    {1, 0, 1, EdgeKind::Pricable, Rat(0)},
        {2, 1, 3, EdgeKind::Fixed, Rat(1)},    {3, 0, 2, EdgeKind::Pricable, Rat(0)},
        {4, 2, 3, EdgeKind::Pricable, Rat(0)},
    };
    inst.source = 0;
    inst.sink = 3;
    return inst;
}

inline LabelCoverInstance lc1() {
    LabelCoverInstance lc;
    lc.left_count = 1;
    lc.right_count = 1;
    lc.label_count = 2;
    lc.edges = {{0, 0, {{1, 1}}}};
    return lc;
}

inline LabelCoverInstance lc2() {
    LabelCoverInstance lc;
    lc.left_count = 1;
    lc.right_count = 2;
    lc.label_count = 2;
    lc.edges = {{0, 0, {{1, 1}}}, {0, 1, {{2, 1}}}};
    return lc;
}

inline LabelCoverInstance lc3() {
    LabelCoverInstance lc;
    lc.left_count = 1;
    lc.right_count = 3;
    lc.label_count = 2;
    lc.edges = {{0, 0, {{1, 1}}}, {0, 1, {{1, 1}, {2, 1}}}, {0, 2, {{2, 1}}}};
    return lc;
}

// Five constraints in a row where only the first and last share a left
// vertex, giving exactly one shortcut (cost 3) between gadgets 1 and 5.
inline LabelCoverInstance lc_long_shortcut() {
    LabelCoverInstance lc;
    lc.left_count = 4;
    lc.right_count = 5;
    lc.label_count = 2;
    lc.edges = {{0, 0, {{1, 1}}},
                {1, 1, {{1, 1}}},
                {2, 2, {{1, 1}}},
                {3, 3, {{1, 1}}},
                {0, 4, {{2, 1}}}};
    return lc;
}

// Every pricable edge INFINITE except the listed (edge id, price) pairs.
inline Pricing sparse_pricing(const StackInstance& inst,
                              const std::vector<std::pair<int, Rat>>& finite) {
    Pricing p;
    for (int id : inst.pricable_edge_ids()) p.prices[id] = Price::infinite();
    for (const auto& [id, value] : finite) p.prices.at(id) = Price::finite(value);
    return p;
}

inline Pricing flat_pricing(const StackInstance& inst, const Rat& q) {
    Pricing p;
    for (int id : inst.pricable_edge_ids()) p.prices[id] = Price::finite(q);
    return p;
}

// Random DAG on up to max_nodes nodes: edges only go from lower to higher
// index, about half the pairs are present, a third of edges pricable.
inline StackInstance random_dag(Rng& rng, int max_nodes = 10) {
    StackInstance inst;
    inst.node_count = static_cast<int>(rng.between(2, max_nodes));
    int id = 0;
    for (int i = 0; i < inst.node_count; ++i)
        for (int j = i + 1; j < inst.node_count; ++j) {
            if (!rng.coin()) continue;
            const bool pricable = rng.below(3) == 0;
            inst.edges.push_back({id++, i, j, pricable ? EdgeKind::Pricable : EdgeKind::Fixed,
                                  pricable ? Rat(0) : rng.rational_in(4, 4)});
        }
    inst.source = 0;
    inst.sink = inst.node_count - 1;
    return inst;
}

// Random directed graph that may contain cycles.
inline StackInstance random_cyclic(Rng& rng, int max_nodes = 8) {
    StackInstance inst;
    inst.node_count = static_cast<int>(rng.between(2, max_nodes));
    int id = 0;
    for (int i = 0; i < inst.node_count; ++i)
        for (int j = 0; j < inst.node_count; ++j) {
            if (i == j || rng.below(3) != 0) continue;
            const bool pricable = rng.below(3) == 0;
            inst.edges.push_back({id++, i, j, pricable ? EdgeKind::Pricable : EdgeKind::Fixed,
                                  pricable ? Rat(0) : rng.rational_in(4, 4)});
        }
    inst.source = 0;
    inst.sink = inst.node_count - 1;
    return inst;
}

// About a quarter INFINITE, the rest small rationals.
inline Pricing random_pricing(const StackInstance& inst, Rng& rng) {
    Pricing p;
    for (int id : inst.pricable_edge_ids()) {
        const bool finite = rng.below(4) != 0;
        p.prices[id] = finite ? Price::finite(rng.rational_in(4, 4)) : Price::infinite();
    }
    return p;
}

}  // namespace testsupport
