#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "stacksp/errors.hpp"
#include "stacksp/instance.hpp"
#include "stacksp/rational.hpp"

namespace stacksp {

// Path label ordered by (cost ascending, revenue descending). Every edge's
// contribution is lexicographically >= (0,0): cost > 0, or cost = 0 and
// revenue = 0. Labels therefore never decrease along a walk, which makes
// label-setting search valid and lets walk minima coincide with simple-path
// minima.
struct PathLabel {
    Rat cost;
    Rat revenue;

    friend bool operator==(const PathLabel& a, const PathLabel& b) {
        return a.cost == b.cost && a.revenue == b.revenue;
    }

    PathLabel operator+(const PathLabel& o) const { return {cost + o.cost, revenue + o.revenue}; }
};

inline bool label_less(const PathLabel& a, const PathLabel& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.revenue > b.revenue;
}

namespace detail {

struct WeightedEdge {
    int id;
    int tail;
    int head;
    PathLabel weight;
    bool pricable;
};

// Edges that survive the pricing: infinite-priced edges are deleted, finite
// prices fold into the cost and revenue components.
inline std::vector<WeightedEdge> finite_edges(const StackInstance& inst, const Pricing& p) {
    std::vector<WeightedEdge> out;
    out.reserve(inst.edges.size());
    for (const Edge& e : inst.edges) {
        if (e.kind == EdgeKind::Pricable) {
            const Price& price = p.at(e.id);
            if (price.is_infinite()) continue;
            out.push_back({e.id, e.tail, e.head, {price.value(), price.value()}, true});
        } else {
            out.push_back({e.id, e.tail, e.head, {e.fixed_cost, Rat(0)}, false});
        }
    }
    return out;
}

struct Adjacency {
    // adj[v] lists indices into the edge vector, in ascending edge id order.
    std::vector<std::vector<int>> adj;

    static Adjacency forward(int nodes, const std::vector<WeightedEdge>& edges) {
        Adjacency a;
        a.adj.resize(static_cast<std::size_t>(nodes));
        for (std::size_t i = 0; i < edges.size(); ++i)
            a.adj[static_cast<std::size_t>(edges[i].tail)].push_back(static_cast<int>(i));
        return a;
    }

    static Adjacency backward(int nodes, const std::vector<WeightedEdge>& edges) {
        Adjacency a;
        a.adj.resize(static_cast<std::size_t>(nodes));
        for (std::size_t i = 0; i < edges.size(); ++i)
            a.adj[static_cast<std::size_t>(edges[i].head)].push_back(static_cast<int>(i));
        return a;
    }
};

// Label-setting search from start. moves_to(edge) is the node reached by
// traversing an adjacency entry (head for forward search, tail for backward).
// Nodes with blocked[v] set are removed from the graph. Returns one optional
// label per node.
template <typename MovesTo>
std::vector<std::optional<PathLabel>> dijkstra(int nodes,
                                               const std::vector<WeightedEdge>& edges,
                                               const Adjacency& adjacency, int start,
                                               const std::vector<char>& blocked,
                                               MovesTo moves_to) {
    std::vector<std::optional<PathLabel>> dist(static_cast<std::size_t>(nodes));
    if (blocked[static_cast<std::size_t>(start)]) return dist;

    using Item = std::pair<PathLabel, int>;
    auto worse = [](const Item& a, const Item& b) { return label_less(b.first, a.first); };
    std::priority_queue<Item, std::vector<Item>, decltype(worse)> queue(worse);

    dist[static_cast<std::size_t>(start)] = PathLabel{Rat(0), Rat(0)};
    queue.push({PathLabel{Rat(0), Rat(0)}, start});
    while (!queue.empty()) {
        auto [label, v] = queue.top();
        queue.pop();
        const auto& best = dist[static_cast<std::size_t>(v)];
        if (!best || label_less(*best, label)) continue;  // stale entry
        for (int idx : adjacency.adj[static_cast<std::size_t>(v)]) {
            const WeightedEdge& e = edges[static_cast<std::size_t>(idx)];
            const int to = moves_to(e);
            if (blocked[static_cast<std::size_t>(to)]) continue;
            const PathLabel candidate = label + e.weight;
            auto& slot = dist[static_cast<std::size_t>(to)];
            if (!slot || label_less(candidate, *slot)) {
                slot = candidate;
                queue.push({candidate, to});
            }
        }
    }
    return dist;
}

// Kahn's algorithm; returns a topological order if the filtered graph is
// acyclic, nothing otherwise.
inline std::optional<std::vector<int>> topological_order(int nodes,
                                                         const std::vector<WeightedEdge>& edges) {
    std::vector<int> indegree(static_cast<std::size_t>(nodes), 0);
    std::vector<std::vector<int>> out(static_cast<std::size_t>(nodes));
    for (const WeightedEdge& e : edges) {
        ++indegree[static_cast<std::size_t>(e.head)];
        out[static_cast<std::size_t>(e.tail)].push_back(e.head);
    }
    std::vector<int> ready;
    for (int v = 0; v < nodes; ++v)
        if (indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(nodes));
    while (!ready.empty()) {
        const int v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (int to : out[static_cast<std::size_t>(v)])
            if (--indegree[static_cast<std::size_t>(to)] == 0) ready.push_back(to);
    }
    if (static_cast<int>(order.size()) != nodes) return std::nullopt;
    return order;
}

inline PurchaseResult assemble_result(const std::vector<WeightedEdge>& edges,
                                      const std::vector<int>& chosen_indices) {
    PurchaseResult result;
    for (int idx : chosen_indices) {
        const WeightedEdge& e = edges[static_cast<std::size_t>(idx)];
        result.path.push_back(e.id);
        result.total_cost += e.weight.cost;
        result.revenue += e.weight.revenue;
        if (e.pricable) ++result.pricable_count;
    }
    return result;
}

// Acyclic case: one backward pass computes the optimal completion label L(v)
// for every node, then a forward greedy picks, at each node, the least edge
// id whose weight plus L(head) matches L(node) exactly.
inline PurchaseResult solve_dag(const StackInstance& inst,
                                const std::vector<WeightedEdge>& edges,
                                const std::vector<int>& topo) {
    const int n = inst.node_count;
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < edges.size(); ++i)
        out[static_cast<std::size_t>(edges[i].tail)].push_back(static_cast<int>(i));

    std::vector<std::optional<PathLabel>> completion(static_cast<std::size_t>(n));
    completion[static_cast<std::size_t>(inst.sink)] = PathLabel{Rat(0), Rat(0)};
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        const int v = *it;
        if (v == inst.sink) continue;
        for (int idx : out[static_cast<std::size_t>(v)]) {
            const WeightedEdge& e = edges[static_cast<std::size_t>(idx)];
            const auto& tail_label = completion[static_cast<std::size_t>(e.head)];
            if (!tail_label) continue;
            const PathLabel candidate = e.weight + *tail_label;
            auto& slot = completion[static_cast<std::size_t>(v)];
            if (!slot || label_less(candidate, *slot)) slot = candidate;
        }
    }
    if (!completion[static_cast<std::size_t>(inst.source)])
        throw NoPathError("sink unreachable from source under this pricing");

    std::vector<int> chosen;
    int u = inst.source;
    while (u != inst.sink) {
        const PathLabel& here = *completion[static_cast<std::size_t>(u)];
        int pick = -1;
        for (int idx : out[static_cast<std::size_t>(u)]) {
            const WeightedEdge& e = edges[static_cast<std::size_t>(idx)];
            const auto& rest = completion[static_cast<std::size_t>(e.head)];
            if (rest && e.weight + *rest == here) {
                pick = idx;
                break;
            }
        }
        if (pick < 0) throw Error("internal: no optimal continuation in acyclic search");
        chosen.push_back(pick);
        u = edges[static_cast<std::size_t>(pick)].head;
    }
    return assemble_result(edges, chosen);
}

// General case. The greedy keeps the invariant that an optimal simple
// completion exists from the current node avoiding all visited nodes: for any
// out-edge e into v, prefix + e + (best walk v -> t avoiding visited) is an
// s-t walk, so its label is >= the optimum W, with equality exactly when a
// simple optimal completion through e exists. Picking the least edge id with
// equality therefore never backtracks and yields the lexicographically
// smallest optimal edge sequence.
inline PurchaseResult solve_general(const StackInstance& inst,
                                    const std::vector<WeightedEdge>& edges) {
    const int n = inst.node_count;
    const Adjacency fwd = Adjacency::forward(n, edges);
    const Adjacency bwd = Adjacency::backward(n, edges);
    const std::vector<char> none(static_cast<std::size_t>(n), 0);

    const auto from_source = dijkstra(n, edges, fwd, inst.source, none,
                                      [](const WeightedEdge& e) { return e.head; });
    const auto& opt = from_source[static_cast<std::size_t>(inst.sink)];
    if (!opt) throw NoPathError("sink unreachable from source under this pricing");
    const PathLabel target = *opt;

    std::vector<int> chosen;
    std::vector<char> blocked(static_cast<std::size_t>(n), 0);
    PathLabel prefix{Rat(0), Rat(0)};
    int u = inst.source;
    while (u != inst.sink) {
        blocked[static_cast<std::size_t>(u)] = 1;
        const auto to_sink = dijkstra(n, edges, bwd, inst.sink, blocked,
                                      [](const WeightedEdge& e) { return e.tail; });
        int pick = -1;
        for (int idx : fwd.adj[static_cast<std::size_t>(u)]) {
            const WeightedEdge& e = edges[static_cast<std::size_t>(idx)];
            if (blocked[static_cast<std::size_t>(e.head)]) continue;
            const auto& rest = to_sink[static_cast<std::size_t>(e.head)];
            if (rest && prefix + e.weight + *rest == target) {
                pick = idx;
                break;
            }
        }
        if (pick < 0) throw Error("internal: no optimal continuation in cyclic search");
        chosen.push_back(pick);
        prefix = prefix + edges[static_cast<std::size_t>(pick)].weight;
        u = edges[static_cast<std::size_t>(pick)].head;
    }
    return assemble_result(edges, chosen);
}

}  // namespace detail

// The follower's purchase: a source-sink path of minimum total cost; among
// minimum-cost paths revenue is maximum (optimistic follower); among those the
// lexicographically smallest edge-id sequence is returned.
inline PurchaseResult consumer_best_response(const StackInstance& inst, const Pricing& p) {
    require_well_formed(inst, p);
    const auto edges = detail::finite_edges(inst, p);
    if (const auto topo = detail::topological_order(inst.node_count, edges))
        return detail::solve_dag(inst, edges, *topo);
    return detail::solve_general(inst, edges);
}

// Restricts the pricing to the purchased path: prices off the path become
// INFINITE. Raising unused edges to infinity cannot create a cheaper path, so
// re-solving reproduces the same purchase.
inline std::pair<Pricing, PurchaseResult> normalize_pricing(const StackInstance& inst,
                                                            const Pricing& p) {
    const PurchaseResult result = consumer_best_response(inst, p);
    Pricing normalized;
    for (const auto& [id, price] : p.prices) normalized.prices[id] = Price::infinite();
    for (int id : result.path)
        if (inst.is_pricable(id)) normalized.prices[id] = p.at(id);
    return {std::move(normalized), result};
}

}  // namespace stacksp
