#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stacksp/consumer.hpp"
#include "stacksp/errors.hpp"
#include "stacksp/instance.hpp"
#include "stacksp/rational.hpp"

namespace stacksp {

// f[k] = minimum total fixed cost over source-sink routes that use exactly k
// pricable edges; infinite when no such route exists. K = instance pricable
// count, so the array has K+1 entries.
struct PricableProfile {
    std::vector<Price> f;
};

// Shortest-path search over (node, pricable-edges-used) states: fixed edges
// contribute their cost, pricable edges contribute +1 to the count. Walks and
// simple paths give the same minima wherever the entry is consumer-relevant,
// because dropping a cycle never raises cost or count.
inline PricableProfile pricable_profile(const StackInstance& inst) {
    require_valid(inst);
    const int n = inst.node_count;
    const int K = static_cast<int>(inst.pricable_edge_ids().size());
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    for (const Edge& e : inst.edges) out[static_cast<std::size_t>(e.tail)].push_back(e.id);

    auto slot = [&](int node, int k) { return static_cast<std::size_t>(node) * (K + 1) + k; };
    std::vector<std::optional<Rat>> dist(static_cast<std::size_t>(n) * (K + 1));

    using Item = std::tuple<Rat, int, int>;  // (cost, node, count)
    auto worse = [](const Item& a, const Item& b) { return std::get<0>(b) < std::get<0>(a); };
    std::priority_queue<Item, std::vector<Item>, decltype(worse)> queue(worse);
    dist[slot(inst.source, 0)] = Rat(0);
    queue.push({Rat(0), inst.source, 0});
    while (!queue.empty()) {
        auto [cost, v, k] = queue.top();
        queue.pop();
        const auto& best = dist[slot(v, k)];
        if (!best || *best < cost) continue;
        for (int id : out[static_cast<std::size_t>(v)]) {
            const Edge& e = inst.edge(id);
            const int k2 = k + (e.kind == EdgeKind::Pricable ? 1 : 0);
            if (k2 > K) continue;
            const Rat cost2 = cost + e.fixed_cost;
            auto& target = dist[slot(e.head, k2)];
            if (!target || cost2 < *target) {
                target = cost2;
                queue.push({cost2, e.head, k2});
            }
        }
    }

    PricableProfile profile;
    bool any = false;
    for (int k = 0; k <= K; ++k) {
        const auto& d = dist[slot(inst.sink, k)];
        profile.f.push_back(d ? Price::finite(*d) : Price::infinite());
        any = any || d.has_value();
    }
    if (!any) throw NoPathError("sink unreachable from source");
    return profile;
}

struct SolverResult {
    std::string method;
    Pricing pricing;
    Rat revenue;
    PurchaseResult purchased;
};

inline Json solver_result_to_json(const SolverResult& r) {
    Json j;
    j["method"] = r.method;
    j["revenue"] = rational_to_json(r.revenue);
    j["pricing"] = pricing_to_json(r.pricing);
    j["path"] = r.purchased.path;
    j["cost"] = rational_to_json(r.purchased.total_cost);
    return j;
}

// Prices every pricable edge at q and evaluates the consumer.
inline SolverResult uniform_pricing(const StackInstance& inst, const Rat& q) {
    if (q < 0) throw InvalidParamsError("uniform price must be nonnegative");
    SolverResult result;
    result.method = "uniform";
    for (int id : inst.pricable_edge_ids()) result.pricing.prices[id] = Price::finite(q);
    result.purchased = consumer_best_response(inst, result.pricing);
    result.revenue = result.purchased.revenue;
    return result;
}

struct SinglePriceResult {
    Rat price;
    SolverResult result;
};

// Exact best uniform price. At price q the consumer's cost is the lower
// envelope of the lines f[k] + k*q, and its revenue k*q grows with q inside
// any piece where the purchased count k stays fixed, so some pairwise
// intersection of lines (or q=0) attains the optimum. All candidates are
// evaluated through the consumer itself, which settles ties exactly.
inline SinglePriceResult best_single_price(const StackInstance& inst) {
    const PricableProfile profile = pricable_profile(inst);
    if (profile.f.front().is_infinite())
        throw UnboundedError("every source-sink route uses a pricable edge");
    const int K = static_cast<int>(profile.f.size()) - 1;

    std::vector<Rat> candidates{Rat(0)};
    for (int k = 0; k <= K; ++k) {
        if (profile.f[static_cast<std::size_t>(k)].is_infinite()) continue;
        for (int j = k + 1; j <= K; ++j) {
            if (profile.f[static_cast<std::size_t>(j)].is_infinite()) continue;
            // f[k] + k q = f[j] + j q at q = (f[k] - f[j]) / (j - k)
            const Rat q = (profile.f[static_cast<std::size_t>(k)].value() -
                           profile.f[static_cast<std::size_t>(j)].value()) /
                          Rat(j - k);
            if (q >= 0) candidates.push_back(q);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::optional<SinglePriceResult> best;
    for (const Rat& q : candidates) {
        SolverResult attempt = uniform_pricing(inst, q);
        if (!best || attempt.revenue > best->result.revenue)
            best = SinglePriceResult{q, std::move(attempt)};
    }
    best->result.method = "single-price";
    return *best;
}

struct ExactLimits {
    std::uint64_t max_paths = 10000;
    int max_support = 10;
};

// All simple source-sink paths as edge-id sequences, in lexicographic order
// (depth-first search expanding edges in id order). Throws TooLarge when more
// than `cap` paths exist.
inline std::vector<std::vector<int>> enumerate_simple_paths(const StackInstance& inst,
                                                            std::uint64_t cap) {
    require_valid(inst);
    std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(inst.node_count));
    for (const Edge& e : inst.edges) out_edges[static_cast<std::size_t>(e.tail)].push_back(e.id);

    std::vector<std::vector<int>> paths;
    std::vector<int> stack;
    std::vector<char> visited(static_cast<std::size_t>(inst.node_count), 0);
    auto dfs = [&](auto&& self, int v) -> void {
        if (v == inst.sink) {
            if (paths.size() >= cap)
                throw TooLargeError("more than " + std::to_string(cap) + " simple paths");
            paths.push_back(stack);
            return;
        }
        visited[static_cast<std::size_t>(v)] = 1;
        for (int id : out_edges[static_cast<std::size_t>(v)]) {
            const Edge& e = inst.edge(id);
            if (visited[static_cast<std::size_t>(e.head)]) continue;
            stack.push_back(id);
            self(self, e.head);
            stack.pop_back();
        }
        visited[static_cast<std::size_t>(v)] = 0;
    };
    dfs(dfs, inst.source);
    return paths;
}

namespace detail {

// Exact Gaussian elimination; returns the solution of a square system or
// nothing if the matrix is singular.
inline std::optional<std::vector<Rat>> solve_linear_system(std::vector<std::vector<Rat>> a,
                                                           std::vector<Rat> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            const Rat factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    std::vector<Rat> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

struct SupportProblem {
    std::vector<int> edges;          // support pricable edge ids, ascending
    std::vector<std::uint64_t> row_mask;  // constraint: sum of p over mask <= rhs
    std::vector<Rat> row_rhs;
    bool feasible = true;
};

// Best vertex of {sum_{mask} p <= rhs, p >= 0} maximizing sum(p): enumerate
// bases of n active constraints drawn from the upper rows and the p_i = 0
// walls. Ties prefer the lexicographically least price vector.
inline std::optional<std::pair<Rat, std::vector<Rat>>> best_vertex(const SupportProblem& sp,
                                                                   std::uint64_t basis_budget) {
    const int n = static_cast<int>(sp.edges.size());
    if (n == 0) return std::make_pair(Rat(0), std::vector<Rat>{});
    const int upper = static_cast<int>(sp.row_mask.size());
    const int total = upper + n;  // upper rows then zero walls

    // C(total, n) bases; refuse absurd enumerations.
    Int combinations = 1;
    for (int i = 0; i < n; ++i) combinations = combinations * (total - i) / (i + 1);
    if (combinations > basis_budget)
        throw TooLargeError("basic-solution enumeration needs " + combinations.str() +
                            " bases");

    std::optional<std::pair<Rat, std::vector<Rat>>> best;
    std::vector<int> pick(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pick[static_cast<std::size_t>(i)] = i;
    for (;;) {
        std::vector<std::vector<Rat>> a(static_cast<std::size_t>(n),
                                        std::vector<Rat>(static_cast<std::size_t>(n), Rat(0)));
        std::vector<Rat> b(static_cast<std::size_t>(n), Rat(0));
        for (int row = 0; row < n; ++row) {
            const int c = pick[static_cast<std::size_t>(row)];
            if (c < upper) {
                for (int i = 0; i < n; ++i)
                    if (sp.row_mask[static_cast<std::size_t>(c)] >> i & 1)
                        a[static_cast<std::size_t>(row)][static_cast<std::size_t>(i)] = 1;
                b[static_cast<std::size_t>(row)] = sp.row_rhs[static_cast<std::size_t>(c)];
            } else {
                a[static_cast<std::size_t>(row)][static_cast<std::size_t>(c - upper)] = 1;
            }
        }
        if (auto x = solve_linear_system(std::move(a), std::move(b))) {
            bool ok = true;
            for (const Rat& v : *x)
                if (v < 0) { ok = false; break; }
            for (int row = 0; ok && row < upper; ++row) {
                Rat lhs(0);
                for (int i = 0; i < n; ++i)
                    if (sp.row_mask[static_cast<std::size_t>(row)] >> i & 1)
                        lhs += (*x)[static_cast<std::size_t>(i)];
                if (lhs > sp.row_rhs[static_cast<std::size_t>(row)]) ok = false;
            }
            if (ok) {
                Rat value(0);
                for (const Rat& v : *x) value += v;
                if (!best || value > best->first ||
                    (value == best->first && *x < best->second))
                    best = std::make_pair(std::move(value), std::move(*x));
            }
        }
        // next combination
        int i = n - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == total - n + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k)
            pick[static_cast<std::size_t>(k)] = pick[static_cast<std::size_t>(k - 1)] + 1;
    }
    return best;
}

}  // namespace detail

// Exact revenue maximization by support enumeration. Every simple path is a
// candidate support: its pricable edges stay finite, all others INFINITE.
// For a support the consumer weakly prefers the base path iff, for every
// rival path using only support pricables, the prices the rival skips stay
// within its fixed-cost surplus; the optimum over these linear constraints is
// attained at a basic solution. The consumer's optimistic tie rule makes the
// weak inequalities sufficient. Desk-scale by design: explicit limits, exact
// arithmetic throughout.
inline SolverResult exact_optimal_pricing(const StackInstance& inst,
                                          const ExactLimits& limits = {}) {
    const PricableProfile profile = pricable_profile(inst);  // throws NoPath
    if (profile.f.front().is_infinite())
        throw UnboundedError("every source-sink route uses a pricable edge");

    const std::vector<std::vector<int>> paths = enumerate_simple_paths(inst, limits.max_paths);

    // Global bit index per pricable edge seen on any path.
    std::map<int, int> bit_of;
    for (const auto& path : paths)
        for (int id : path)
            if (inst.is_pricable(id) && !bit_of.count(id)) {
                const int bit = static_cast<int>(bit_of.size());
                if (bit >= 63) throw TooLargeError("too many pricable edges on paths");
                bit_of[id] = bit;
            }

    struct PathInfo {
        std::uint64_t pricable_mask;
        Rat fixed_cost;
    };
    std::vector<PathInfo> infos;
    for (const auto& path : paths) {
        PathInfo info{0, Rat(0)};
        for (int id : path) {
            const Edge& e = inst.edge(id);
            if (e.kind == EdgeKind::Pricable)
                info.pricable_mask |= std::uint64_t{1} << bit_of.at(id);
            else
                info.fixed_cost += e.fixed_cost;
        }
        infos.push_back(std::move(info));
    }

    // One candidate support per distinct pricable mask, with the smallest
    // base fixed cost (any costlier base is infeasible against the cheaper
    // path as a rival).
    std::map<std::uint64_t, Rat> base_cost;
    for (const PathInfo& info : infos) {
        auto it = base_cost.find(info.pricable_mask);
        if (it == base_cost.end() || info.fixed_cost < it->second)
            base_cost[info.pricable_mask] = info.fixed_cost;
    }

    // Map masks back to ascending edge-id lists and order supports by them,
    // so revenue ties resolve toward the lexicographically least support.
    std::vector<int> edge_of_bit(bit_of.size());
    for (const auto& [id, bit] : bit_of) edge_of_bit[static_cast<std::size_t>(bit)] = id;
    std::vector<std::pair<std::vector<int>, std::uint64_t>> supports;
    for (const auto& [mask, cost] : base_cost) {
        std::vector<int> edges;
        for (std::size_t bit = 0; bit < edge_of_bit.size(); ++bit)
            if (mask >> bit & 1) edges.push_back(edge_of_bit[bit]);
        std::sort(edges.begin(), edges.end());
        supports.push_back({std::move(edges), mask});
    }
    std::sort(supports.begin(), supports.end());

    std::optional<Rat> best_revenue;
    std::vector<int> best_edges;
    std::vector<Rat> best_prices;
    constexpr std::uint64_t kBasisBudget = 5'000'000;

    for (const auto& [edges, mask] : supports) {
        if (static_cast<int>(edges.size()) > limits.max_support)
            throw TooLargeError("support of " + std::to_string(edges.size()) +
                                " pricable edges exceeds max_support");
        detail::SupportProblem sp;
        sp.edges = edges;
        const Rat& base = base_cost.at(mask);
        std::map<std::uint64_t, Rat> rows;  // local skip-mask -> tightest surplus
        for (const PathInfo& rival : infos) {
            if (rival.pricable_mask & ~mask) continue;  // uses a non-support pricable
            std::uint64_t skip = mask & ~rival.pricable_mask;
            if (skip == 0) continue;  // same support; base choice makes it redundant
            // compress global mask to local bit positions
            std::uint64_t local = 0;
            for (std::size_t i = 0; i < edges.size(); ++i)
                if (skip >> bit_of.at(edges[i]) & 1) local |= std::uint64_t{1} << i;
            const Rat surplus = rival.fixed_cost - base;
            auto it = rows.find(local);
            if (it == rows.end() || surplus < it->second) rows[local] = surplus;
        }
        for (auto& [local, surplus] : rows) {
            if (surplus < 0) { sp.feasible = false; break; }
            sp.row_mask.push_back(local);
            sp.row_rhs.push_back(surplus);
        }
        if (!sp.feasible) continue;

        // Cheap upper bound: each price is capped by the tightest row that
        // contains it alone among the remaining slack; use the full-support
        // row, which always exists when a pricable-free path does.
        if (best_revenue) {
            Rat cap(0);
            for (std::size_t i = 0; i < edges.size(); ++i) {
                std::optional<Rat> edge_cap;
                for (std::size_t rw = 0; rw < sp.row_mask.size(); ++rw)
                    if (sp.row_mask[rw] >> i & 1)
                        if (!edge_cap || sp.row_rhs[rw] < *edge_cap) edge_cap = sp.row_rhs[rw];
                if (!edge_cap) { cap = *best_revenue + 1; break; }
                cap += *edge_cap;
            }
            if (cap <= *best_revenue) continue;
        }

        if (auto vertex = detail::best_vertex(sp, kBasisBudget)) {
            if (!best_revenue || vertex->first > *best_revenue) {
                best_revenue = vertex->first;
                best_edges = edges;
                best_prices = vertex->second;
            }
        }
    }
    if (!best_revenue) throw Error("internal: no feasible support evaluated");

    SolverResult result;
    result.method = "exact";
    for (int id : inst.pricable_edge_ids()) result.pricing.prices[id] = Price::infinite();
    for (std::size_t i = 0; i < best_edges.size(); ++i)
        result.pricing.prices[best_edges[i]] = Price::finite(best_prices[i]);
    result.purchased = consumer_best_response(inst, result.pricing);
    result.revenue = result.purchased.revenue;
    if (result.revenue != *best_revenue)
        throw Error("internal: consumer revenue disagrees with the optimized value");
    return result;
}

}  // namespace stacksp
