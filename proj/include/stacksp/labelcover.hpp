#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "stacksp/errors.hpp"
#include "stacksp/random.hpp"
#include "stacksp/rational.hpp"

namespace stacksp {

// (left label, right label), both in 1..k.
using LabelPair = std::pair<int, int>;

struct LabelCoverEdge {
    int v = 0;  // left vertex index, 0-based
    int w = 0;  // right vertex index, 0-based
    std::vector<LabelPair> relation;  // sorted, duplicate-free
};

// Bipartite constraint instance. The edge list order is significant: the
// reduction consumes edges by index.
struct LabelCoverInstance {
    int left_count = 0;
    int right_count = 0;
    int label_count = 0;
    std::vector<LabelCoverEdge> edges;
};

struct Assignment {
    std::vector<int> left_labels;   // one label per left vertex
    std::vector<int> right_labels;  // one label per right vertex

    friend bool operator==(const Assignment& a, const Assignment& b) {
        return a.left_labels == b.left_labels && a.right_labels == b.right_labels;
    }
};

inline void require_valid(const LabelCoverInstance& lc) {
    if (lc.left_count <= 0 || lc.right_count <= 0 || lc.label_count <= 0)
        throw InputError("label cover counts must be positive");
    for (std::size_t i = 0; i < lc.edges.size(); ++i) {
        const LabelCoverEdge& e = lc.edges[i];
        if (e.v < 0 || e.v >= lc.left_count || e.w < 0 || e.w >= lc.right_count)
            throw InputError("label cover edge " + std::to_string(i) + " endpoint out of range");
        for (const auto& [a, b] : e.relation)
            if (a < 1 || a > lc.label_count || b < 1 || b > lc.label_count)
                throw InputError("label cover edge " + std::to_string(i) + " label out of range");
        if (!std::is_sorted(e.relation.begin(), e.relation.end()) ||
            std::adjacent_find(e.relation.begin(), e.relation.end()) != e.relation.end())
            throw InputError("label cover edge " + std::to_string(i) +
                             " relation must be sorted and duplicate-free");
    }
}

inline void require_well_formed(const LabelCoverInstance& lc, const Assignment& a) {
    if (static_cast<int>(a.left_labels.size()) != lc.left_count ||
        static_cast<int>(a.right_labels.size()) != lc.right_count)
        throw InputError("assignment does not cover every vertex");
    auto in_range = [&](int label) { return label >= 1 && label <= lc.label_count; };
    for (int label : a.left_labels)
        if (!in_range(label)) throw InputError("assignment label out of range");
    for (int label : a.right_labels)
        if (!in_range(label)) throw InputError("assignment label out of range");
}

inline int satisfied_count(const LabelCoverInstance& lc, const Assignment& a) {
    require_well_formed(lc, a);
    int count = 0;
    for (const LabelCoverEdge& e : lc.edges) {
        const LabelPair chosen{a.left_labels[static_cast<std::size_t>(e.v)],
                               a.right_labels[static_cast<std::size_t>(e.w)]};
        if (std::binary_search(e.relation.begin(), e.relation.end(), chosen)) ++count;
    }
    return count;
}

struct BruteForceResult {
    Assignment assignment;
    int satisfied = 0;
};

// Exhaustively enumerates all k^(left+right) assignments in lexicographic
// order and returns the first maximum. The limit guards against accidental
// exponential blowups; the assignment count is computed in big integers so
// the comparison itself cannot overflow.
inline BruteForceResult brute_force_opt(const LabelCoverInstance& lc, std::uint64_t limit) {
    require_valid(lc);
    const int vertices = lc.left_count + lc.right_count;
    Int total = 1;
    for (int i = 0; i < vertices; ++i) total *= lc.label_count;
    if (total > limit)
        throw TooLargeError("assignment space " + total.str() + " exceeds limit " +
                            std::to_string(limit));

    Assignment current;
    current.left_labels.assign(static_cast<std::size_t>(lc.left_count), 1);
    current.right_labels.assign(static_cast<std::size_t>(lc.right_count), 1);

    BruteForceResult best{current, satisfied_count(lc, current)};
    // Odometer over (left_labels, right_labels) with the rightmost position
    // fastest; matches lexicographic order on the concatenated label vector.
    auto advance = [&]() {
        auto bump = [&](std::vector<int>& labels) {
            for (auto it = labels.rbegin(); it != labels.rend(); ++it) {
                if (*it < lc.label_count) {
                    ++*it;
                    return true;
                }
                *it = 1;
            }
            return false;
        };
        return bump(current.right_labels) || bump(current.left_labels);
    };
    while (advance()) {
        const int value = satisfied_count(lc, current);
        if (value > best.satisfied) best = {current, value};
    }
    return best;
}

struct PlantedParams {
    int left_count = 1;
    int right_count = 1;
    int label_count = 2;
    int edge_count = 1;
    int decoys_per_edge = 0;
    double corrupt_fraction = 0.0;
};

struct PlantedInstance {
    LabelCoverInstance lc;
    Assignment planted;
};

// Draws a hidden assignment, then m edges whose relations contain the planted
// pair plus random decoys; a corrupt_fraction share of edges replaces the
// planted pair with a random non-planted pair. Deterministic per seed.
inline PlantedInstance generate_planted(const PlantedParams& params, std::uint64_t seed) {
    const int k = params.label_count;
    if (params.left_count <= 0 || params.right_count <= 0 || k <= 0 || params.edge_count <= 0)
        throw InvalidParamsError("planted generator counts must be positive");
    if (params.decoys_per_edge < 0)
        throw InvalidParamsError("decoys_per_edge must be nonnegative");
    if (params.corrupt_fraction < 0.0 || params.corrupt_fraction > 1.0)
        throw InvalidParamsError("corrupt_fraction must lie in [0,1]");
    const long long pair_space = static_cast<long long>(k) * k;
    if (params.decoys_per_edge > pair_space - 1)
        throw InvalidParamsError("decoys_per_edge exceeds the number of non-planted pairs");
    if (params.corrupt_fraction > 0.0 && params.decoys_per_edge > pair_space - 2)
        throw InvalidParamsError("corruption needs a non-planted replacement pair outside the decoys");

    Rng rng(seed);
    PlantedInstance out;
    out.lc.left_count = params.left_count;
    out.lc.right_count = params.right_count;
    out.lc.label_count = k;

    auto random_label = [&]() { return static_cast<int>(rng.below(static_cast<std::uint64_t>(k))) + 1; };
    for (int i = 0; i < params.left_count; ++i) out.planted.left_labels.push_back(random_label());
    for (int i = 0; i < params.right_count; ++i) out.planted.right_labels.push_back(random_label());

    std::vector<std::set<LabelPair>> pair_sets;
    for (int i = 0; i < params.edge_count; ++i) {
        LabelCoverEdge edge;
        edge.v = static_cast<int>(rng.below(static_cast<std::uint64_t>(params.left_count)));
        edge.w = static_cast<int>(rng.below(static_cast<std::uint64_t>(params.right_count)));
        const LabelPair planted_pair{out.planted.left_labels[static_cast<std::size_t>(edge.v)],
                                     out.planted.right_labels[static_cast<std::size_t>(edge.w)]};
        std::set<LabelPair> pairs{planted_pair};
        while (static_cast<int>(pairs.size()) < params.decoys_per_edge + 1)
            pairs.insert({random_label(), random_label()});
        pair_sets.push_back(std::move(pairs));
        out.lc.edges.push_back(std::move(edge));
    }

    const int corrupt_count = static_cast<int>(
        std::llround(params.corrupt_fraction * params.edge_count));
    // Partial Fisher-Yates: the first corrupt_count slots become the corrupted
    // edge set.
    std::vector<int> order;
    for (int i = 0; i < params.edge_count; ++i) order.push_back(i);
    for (int i = 0; i < corrupt_count; ++i) {
        const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(params.edge_count - i)));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    for (int c = 0; c < corrupt_count; ++c) {
        const int i = order[static_cast<std::size_t>(c)];
        LabelCoverEdge& edge = out.lc.edges[static_cast<std::size_t>(i)];
        std::set<LabelPair>& pairs = pair_sets[static_cast<std::size_t>(i)];
        const LabelPair planted_pair{out.planted.left_labels[static_cast<std::size_t>(edge.v)],
                                     out.planted.right_labels[static_cast<std::size_t>(edge.w)]};
        pairs.erase(planted_pair);
        for (;;) {
            const LabelPair replacement{random_label(), random_label()};
            if (replacement != planted_pair && pairs.insert(replacement).second) break;
        }
    }
    for (int i = 0; i < params.edge_count; ++i) {
        auto& pairs = pair_sets[static_cast<std::size_t>(i)];
        out.lc.edges[static_cast<std::size_t>(i)].relation.assign(pairs.begin(), pairs.end());
    }
    require_valid(out.lc);
    return out;
}

// JSON format: {left, right, k, edges: [{v, w, rel: [[kappa, lambda], ...]}]}.
inline Json labelcover_to_json(const LabelCoverInstance& lc) {
    Json j;
    j["left"] = lc.left_count;
    j["right"] = lc.right_count;
    j["k"] = lc.label_count;
    j["edges"] = Json::array();
    for (const LabelCoverEdge& e : lc.edges) {
        Json je;
        je["v"] = e.v;
        je["w"] = e.w;
        je["rel"] = Json::array();
        for (const auto& [a, b] : e.relation) je["rel"].push_back(Json::array({a, b}));
        j["edges"].push_back(std::move(je));
    }
    return j;
}

inline LabelCoverInstance labelcover_from_json(const Json& j) {
    LabelCoverInstance lc;
    try {
        lc.left_count = j.at("left").get<int>();
        lc.right_count = j.at("right").get<int>();
        lc.label_count = j.at("k").get<int>();
        for (const Json& je : j.at("edges")) {
            LabelCoverEdge e;
            e.v = je.at("v").get<int>();
            e.w = je.at("w").get<int>();
            for (const Json& jp : je.at("rel")) {
                if (!jp.is_array() || jp.size() != 2)
                    throw InputError("relation entries must be [kappa, lambda] pairs");
                e.relation.push_back({jp.at(0).get<int>(), jp.at(1).get<int>()});
            }
            std::sort(e.relation.begin(), e.relation.end());
            e.relation.erase(std::unique(e.relation.begin(), e.relation.end()), e.relation.end());
            lc.edges.push_back(std::move(e));
        }
    } catch (const Json::exception& ex) {
        throw InputError(std::string("malformed label cover JSON: ") + ex.what());
    }
    require_valid(lc);
    return lc;
}

inline Json assignment_to_json(const Assignment& a) {
    Json j;
    j["left_labels"] = a.left_labels;
    j["right_labels"] = a.right_labels;
    return j;
}

inline Assignment assignment_from_json(const Json& j) {
    Assignment a;
    try {
        a.left_labels = j.at("left_labels").get<std::vector<int>>();
        a.right_labels = j.at("right_labels").get<std::vector<int>>();
    } catch (const Json::exception& ex) {
        throw InputError(std::string("malformed assignment JSON: ") + ex.what());
    }
    return a;
}

}  // namespace stacksp
