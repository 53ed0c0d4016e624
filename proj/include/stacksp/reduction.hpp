#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stacksp/errors.hpp"
#include "stacksp/instance.hpp"
#include "stacksp/labelcover.hpp"
#include "stacksp/rational.hpp"

namespace stacksp {

// One selectable branch of a gadget: a_i -> u -> x -> b_i with the middle
// edge pricable and the connectors fixed at cost 0. Shortcuts attach to u
// (incoming) and x (outgoing), so they address this branch's pricable edge
// specifically.
struct GadgetBranch {
    LabelPair pair;
    int entry_node = 0;  // u
    int exit_node = 0;   // x
    int in_edge = 0;
    int pricable_edge = 0;
    int out_edge = 0;
};

struct Gadget {
    int index = 0;  // 1-based position in the gadget chain
    int entry_node = 0;  // a_i
    int exit_node = 0;   // b_i, shared with gadget i+1
    int bypass_edge = 0;
    int left_vertex = 0;   // v_i of the source constraint edge
    int right_vertex = 0;  // w_i
    std::vector<GadgetBranch> branches;  // one per allowed label pair, sorted
};

struct ShortcutRecord {
    int gadget_i = 0;
    LabelPair pair_i;
    int gadget_j = 0;
    LabelPair pair_j;
    int edge = 0;
    int cost = 0;  // always gadget_j - gadget_i - 1
};

// Bookkeeping between constraint edges and the compiled graph.
struct ReductionMap {
    int source = 0;
    int sink = 0;
    std::vector<Gadget> gadgets;
    std::vector<ShortcutRecord> shortcuts;

    int gadget_count() const { return static_cast<int>(gadgets.size()); }
};

// Two branches conflict when their label pairs disagree on a shared vertex.
inline bool branches_conflict(const LabelCoverEdge& a, const LabelPair& pa,
                              const LabelCoverEdge& b, const LabelPair& pb) {
    return (a.v == b.v && pa.first != pb.first) || (a.w == b.w && pa.second != pb.second);
}

// Compiles a constraint instance into a gadget chain. Gadget i offers one
// pricable branch per allowed label pair plus a fixed bypass of cost 2;
// conflicting branches of gadgets i < j are joined by a fixed shortcut edge
// of cost j-i-1 from the earlier branch's exit to the later branch's entry.
// Edge ids are assigned gadget by gadget (bypass, then in/pricable/out per
// branch), with all shortcuts appended at the end.
inline std::pair<StackInstance, ReductionMap> reduce(const LabelCoverInstance& lc) {
    require_valid(lc);
    const int m = static_cast<int>(lc.edges.size());
    if (m == 0) throw InputError("reduction needs at least one constraint edge");

    StackInstance inst;
    ReductionMap map;
    inst.node_count = m + 1;  // spine nodes: a_i = i-1, b_i = i
    int next_edge = 0;

    auto add_edge = [&](int tail, int head, EdgeKind kind, Rat cost) {
        inst.edges.push_back({next_edge, tail, head, kind, std::move(cost)});
        return next_edge++;
    };

    for (int i = 1; i <= m; ++i) {
        const LabelCoverEdge& ce = lc.edges[static_cast<std::size_t>(i - 1)];
        Gadget g;
        g.index = i;
        g.entry_node = i - 1;
        g.exit_node = i;
        g.left_vertex = ce.v;
        g.right_vertex = ce.w;
        g.bypass_edge = add_edge(g.entry_node, g.exit_node, EdgeKind::Fixed, Rat(2));
        for (const LabelPair& pair : ce.relation) {
            GadgetBranch b;
            b.pair = pair;
            b.entry_node = inst.node_count++;
            b.exit_node = inst.node_count++;
            b.in_edge = add_edge(g.entry_node, b.entry_node, EdgeKind::Fixed, Rat(0));
            b.pricable_edge = add_edge(b.entry_node, b.exit_node, EdgeKind::Pricable, Rat(0));
            b.out_edge = add_edge(b.exit_node, g.exit_node, EdgeKind::Fixed, Rat(0));
            g.branches.push_back(b);
        }
        map.gadgets.push_back(std::move(g));
    }

    for (int i = 1; i <= m; ++i) {
        const Gadget& gi = map.gadgets[static_cast<std::size_t>(i - 1)];
        for (const GadgetBranch& bi : gi.branches) {
            for (int j = i + 1; j <= m; ++j) {
                const Gadget& gj = map.gadgets[static_cast<std::size_t>(j - 1)];
                for (const GadgetBranch& bj : gj.branches) {
                    if (!branches_conflict(lc.edges[static_cast<std::size_t>(i - 1)], bi.pair,
                                           lc.edges[static_cast<std::size_t>(j - 1)], bj.pair))
                        continue;
                    ShortcutRecord sc;
                    sc.gadget_i = i;
                    sc.pair_i = bi.pair;
                    sc.gadget_j = j;
                    sc.pair_j = bj.pair;
                    sc.cost = j - i - 1;
                    sc.edge = add_edge(bi.exit_node, bj.entry_node, EdgeKind::Fixed, Rat(sc.cost));
                    map.shortcuts.push_back(sc);
                }
            }
        }
    }

    map.source = inst.source = 0;
    map.sink = inst.sink = m;
    require_valid(inst);
    return {std::move(inst), std::move(map)};
}

// Sanity checks that a map and instance belong together: referenced ids are
// in range, kinds and costs match the construction. Guards CLI users against
// mismatched files.
inline ValidationReport validate_reduction_map(const StackInstance& inst,
                                               const ReductionMap& map) {
    ValidationReport report;
    auto flag = [&](std::string msg) { report.violations.push_back({std::move(msg)}); };
    const int edge_count = static_cast<int>(inst.edges.size());
    auto check_edge = [&](int id, EdgeKind kind, const Rat* cost, const std::string& what) {
        if (id < 0 || id >= edge_count) {
            flag(what + " edge id out of range: " + std::to_string(id));
            return;
        }
        const Edge& e = inst.edge(id);
        if (e.kind != kind) flag(what + " edge " + std::to_string(id) + " has wrong kind");
        else if (cost && e.fixed_cost != *cost)
            flag(what + " edge " + std::to_string(id) + " has wrong cost");
    };

    const Rat two(2), zero(0);
    for (const Gadget& g : map.gadgets) {
        check_edge(g.bypass_edge, EdgeKind::Fixed, &two, "bypass");
        for (const GadgetBranch& b : g.branches) {
            check_edge(b.in_edge, EdgeKind::Fixed, &zero, "in-connector");
            check_edge(b.pricable_edge, EdgeKind::Pricable, nullptr, "pricable");
            check_edge(b.out_edge, EdgeKind::Fixed, &zero, "out-connector");
        }
    }
    for (const ShortcutRecord& sc : map.shortcuts) {
        if (sc.cost != sc.gadget_j - sc.gadget_i - 1)
            flag("shortcut cost " + std::to_string(sc.cost) + " does not match gadget gap");
        const Rat expected(sc.cost);
        check_edge(sc.edge, EdgeKind::Fixed, &expected, "shortcut");
    }
    if (map.gadget_count() > 0) {
        if (inst.source != map.gadgets.front().entry_node) flag("source is not the first entry node");
        if (inst.sink != map.gadgets.back().exit_node) flag("sink is not the last exit node");
    }
    return report;
}

inline void require_consistent(const StackInstance& inst, const ReductionMap& map) {
    require_valid(inst);
    const ValidationReport report = validate_reduction_map(inst, map);
    if (!report.ok())
        throw InputError("instance/map mismatch: " + report.violations.front().message);
}

// Prices branch (kappa, lambda) of gadget i at 2 exactly when the assignment
// selects that pair, INFINITE otherwise. Under a single assignment no two
// finite branches conflict, so no finite-cost path can use a shortcut and the
// consumer pays 2 per satisfied constraint edge.
inline Pricing completeness_pricing(const ReductionMap& map, const Assignment& a) {
    Pricing p;
    for (const Gadget& g : map.gadgets) {
        const int kappa = a.left_labels.at(static_cast<std::size_t>(g.left_vertex));
        const int lambda = a.right_labels.at(static_cast<std::size_t>(g.right_vertex));
        for (const GadgetBranch& b : g.branches) {
            const bool selected = b.pair.first == kappa && b.pair.second == lambda;
            p.prices[b.pricable_edge] = selected ? Price::finite(Rat(2)) : Price::infinite();
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// JSON: {gadgets: [{entry, exit, bypass, v, w,
//                   branches: [{pair, in, pricable, out, u, x}]}],
//        shortcuts: [{i, pair_i, j, pair_j, edge, cost}]}
// ---------------------------------------------------------------------------

inline Json reduction_map_to_json(const ReductionMap& map) {
    Json j;
    j["gadgets"] = Json::array();
    for (const Gadget& g : map.gadgets) {
        Json jg;
        jg["entry"] = g.entry_node;
        jg["exit"] = g.exit_node;
        jg["bypass"] = g.bypass_edge;
        jg["v"] = g.left_vertex;
        jg["w"] = g.right_vertex;
        jg["branches"] = Json::array();
        for (const GadgetBranch& b : g.branches) {
            Json jb;
            jb["pair"] = Json::array({b.pair.first, b.pair.second});
            jb["in"] = b.in_edge;
            jb["pricable"] = b.pricable_edge;
            jb["out"] = b.out_edge;
            jb["u"] = b.entry_node;
            jb["x"] = b.exit_node;
            jg["branches"].push_back(std::move(jb));
        }
        j["gadgets"].push_back(std::move(jg));
    }
    j["shortcuts"] = Json::array();
    for (const ShortcutRecord& sc : map.shortcuts) {
        Json js;
        js["i"] = sc.gadget_i;
        js["pair_i"] = Json::array({sc.pair_i.first, sc.pair_i.second});
        js["j"] = sc.gadget_j;
        js["pair_j"] = Json::array({sc.pair_j.first, sc.pair_j.second});
        js["edge"] = sc.edge;
        js["cost"] = sc.cost;
        j["shortcuts"].push_back(std::move(js));
    }
    return j;
}

inline ReductionMap reduction_map_from_json(const Json& j) {
    ReductionMap map;
    auto read_pair = [](const Json& jp) -> LabelPair {
        if (!jp.is_array() || jp.size() != 2)
            throw InputError("label pair must be a two-element array");
        return {jp.at(0).get<int>(), jp.at(1).get<int>()};
    };
    try {
        int index = 1;
        for (const Json& jg : j.at("gadgets")) {
            Gadget g;
            g.index = index++;
            g.entry_node = jg.at("entry").get<int>();
            g.exit_node = jg.at("exit").get<int>();
            g.bypass_edge = jg.at("bypass").get<int>();
            g.left_vertex = jg.at("v").get<int>();
            g.right_vertex = jg.at("w").get<int>();
            for (const Json& jb : jg.at("branches")) {
                GadgetBranch b;
                b.pair = read_pair(jb.at("pair"));
                b.in_edge = jb.at("in").get<int>();
                b.pricable_edge = jb.at("pricable").get<int>();
                b.out_edge = jb.at("out").get<int>();
                b.entry_node = jb.at("u").get<int>();
                b.exit_node = jb.at("x").get<int>();
                g.branches.push_back(b);
            }
            map.gadgets.push_back(std::move(g));
        }
        for (const Json& js : j.at("shortcuts")) {
            ShortcutRecord sc;
            sc.gadget_i = js.at("i").get<int>();
            sc.pair_i = read_pair(js.at("pair_i"));
            sc.gadget_j = js.at("j").get<int>();
            sc.pair_j = read_pair(js.at("pair_j"));
            sc.edge = js.at("edge").get<int>();
            sc.cost = js.at("cost").get<int>();
            map.shortcuts.push_back(sc);
        }
    } catch (const Json::exception& ex) {
        throw InputError(std::string("malformed reduction map JSON: ") + ex.what());
    }
    if (map.gadgets.empty()) throw InputError("reduction map has no gadgets");
    map.source = map.gadgets.front().entry_node;
    map.sink = map.gadgets.back().exit_node;
    return map;
}

}  // namespace stacksp
