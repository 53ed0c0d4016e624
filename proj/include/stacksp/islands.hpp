#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stacksp/consumer.hpp"
#include "stacksp/errors.hpp"
#include "stacksp/instance.hpp"
#include "stacksp/labelcover.hpp"
#include "stacksp/rational.hpp"
#include "stacksp/reduction.hpp"

namespace stacksp {

// A gadget whose pricable edge lies on the purchased path and was selected by
// the island-building scan.
struct SignificantGadget {
    int gadget = 0;  // 1-based gadget index
    LabelPair pair;
    int pricable_edge = 0;
    bool island_start = false;
    bool island_end = false;
    bool enters_by_shortcut = false;
    bool exits_by_shortcut = false;
    int in_length = 0;     // cost of the shortcut the path arrives through, 0 if none
    int out_length = 0;    // cost of the shortcut the path leaves through, 0 if none
    int chain_length = 0;  // cost of the shortcut to the next significant gadget, 0 at an end
};

// Interval of 1-based positions into the significant list.
struct IslandInterval {
    int alpha = 0;
    int omega = 0;
};

struct IslandDecomposition {
    std::vector<SignificantGadget> significant;
    std::vector<IslandInterval> islands;
    Pricing normalized;
    PurchaseResult purchase;
};

// Normalizes the pricing, takes the purchased path, and groups the gadgets
// whose pricable edges it uses. Scan: the first such gadget starts an island;
// from the current gadget, jump to the furthest later gadget whose used
// pricable edge is joined to the current one by a shortcut; when none exists
// the island ends and the next used gadget starts a fresh one. Used gadgets
// skipped by a jump lie inside the island but are not significant.
inline IslandDecomposition decompose_islands(const StackInstance& inst, const ReductionMap& map,
                                             const Pricing& p) {
    require_consistent(inst, map);
    IslandDecomposition dec;
    std::tie(dec.normalized, dec.purchase) = normalize_pricing(inst, p);
    const std::vector<int>& path = dec.purchase.path;

    // Which gadget/branch owns each pricable edge.
    std::map<int, std::pair<int, LabelPair>> branch_of;  // pricable edge -> (gadget, pair)
    for (const Gadget& g : map.gadgets)
        for (const GadgetBranch& b : g.branches) branch_of[b.pricable_edge] = {g.index, b.pair};

    // Pricable edges on the path, in path order (= increasing gadget order).
    std::vector<SignificantGadget> used;  // candidates; not all become significant
    std::vector<int> used_position;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const int id = path[k];
        if (!inst.is_pricable(id)) continue;
        auto it = branch_of.find(id);
        if (it == branch_of.end())
            throw InputError("purchased pricable edge " + std::to_string(id) +
                             " is not a gadget branch");
        SignificantGadget sg;
        sg.gadget = it->second.first;
        sg.pair = it->second.second;
        sg.pricable_edge = id;
        if (!used.empty() && used.back().gadget >= sg.gadget)
            throw Error("internal: purchased gadgets out of order");
        used.push_back(sg);
        used_position.push_back(static_cast<int>(k));
    }
    if (used.empty()) return dec;  // no pricable purchases: empty decomposition

    // Shortcut lookup between specific branches.
    std::map<std::pair<std::pair<int, LabelPair>, std::pair<int, LabelPair>>, int> shortcut_between;
    for (const ShortcutRecord& sc : map.shortcuts)
        shortcut_between[{{sc.gadget_i, sc.pair_i}, {sc.gadget_j, sc.pair_j}}] = sc.cost;
    auto joined = [&](const SignificantGadget& a, const SignificantGadget& b) {
        return shortcut_between.count({{a.gadget, a.pair}, {b.gadget, b.pair}}) > 0;
    };

    // Island scan over the used gadgets.
    const int n = static_cast<int>(used.size());
    int current = 0;
    used[0].island_start = true;
    std::vector<int> chosen;  // indices into `used`
    IslandInterval interval{1, 0};
    for (;;) {
        chosen.push_back(current);
        int next = -1;
        for (int j = n - 1; j > current; --j) {
            if (joined(used[static_cast<std::size_t>(current)], used[static_cast<std::size_t>(j)])) {
                next = j;
                break;
            }
        }
        if (next >= 0) {
            used[static_cast<std::size_t>(current)].chain_length =
                used[static_cast<std::size_t>(next)].gadget -
                used[static_cast<std::size_t>(current)].gadget - 1;
            current = next;
            continue;
        }
        used[static_cast<std::size_t>(current)].island_end = true;
        interval.omega = static_cast<int>(chosen.size());
        dec.islands.push_back(interval);
        if (current + 1 >= n) break;
        ++current;
        used[static_cast<std::size_t>(current)].island_start = true;
        interval.alpha = interval.omega + 1;
    }

    // Shortcut edges the path itself traverses around each chosen gadget.
    std::map<int, int> shortcut_edge_cost;
    for (const ShortcutRecord& sc : map.shortcuts) shortcut_edge_cost[sc.edge] = sc.cost;
    for (int idx : chosen) {
        SignificantGadget& sg = used[static_cast<std::size_t>(idx)];
        const int k = used_position[static_cast<std::size_t>(idx)];
        if (k > 0) {
            auto it = shortcut_edge_cost.find(path[static_cast<std::size_t>(k - 1)]);
            if (it != shortcut_edge_cost.end()) {
                sg.enters_by_shortcut = true;
                sg.in_length = it->second;
            }
        }
        if (k + 1 < static_cast<int>(path.size())) {
            auto it = shortcut_edge_cost.find(path[static_cast<std::size_t>(k + 1)]);
            if (it != shortcut_edge_cost.end()) {
                sg.exits_by_shortcut = true;
                sg.out_length = it->second;
            }
        }
        dec.significant.push_back(sg);
    }
    return dec;
}

// Reads off an assignment from the label pairs of the 1st, 3rd, 5th, ...
// significant gadgets. The scan's maximality guarantees no shortcut joins any
// two of their pricable edges, so their pairs never disagree on a shared
// vertex; a disagreement would mean the decomposition is broken. Unmentioned
// vertices get label 1.
inline Assignment extract_assignment(const LabelCoverInstance& lc, const ReductionMap& map,
                                     const IslandDecomposition& dec) {
    Assignment a;
    a.left_labels.assign(static_cast<std::size_t>(lc.left_count), 0);
    a.right_labels.assign(static_cast<std::size_t>(lc.right_count), 0);
    auto put = [](std::vector<int>& labels, int vertex, int label) {
        int& slot = labels.at(static_cast<std::size_t>(vertex));
        if (slot != 0 && slot != label)
            throw Error("internal: selected gadgets disagree on vertex " + std::to_string(vertex));
        slot = label;
    };
    for (std::size_t i = 0; i < dec.significant.size(); i += 2) {
        const SignificantGadget& sg = dec.significant[i];
        const Gadget& g = map.gadgets.at(static_cast<std::size_t>(sg.gadget - 1));
        put(a.left_labels, g.left_vertex, sg.pair.first);
        put(a.right_labels, g.right_vertex, sg.pair.second);
    }
    for (int& label : a.left_labels)
        if (label == 0) label = 1;
    for (int& label : a.right_labels)
        if (label == 0) label = 1;
    return a;
}

// Certified per-gadget accounting for one significant gadget.
struct DiagnosticsRow {
    int position = 0;  // 1-based index into the significant list
    int gadget = 0;
    Rat price;
    // Entry and exit charges. These equal the traversed shortcut costs except
    // when a single shortcut joins two significant gadgets directly; then its
    // cost is apportioned between the earlier gadget's exit charge and the
    // later gadget's entry charge, keeping the segment accounting exact.
    Rat in_charge;
    Rat out_charge;
    int chain_length = 0;
    Rat pricable_segment;  // prices paid strictly between this gadget's exit
                           // and the next significant gadget's entry
    Rat fixed_segment;     // fixed costs of the same stretch
    Rat segment_bound_lhs, segment_bound_rhs;  // pricable part vs slack left by the chain shortcut
    Rat price_bound_lhs, price_bound_rhs;      // price vs bypassing the spanned gadgets at 2 each
    Rat step_bound_lhs, step_bound_rhs;        // price + segment vs the telescoping step
};

struct DiagnosticsViolation {
    std::string what;
    int position = 0;  // 1-based significant position, 0 when global
};

struct IslandDiagnostics {
    std::vector<DiagnosticsRow> rows;
    IslandDecomposition decomposition;
    Rat revenue;
    int significant_count = 0;
    int gadget_count = 0;
    Int chain_total;       // sum of chain lengths; never exceeds gadget_count
    Rat step_bound_total;  // 2 * significant_count + chain_total; holds for every pricing
    Rat revenue_bound;     // 2 * (significant_count - 1) + gadget_count
    bool revenue_bound_applies = false;  // the above requires at least two gadgets
    std::vector<DiagnosticsViolation> violations;
    bool clean() const { return violations.empty(); }
};

// Audits the purchased path against the certified inequalities and returns
// every computed quantity; failed checks are collected, not thrown.
inline IslandDiagnostics island_diagnostics_collect(const StackInstance& inst,
                                                    const ReductionMap& map, const Pricing& p) {
    IslandDiagnostics diag;
    diag.decomposition = decompose_islands(inst, map, p);
    const IslandDecomposition& dec = diag.decomposition;
    const std::vector<int>& path = dec.purchase.path;
    diag.revenue = dec.purchase.revenue;
    diag.significant_count = static_cast<int>(dec.significant.size());
    diag.gadget_count = map.gadget_count();
    diag.chain_total = 0;

    auto violated = [&diag](const std::string& what, int position) {
        diag.violations.push_back({what, position});
    };

    const int r = diag.significant_count;
    diag.revenue_bound = Rat(2 * (r - 1) + diag.gadget_count);
    diag.revenue_bound_applies = r >= 1 && diag.gadget_count >= 2;
    if (r == 0) {
        diag.step_bound_total = Rat(0);
        if (diag.revenue != 0) violated("no pricable purchases but nonzero revenue", 0);
        return diag;
    }

    for (const IslandInterval& island : dec.islands) {
        const SignificantGadget& start = dec.significant[static_cast<std::size_t>(island.alpha - 1)];
        const SignificantGadget& end = dec.significant[static_cast<std::size_t>(island.omega - 1)];
        if (start.enters_by_shortcut) violated("island entered through a shortcut", island.alpha);
        if (end.exits_by_shortcut) violated("island exited through a shortcut", island.omega);
    }

    std::map<int, int> shortcut_edge_cost;
    for (const ShortcutRecord& sc : map.shortcuts) shortcut_edge_cost[sc.edge] = sc.cost;
    std::map<int, int> pos_of_edge;
    for (std::size_t k = 0; k < path.size(); ++k)
        pos_of_edge[path[k]] = static_cast<int>(k);
    std::vector<int> pos(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
        pos[static_cast<std::size_t>(i)] =
            pos_of_edge.at(dec.significant[static_cast<std::size_t>(i)].pricable_edge);

    // Segment sums between consecutive significant pricable edges (and after
    // the last one). Boundary shortcut edges are charged to out/in below, not
    // to the segment. "Fused" marks a segment that is one shortcut serving as
    // both the exit of gadget i and the entry of gadget i+1.
    std::vector<Rat> seg_pricable(static_cast<std::size_t>(r), Rat(0));
    std::vector<Rat> seg_fixed(static_cast<std::size_t>(r), Rat(0));
    std::vector<bool> fused(static_cast<std::size_t>(r), false);
    for (int i = 0; i < r; ++i) {
        const int from = pos[static_cast<std::size_t>(i)];
        const int to = (i + 1 < r) ? pos[static_cast<std::size_t>(i + 1)]
                                   : static_cast<int>(path.size());
        int lo = from + 1;
        int hi = to - 1;  // inclusive range between the pricable edges
        const bool exit_sc =
            lo <= hi && shortcut_edge_cost.count(path[static_cast<std::size_t>(lo)]) > 0;
        const bool entry_sc = (i + 1 < r) && lo <= hi &&
                              shortcut_edge_cost.count(path[static_cast<std::size_t>(hi)]) > 0;
        if (exit_sc && entry_sc && lo == hi) {
            fused[static_cast<std::size_t>(i)] = true;
            ++lo;
        } else {
            if (exit_sc) ++lo;
            if (entry_sc) --hi;
        }
        for (int k = lo; k <= hi; ++k) {
            const Edge& e = inst.edge(path[static_cast<std::size_t>(k)]);
            if (e.kind == EdgeKind::Pricable)
                seg_pricable[static_cast<std::size_t>(i)] += dec.normalized.at(e.id).value();
            else
                seg_fixed[static_cast<std::size_t>(i)] += e.fixed_cost;
        }
    }

    // Entry/exit charges. For a fused segment the joining shortcut's cost is
    // split: the exit side takes the smallest charge that still covers the
    // earlier gadget's price, the entry side inherits the remainder. Path
    // optimality guarantees the split stays within the shortcut's cost.
    std::vector<Rat> in_charge(static_cast<std::size_t>(r));
    std::vector<Rat> out_charge(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
        const SignificantGadget& sg = dec.significant[static_cast<std::size_t>(i)];
        const Rat price = dec.normalized.at(sg.pricable_edge).value();
        if (i == 0 || !fused[static_cast<std::size_t>(i - 1)])
            in_charge[static_cast<std::size_t>(i)] = Rat(sg.in_length);
        if (fused[static_cast<std::size_t>(i)]) {
            Rat delta = price - 2 - in_charge[static_cast<std::size_t>(i)];
            if (delta < 0) delta = 0;
            const Rat chain(sg.chain_length);
            if (delta > chain) {
                violated("exit charge exceeds the joining shortcut", i + 1);
                delta = chain;
            }
            out_charge[static_cast<std::size_t>(i)] = delta;
            in_charge[static_cast<std::size_t>(i + 1)] = chain - delta;
        } else {
            out_charge[static_cast<std::size_t>(i)] = Rat(sg.out_length);
        }
    }

    for (int i = 0; i < r; ++i) {
        const SignificantGadget& sg = dec.significant[static_cast<std::size_t>(i)];
        DiagnosticsRow row;
        row.position = i + 1;
        row.gadget = sg.gadget;
        row.price = dec.normalized.at(sg.pricable_edge).value();
        row.in_charge = in_charge[static_cast<std::size_t>(i)];
        row.out_charge = out_charge[static_cast<std::size_t>(i)];
        row.chain_length = sg.chain_length;
        row.pricable_segment = seg_pricable[static_cast<std::size_t>(i)];
        row.fixed_segment = seg_fixed[static_cast<std::size_t>(i)];
        diag.chain_total += sg.chain_length;

        const Rat next_in = sg.island_end ? Rat(0) : in_charge[static_cast<std::size_t>(i + 1)];

        // The path's stretch out + segment + next_in can be replaced by the
        // chain shortcut, so the pricable part is bounded by its slack.
        row.segment_bound_lhs = row.pricable_segment;
        row.segment_bound_rhs = Rat(sg.chain_length) - row.out_charge - next_in;
        // The stretch in + price + out can be replaced by cost-2 bypasses of
        // every gadget it spans.
        row.price_bound_lhs = row.price;
        row.price_bound_rhs = Rat(2) + row.in_charge + row.out_charge;
        // Sum of the two; the entry charges telescope along the island.
        row.step_bound_lhs = row.price + row.pricable_segment;
        row.step_bound_rhs = Rat(2) + Rat(sg.chain_length) + row.in_charge - next_in;

        if (row.segment_bound_lhs > row.segment_bound_rhs)
            violated("pricable segment exceeds chain slack", row.position);
        if (row.price_bound_lhs > row.price_bound_rhs)
            violated("price exceeds bypass cost", row.position);
        if (row.step_bound_lhs > row.step_bound_rhs)
            violated("step total exceeds telescoping bound", row.position);
        diag.rows.push_back(std::move(row));
    }

    if (diag.chain_total > diag.gadget_count)
        violated("chain shortcuts exceed the gadget count", 0);
    diag.step_bound_total = Rat(2 * r) + Rat(diag.chain_total);
    if (diag.revenue > diag.step_bound_total)
        violated("revenue exceeds the telescoped bound", 0);
    if (diag.revenue_bound_applies && diag.revenue > diag.revenue_bound)
        violated("revenue exceeds the global bound", 0);
    return diag;
}

// Throwing form: on instances produced by reduce() a violation indicates an
// implementation bug, so surface it as an error.
inline IslandDiagnostics island_diagnostics(const StackInstance& inst, const ReductionMap& map,
                                            const Pricing& p) {
    IslandDiagnostics diag = island_diagnostics_collect(inst, map, p);
    if (!diag.clean()) {
        const DiagnosticsViolation& v = diag.violations.front();
        throw InequalityViolatedError("certified inequality failed at significant gadget " +
                                          std::to_string(v.position) + ": " + v.what,
                                      v.position);
    }
    return diag;
}

inline Json significant_to_json(const SignificantGadget& sg) {
    Json j;
    j["gadget"] = sg.gadget;
    j["pair"] = Json::array({sg.pair.first, sg.pair.second});
    j["pricable"] = sg.pricable_edge;
    j["island_start"] = sg.island_start;
    j["island_end"] = sg.island_end;
    j["in"] = sg.in_length;
    j["out"] = sg.out_length;
    j["chain"] = sg.chain_length;
    return j;
}

inline Json decomposition_to_json(const IslandDecomposition& dec) {
    Json j;
    j["significant"] = Json::array();
    for (const SignificantGadget& sg : dec.significant)
        j["significant"].push_back(significant_to_json(sg));
    j["islands"] = Json::array();
    for (const IslandInterval& island : dec.islands)
        j["islands"].push_back(Json{{"alpha", island.alpha}, {"omega", island.omega}});
    j["pricing"] = pricing_to_json(dec.normalized);
    j["purchase"] = purchase_to_json(dec.purchase);
    return j;
}

inline Json diagnostics_to_json(const IslandDiagnostics& diag) {
    Json j;
    j["rows"] = Json::array();
    for (const DiagnosticsRow& row : diag.rows) {
        Json jr;
        jr["position"] = row.position;
        jr["gadget"] = row.gadget;
        jr["price"] = rational_to_json(row.price);
        jr["in"] = rational_to_json(row.in_charge);
        jr["out"] = rational_to_json(row.out_charge);
        jr["chain"] = row.chain_length;
        jr["pricable_segment"] = rational_to_json(row.pricable_segment);
        jr["fixed_segment"] = rational_to_json(row.fixed_segment);
        jr["segment_bound"] = Json::array(
            {rational_to_json(row.segment_bound_lhs), rational_to_json(row.segment_bound_rhs)});
        jr["price_bound"] = Json::array(
            {rational_to_json(row.price_bound_lhs), rational_to_json(row.price_bound_rhs)});
        jr["step_bound"] = Json::array(
            {rational_to_json(row.step_bound_lhs), rational_to_json(row.step_bound_rhs)});
        j["rows"].push_back(std::move(jr));
    }
    j["revenue"] = rational_to_json(diag.revenue);
    j["significant_count"] = diag.significant_count;
    j["gadget_count"] = diag.gadget_count;
    j["chain_total"] = diag.chain_total.convert_to<std::int64_t>();
    j["step_bound_total"] = rational_to_json(diag.step_bound_total);
    j["revenue_bound"] = rational_to_json(diag.revenue_bound);
    j["revenue_bound_applies"] = diag.revenue_bound_applies;
    j["violations"] = Json::array();
    for (const DiagnosticsViolation& v : diag.violations)
        j["violations"].push_back(Json{{"what", v.what}, {"position", v.position}});
    j["decomposition"] = decomposition_to_json(diag.decomposition);
    return j;
}

}  // namespace stacksp
