#pragma once

#include <map>
#include <string>
#include <vector>

#include "stacksp/errors.hpp"
#include "stacksp/rational.hpp"

namespace stacksp {

enum class EdgeKind { Fixed, Pricable };

struct Edge {
    int id = 0;
    int tail = 0;
    int head = 0;
    EdgeKind kind = EdgeKind::Fixed;
    Rat fixed_cost;  // always 0 for pricable edges
};

// Directed graph with fixed-cost and pricable edges plus a source and sink.
struct StackInstance {
    int node_count = 0;
    std::vector<Edge> edges;
    int source = 0;
    int sink = 0;

    const Edge& edge(int id) const { return edges.at(static_cast<std::size_t>(id)); }

    bool is_pricable(int id) const { return edge(id).kind == EdgeKind::Pricable; }

    std::vector<int> pricable_edge_ids() const {
        std::vector<int> ids;
        for (const Edge& e : edges)
            if (e.kind == EdgeKind::Pricable) ids.push_back(e.id);
        return ids;
    }
};

// Total mapping from every pricable edge id to a price (finite or infinite).
struct Pricing {
    std::map<int, Price> prices;

    const Price& at(int edge_id) const {
        auto it = prices.find(edge_id);
        if (it == prices.end())
            throw InputError("pricing has no entry for edge " + std::to_string(edge_id));
        return it->second;
    }

    friend bool operator==(const Pricing& a, const Pricing& b) {
        return a.prices == b.prices;
    }
};

struct PurchaseResult {
    std::vector<int> path;  // edge ids, source to sink
    Rat total_cost;
    Rat revenue;
    int pricable_count = 0;

    friend bool operator==(const PurchaseResult& a, const PurchaseResult& b) {
        return a.path == b.path && a.total_cost == b.total_cost &&
               a.revenue == b.revenue && a.pricable_count == b.pricable_count;
    }
};

struct Violation {
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

// Reports every violated instance invariant; empty report iff valid.
inline ValidationReport validate_instance(const StackInstance& inst) {
    ValidationReport report;
    auto flag = [&](std::string msg) { report.violations.push_back({std::move(msg)}); };

    if (inst.node_count <= 0) flag("node_count must be positive");
    if (inst.source == inst.sink) flag("source equals sink");
    auto check_node = [&](int v, const std::string& what) {
        if (v < 0 || v >= inst.node_count) flag(what + " out of range: " + std::to_string(v));
    };
    check_node(inst.source, "source");
    check_node(inst.sink, "sink");

    for (std::size_t i = 0; i < inst.edges.size(); ++i) {
        const Edge& e = inst.edges[i];
        const std::string tag = "edge " + std::to_string(e.id);
        if (e.id != static_cast<int>(i))
            flag("edge at position " + std::to_string(i) + " has id " + std::to_string(e.id) +
                 " (ids must be dense 0..|edges|-1 in order)");
        check_node(e.tail, tag + " tail");
        check_node(e.head, tag + " head");
        if (e.fixed_cost < 0) flag(tag + " has negative fixed cost");
        if (e.kind == EdgeKind::Pricable && e.fixed_cost != 0)
            flag(tag + " is pricable but has nonzero fixed cost");
    }
    return report;
}

inline void require_valid(const StackInstance& inst) {
    const ValidationReport report = validate_instance(inst);
    if (!report.ok()) throw InputError("invalid instance: " + report.violations.front().message);
}

// Checks that the pricing's domain is exactly the instance's pricable edge set.
inline void require_well_formed(const StackInstance& inst, const Pricing& p) {
    require_valid(inst);
    for (const Edge& e : inst.edges) {
        const bool priced = p.prices.count(e.id) > 0;
        if (e.kind == EdgeKind::Pricable && !priced)
            throw InputError("pricable edge " + std::to_string(e.id) + " has no price");
        if (e.kind == EdgeKind::Fixed && priced)
            throw InputError("fixed edge " + std::to_string(e.id) + " has a price");
    }
}

// ---------------------------------------------------------------------------
// JSON serialization.
// Instance: {nodes, edges: [{id, tail, head, kind, cost}], s, t}.
// Pricing:  {"<edge id>": price} with "inf" for infinite.
// ---------------------------------------------------------------------------

inline Json instance_to_json(const StackInstance& inst) {
    Json j;
    j["nodes"] = inst.node_count;
    j["edges"] = Json::array();
    for (const Edge& e : inst.edges) {
        Json je;
        je["id"] = e.id;
        je["tail"] = e.tail;
        je["head"] = e.head;
        je["kind"] = (e.kind == EdgeKind::Pricable) ? "pricable" : "fixed";
        je["cost"] = rational_to_json(e.fixed_cost);
        j["edges"].push_back(std::move(je));
    }
    j["s"] = inst.source;
    j["t"] = inst.sink;
    return j;
}

inline StackInstance instance_from_json(const Json& j) {
    StackInstance inst;
    try {
        inst.node_count = j.at("nodes").get<int>();
        inst.source = j.at("s").get<int>();
        inst.sink = j.at("t").get<int>();
        for (const Json& je : j.at("edges")) {
            Edge e;
            e.id = je.at("id").get<int>();
            e.tail = je.at("tail").get<int>();
            e.head = je.at("head").get<int>();
            const std::string kind = je.at("kind").get<std::string>();
            if (kind == "fixed") {
                e.kind = EdgeKind::Fixed;
            } else if (kind == "pricable") {
                e.kind = EdgeKind::Pricable;
            } else {
                throw InputError("unknown edge kind: " + kind);
            }
            e.fixed_cost = rational_from_json(je.at("cost"));
            inst.edges.push_back(std::move(e));
        }
    } catch (const Json::exception& ex) {
        throw InputError(std::string("malformed instance JSON: ") + ex.what());
    }
    return inst;
}

inline Json pricing_to_json(const Pricing& p) {
    Json j = Json::object();
    for (const auto& [id, price] : p.prices) j[std::to_string(id)] = price_to_json(price);
    return j;
}

inline Pricing pricing_from_json(const Json& j) {
    Pricing p;
    if (!j.is_object()) throw InputError("pricing JSON must be an object");
    for (const auto& [key, value] : j.items()) {
        int id = 0;
        try {
            std::size_t used = 0;
            id = std::stoi(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw InputError("pricing key is not an edge id: '" + key + "'");
        }
        p.prices[id] = price_from_json(value);
    }
    return p;
}

inline Json purchase_to_json(const PurchaseResult& r) {
    Json j;
    j["path"] = r.path;
    j["cost"] = rational_to_json(r.total_cost);
    j["revenue"] = rational_to_json(r.revenue);
    j["pricable_count"] = r.pricable_count;
    return j;
}

}  // namespace stacksp
