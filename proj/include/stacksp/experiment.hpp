#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stacksp/islands.hpp"
#include "stacksp/labelcover.hpp"
#include "stacksp/random.hpp"
#include "stacksp/reduction.hpp"
#include "stacksp/solvers.hpp"

namespace stacksp {

// One audited comparison; pass means lhs <= rhs. For checks that range over
// many pricings or islands, lhs/rhs hold the extremal witness (the pair with
// the largest lhs - rhs), so a failing row shows an actual counterexample.
struct CheckRow {
    std::string name;
    bool pass = true;
    Rat lhs;
    Rat rhs;
};

struct GapLimits {
    ExactLimits exact{};
    std::uint64_t max_assignments = std::uint64_t{1} << 22;
};

struct GapReport {
    int m = 0;
    int opt_lc = 0;
    Rat revenue_exact;
    Rat revenue_single_price;
    Rat revenue_uniform1;
    bool exact_certified = false;  // optimum witnessed by the 2m ceiling, not enumeration
    int extracted_satisfied = 0;   // satisfied edges of the assignment read off the exact pricing
    Rat c;                         // revenue_exact - m
    Rat ratio_to_2m;
    int samples = 0;
    std::uint64_t seed = 0;
    std::vector<CheckRow> checks;

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckRow& row) { return row.pass; });
    }
};

// Random pricing concentrated around the decisive range: each pricable edge
// joins the support with probability 1/2 and gets a uniform rational in
// [0, 4] with denominator at most 8; the rest stay INFINITE.
inline Pricing sample_pricing(const StackInstance& inst, Rng& rng) {
    Pricing p;
    for (int id : inst.pricable_edge_ids()) {
        const bool include = rng.coin();
        p.prices[id] = include ? Price::finite(rng.rational_in(4, 8)) : Price::infinite();
    }
    return p;
}

namespace detail {

// Keeps the observation with the largest lhs - rhs margin.
struct WitnessMax {
    bool seen = false;
    Rat lhs, rhs;
    void observe(const Rat& l, const Rat& r) {
        if (!seen || l - r > lhs - rhs) {
            seen = true;
            lhs = l;
            rhs = r;
        }
    }
    CheckRow row(std::string name) const {
        if (!seen) return {std::move(name), true, Rat(0), Rat(0)};
        return {std::move(name), lhs <= rhs, lhs, rhs};
    }
};

}  // namespace detail

// Full audit of one instance: brute-force optimum, reduction, all three
// solvers, then decomposition + extraction + inequality checks on the exact
// pricing and on `pricing_samples` seeded random pricings. Check failures are
// reported in the rows, never thrown.
inline GapReport run_gap_experiment(const LabelCoverInstance& lc, const GapLimits& limits,
                                    int pricing_samples, std::uint64_t seed) {
    require_valid(lc);
    if (pricing_samples < 0) throw InvalidParamsError("pricing_samples must be nonnegative");
    const BruteForceResult bf = brute_force_opt(lc, limits.max_assignments);
    auto [inst, map] = reduce(lc);
    const int m = map.gadget_count();

    GapReport report;
    report.m = m;
    report.opt_lc = bf.satisfied;
    report.samples = pricing_samples;
    report.seed = seed;

    SolverResult exact;
    try {
        exact = exact_optimal_pricing(inst, limits.exact);
    } catch (const TooLargeError&) {
        // Fully satisfiable instances have a pricing meeting the universal 2m
        // ceiling, which certifies optimality without any enumeration.
        if (bf.satisfied != m) throw;
        exact.method = "exact";
        exact.pricing = completeness_pricing(map, bf.assignment);
        exact.purchased = consumer_best_response(inst, exact.pricing);
        exact.revenue = exact.purchased.revenue;
        if (exact.revenue != Rat(2 * m)) throw;
        report.exact_certified = true;
    }
    const SinglePriceResult single = best_single_price(inst);
    const SolverResult uniform1 = uniform_pricing(inst, Rat(1));
    report.revenue_exact = exact.revenue;
    report.revenue_single_price = single.result.revenue;
    report.revenue_uniform1 = uniform1.revenue;
    report.c = exact.revenue - m;
    report.ratio_to_2m = exact.revenue / Rat(2 * m);

    std::vector<Pricing> audited{exact.pricing};
    Rng rng(seed);
    for (int i = 0; i < pricing_samples; ++i) audited.push_back(sample_pricing(inst, rng));

    detail::WitnessMax ceiling, extraction, boundary, segment, branch_price, step, global_step,
        chain, island_rev;
    ceiling.observe(single.result.revenue, Rat(2 * m));
    ceiling.observe(uniform1.revenue, Rat(2 * m));

    bool first = true;
    for (const Pricing& p : audited) {
        const IslandDiagnostics diag = island_diagnostics_collect(inst, map, p);
        const Assignment a = extract_assignment(lc, map, diag.decomposition);
        const int sat = satisfied_count(lc, a);
        const int r = diag.significant_count;
        if (first) {
            report.extracted_satisfied = sat;
            first = false;
        }
        ceiling.observe(diag.revenue, Rat(2 * m));
        extraction.observe(Rat((r + 1) / 2), Rat(sat));
        int bad_islands = 0;
        for (const IslandInterval& island : diag.decomposition.islands) {
            const SignificantGadget& s =
                diag.decomposition.significant[static_cast<std::size_t>(island.alpha - 1)];
            const SignificantGadget& e =
                diag.decomposition.significant[static_cast<std::size_t>(island.omega - 1)];
            if (s.enters_by_shortcut || e.exits_by_shortcut) ++bad_islands;
        }
        boundary.observe(Rat(bad_islands), Rat(0));
        for (const DiagnosticsRow& row : diag.rows) {
            segment.observe(row.segment_bound_lhs, row.segment_bound_rhs);
            branch_price.observe(row.price_bound_lhs, row.price_bound_rhs);
            step.observe(row.step_bound_lhs, row.step_bound_rhs);
        }
        global_step.observe(diag.revenue, diag.step_bound_total);
        chain.observe(Rat(diag.chain_total), Rat(m));
        if (m >= 2) island_rev.observe(diag.revenue, diag.revenue_bound);
    }

    report.checks.push_back(ceiling.row("ceiling_2m"));
    report.checks.push_back({"revenue_lower_2opt", Rat(2 * bf.satisfied) <= exact.revenue,
                             Rat(2 * bf.satisfied), exact.revenue});
    report.checks.push_back({"revenue_upper_m_plus_4opt", exact.revenue <= Rat(m + 4 * bf.satisfied),
                             exact.revenue, Rat(m + 4 * bf.satisfied)});
    report.checks.push_back(extraction.row("extraction_guarantee"));
    report.checks.push_back(boundary.row("island_boundary"));
    report.checks.push_back(segment.row("segment_cost_bound"));
    report.checks.push_back(branch_price.row("branch_price_bound"));
    report.checks.push_back(step.row("island_step_bound"));
    report.checks.push_back(global_step.row("global_step_bound"));
    report.checks.push_back(chain.row("chain_length_total"));
    if (m >= 2) report.checks.push_back(island_rev.row("revenue_island_bound"));
    return report;
}

inline Json check_row_to_json(const CheckRow& row) {
    Json j;
    j["name"] = row.name;
    j["pass"] = row.pass;
    j["lhs"] = rational_to_json(row.lhs);
    j["rhs"] = rational_to_json(row.rhs);
    return j;
}

inline CheckRow check_row_from_json(const Json& j) {
    CheckRow row;
    row.name = j.at("name").get<std::string>();
    row.pass = j.at("pass").get<bool>();
    row.lhs = rational_from_json(j.at("lhs"));
    row.rhs = rational_from_json(j.at("rhs"));
    return row;
}

inline Json gap_report_to_json(const GapReport& report) {
    Json j;
    j["m"] = report.m;
    j["opt_lc"] = report.opt_lc;
    j["revenue_exact"] = rational_to_json(report.revenue_exact);
    j["revenue_single_price"] = rational_to_json(report.revenue_single_price);
    j["revenue_uniform_1"] = rational_to_json(report.revenue_uniform1);
    j["exact_certified"] = report.exact_certified;
    j["extracted_satisfied"] = report.extracted_satisfied;
    j["c"] = rational_to_json(report.c);
    j["ratio_to_2m"] = rational_to_json(report.ratio_to_2m);
    j["samples"] = report.samples;
    j["seed"] = report.seed;
    j["checks"] = Json::array();
    for (const CheckRow& row : report.checks) j["checks"].push_back(check_row_to_json(row));
    j["all_pass"] = report.all_pass();
    return j;
}

inline GapReport gap_report_from_json(const Json& j) {
    GapReport report;
    report.m = j.at("m").get<int>();
    report.opt_lc = j.at("opt_lc").get<int>();
    report.revenue_exact = rational_from_json(j.at("revenue_exact"));
    report.revenue_single_price = rational_from_json(j.at("revenue_single_price"));
    report.revenue_uniform1 = rational_from_json(j.at("revenue_uniform_1"));
    report.exact_certified = j.at("exact_certified").get<bool>();
    report.extracted_satisfied = j.at("extracted_satisfied").get<int>();
    report.c = rational_from_json(j.at("c"));
    report.ratio_to_2m = rational_from_json(j.at("ratio_to_2m"));
    report.samples = j.at("samples").get<int>();
    report.seed = j.at("seed").get<std::uint64_t>();
    for (const Json& row : j.at("checks")) report.checks.push_back(check_row_from_json(row));
    return report;
}

inline std::string render_gap_text(const GapReport& report) {
    std::string out;
    out += "gap report: m=" + std::to_string(report.m) +
           " opt_lc=" + std::to_string(report.opt_lc) + "\n";
    out += "  revenue: exact=" + format_rational(report.revenue_exact) +
           (report.exact_certified ? " (certified by ceiling)" : "") +
           " single-price=" + format_rational(report.revenue_single_price) +
           " uniform-1=" + format_rational(report.revenue_uniform1) + "\n";
    out += "  c=" + format_rational(report.c) +
           " ratio_to_2m=" + format_rational(report.ratio_to_2m) +
           " extracted_satisfied=" + std::to_string(report.extracted_satisfied) +
           " samples=" + std::to_string(report.samples) +
           " seed=" + std::to_string(report.seed) + "\n";
    out += "  checks:\n";
    for (const CheckRow& row : report.checks)
        out += std::string("    [") + (row.pass ? "PASS" : "FAIL") + "] " + row.name + ": " +
               format_rational(row.lhs) + " <= " + format_rational(row.rhs) + "\n";
    out += std::string("overall: ") + (report.all_pass() ? "PASS" : "FAIL") + "\n";
    return out;
}

}  // namespace stacksp
