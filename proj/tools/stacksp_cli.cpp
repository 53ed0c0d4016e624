// Command-line surface for the StackSP laboratory: instance generation,
// reduction, consumer evaluation, pricing solvers, assignment extraction, and
// the aggregated gap report. All I/O uses the library's JSON formats; exit
// codes: 0 ok, 1 check failure, 2 input error, 3 limits exceeded.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "stacksp/stacksp.hpp"

namespace {

using stacksp::Json;
using stacksp::Rat;

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw stacksp::InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw stacksp::InputError(path + ": " + e.what());
    }
}

// Empty path means stdout. Files always end in a newline so repeated runs
// compare byte-for-byte.
void write_output(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw stacksp::InputError("cannot write " + path);
    out << body;
}

void emit(const std::string& path, const std::string& format, const Json& j,
          const std::string& text) {
    write_output(path, format == "text" ? text : j.dump(2) + "\n");
}

std::string render_purchase_text(const stacksp::PurchaseResult& r) {
    std::string out = "cost=" + stacksp::format_rational(r.total_cost) +
                      " revenue=" + stacksp::format_rational(r.revenue) +
                      " pricable_edges=" + std::to_string(r.pricable_count) + "\npath:";
    for (int id : r.path) out += " " + std::to_string(id);
    out += "\n";
    return out;
}

std::string render_solver_text(const stacksp::SolverResult& r) {
    std::string out = "method=" + r.method + " revenue=" + stacksp::format_rational(r.revenue) +
                      " cost=" + stacksp::format_rational(r.purchased.total_cost) + "\nprices:";
    for (const auto& [id, price] : r.pricing.prices)
        out += " " + std::to_string(id) + "=" + stacksp::format_price(price);
    out += "\npath:";
    for (int id : r.purchased.path) out += " " + std::to_string(id);
    out += "\n";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"StackSP: a laboratory for Stackelberg shortest-path pricing"};
    app.require_subcommand(1);

    // lc-gen
    auto* lc_gen = app.add_subcommand("lc-gen", "generate a planted label cover instance");
    struct {
        int left = 2, right = 2, labels = 2, edges = 2, decoys = 0;
        double corrupt = 0.0;
        std::uint64_t seed = 0;
        std::string out, format = "json";
    } gen;
    lc_gen->add_option("--left", gen.left, "left vertex count")->required();
    lc_gen->add_option("--right", gen.right, "right vertex count")->required();
    lc_gen->add_option("--labels", gen.labels, "label count k")->required();
    lc_gen->add_option("--edges", gen.edges, "edge count m")->required();
    lc_gen->add_option("--decoys", gen.decoys, "extra relation pairs per edge");
    lc_gen->add_option("--corrupt", gen.corrupt, "fraction of edges with the planted pair removed");
    lc_gen->add_option("--seed", gen.seed, "64-bit seed");
    lc_gen->add_option("--out", gen.out, "output file (stdout when omitted)");
    lc_gen->add_option("--format", gen.format)->check(CLI::IsMember({"json", "text"}));

    // reduce
    auto* reduce_cmd = app.add_subcommand("reduce", "reduce a label cover to a pricing instance");
    struct {
        std::string in, out_instance, out_map, format = "json";
    } red;
    reduce_cmd->add_option("--in", red.in, "label cover JSON")->required();
    reduce_cmd->add_option("--out-instance", red.out_instance, "instance output file");
    reduce_cmd->add_option("--out-map", red.out_map, "reduction map output file");
    reduce_cmd->add_option("--format", red.format)->check(CLI::IsMember({"json", "text"}));

    // consumer
    auto* consumer_cmd = app.add_subcommand("consumer", "evaluate the follower's best response");
    struct {
        std::string instance, pricing, format = "json";
    } con;
    consumer_cmd->add_option("--instance", con.instance, "instance JSON")->required();
    consumer_cmd->add_option("--pricing", con.pricing, "pricing JSON")->required();
    consumer_cmd->add_option("--format", con.format)->check(CLI::IsMember({"json", "text"}));

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "run a pricing solver");
    struct {
        std::string instance, alg, q = "1", format = "json";
        std::uint64_t max_paths = 10000;
    } sol;
    solve_cmd->add_option("--instance", sol.instance, "instance JSON")->required();
    solve_cmd->add_option("--alg", sol.alg, "exact | single-price | uniform")
        ->required()
        ->check(CLI::IsMember({"exact", "single-price", "uniform"}));
    solve_cmd->add_option("--q", sol.q, "uniform price (rational, e.g. 3/2)");
    solve_cmd->add_option("--max-paths", sol.max_paths, "simple path cap for the exact solver");
    solve_cmd->add_option("--format", sol.format)->check(CLI::IsMember({"json", "text"}));

    // extract
    auto* extract_cmd =
        app.add_subcommand("extract", "decompose a pricing and read off an assignment");
    struct {
        std::string instance, map, pricing, lc, format = "json";
    } ext;
    extract_cmd->add_option("--instance", ext.instance, "instance JSON")->required();
    extract_cmd->add_option("--map", ext.map, "reduction map JSON")->required();
    extract_cmd->add_option("--pricing", ext.pricing, "pricing JSON")->required();
    extract_cmd->add_option("--lc", ext.lc, "label cover JSON")->required();
    extract_cmd->add_option("--format", ext.format)->check(CLI::IsMember({"json", "text"}));

    // gap
    auto* gap_cmd = app.add_subcommand("gap", "full audit: solvers, extraction, bound checks");
    struct {
        std::string lc, out, format = "json";
        int samples = 0;
        std::uint64_t seed = 0;
    } gap;
    gap_cmd->add_option("--lc", gap.lc, "label cover JSON")->required();
    gap_cmd->add_option("--samples", gap.samples, "random pricings to audit");
    gap_cmd->add_option("--seed", gap.seed, "64-bit seed for the pricing sampler");
    gap_cmd->add_option("--out", gap.out, "report output file (stdout when omitted)");
    gap_cmd->add_option("--format", gap.format)->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*lc_gen) {
            stacksp::PlantedParams params;
            params.left_count = gen.left;
            params.right_count = gen.right;
            params.label_count = gen.labels;
            params.edge_count = gen.edges;
            params.decoys_per_edge = gen.decoys;
            params.corrupt_fraction = gen.corrupt;
            const stacksp::PlantedInstance planted = stacksp::generate_planted(params, gen.seed);
            Json j = stacksp::labelcover_to_json(planted.lc);
            j["planted"] = stacksp::assignment_to_json(planted.planted);
            std::string text = "label cover: left=" + std::to_string(planted.lc.left_count) +
                               " right=" + std::to_string(planted.lc.right_count) +
                               " k=" + std::to_string(planted.lc.label_count) +
                               " m=" + std::to_string(planted.lc.edges.size()) + "\n";
            emit(gen.out, gen.format, j, text);
            return 0;
        }
        if (*reduce_cmd) {
            const stacksp::LabelCoverInstance lc = stacksp::labelcover_from_json(read_json_file(red.in));
            const auto [inst, map] = stacksp::reduce(lc);
            const Json ji = stacksp::instance_to_json(inst);
            const Json jm = stacksp::reduction_map_to_json(map);
            const std::string text =
                "instance: nodes=" + std::to_string(inst.node_count) +
                " edges=" + std::to_string(inst.edges.size()) +
                " s=" + std::to_string(inst.source) + " t=" + std::to_string(inst.sink) +
                "\nmap: gadgets=" + std::to_string(map.gadgets.size()) +
                " shortcuts=" + std::to_string(map.shortcuts.size()) + "\n";
            if (red.out_instance.empty() && red.out_map.empty()) {
                Json both;
                both["instance"] = ji;
                both["map"] = jm;
                emit("", red.format, both, text);
            } else {
                if (!red.out_instance.empty())
                    write_output(red.out_instance, ji.dump(2) + "\n");
                if (!red.out_map.empty()) write_output(red.out_map, jm.dump(2) + "\n");
                if (red.format == "text") std::cout << text;
            }
            return 0;
        }
        if (*consumer_cmd) {
            const stacksp::StackInstance inst =
                stacksp::instance_from_json(read_json_file(con.instance));
            const stacksp::Pricing pricing =
                stacksp::pricing_from_json(read_json_file(con.pricing));
            const stacksp::PurchaseResult r = stacksp::consumer_best_response(inst, pricing);
            emit("", con.format, stacksp::purchase_to_json(r), render_purchase_text(r));
            return 0;
        }
        if (*solve_cmd) {
            const stacksp::StackInstance inst =
                stacksp::instance_from_json(read_json_file(sol.instance));
            stacksp::SolverResult result;
            Json j;
            if (sol.alg == "exact") {
                stacksp::ExactLimits limits;
                limits.max_paths = sol.max_paths;
                result = stacksp::exact_optimal_pricing(inst, limits);
                j = stacksp::solver_result_to_json(result);
            } else if (sol.alg == "single-price") {
                const stacksp::SinglePriceResult sp = stacksp::best_single_price(inst);
                result = sp.result;
                j = stacksp::solver_result_to_json(result);
                j["price"] = stacksp::rational_to_json(sp.price);
            } else {
                const Rat q = stacksp::parse_rational(sol.q);
                result = stacksp::uniform_pricing(inst, q);
                j = stacksp::solver_result_to_json(result);
            }
            emit("", sol.format, j, render_solver_text(result));
            return 0;
        }
        if (*extract_cmd) {
            const stacksp::StackInstance inst =
                stacksp::instance_from_json(read_json_file(ext.instance));
            const stacksp::ReductionMap map =
                stacksp::reduction_map_from_json(read_json_file(ext.map));
            const stacksp::LabelCoverInstance lc =
                stacksp::labelcover_from_json(read_json_file(ext.lc));
            const stacksp::Pricing pricing =
                stacksp::pricing_from_json(read_json_file(ext.pricing));
            const stacksp::IslandDiagnostics diag =
                stacksp::island_diagnostics_collect(inst, map, pricing);
            const stacksp::Assignment a =
                stacksp::extract_assignment(lc, map, diag.decomposition);
            const int satisfied = stacksp::satisfied_count(lc, a);
            Json j;
            j["assignment"] = stacksp::assignment_to_json(a);
            j["satisfied"] = satisfied;
            j["diagnostics"] = stacksp::diagnostics_to_json(diag);
            std::string text = "satisfied=" + std::to_string(satisfied) +
                               " significant=" + std::to_string(diag.significant_count) +
                               " revenue=" + stacksp::format_rational(diag.revenue) + "\n";
            for (const stacksp::DiagnosticsViolation& v : diag.violations)
                text += "violation at position " + std::to_string(v.position) + ": " + v.what + "\n";
            emit("", ext.format, j, text);
            return diag.clean() ? 0 : 1;
        }
        if (*gap_cmd) {
            const stacksp::LabelCoverInstance lc =
                stacksp::labelcover_from_json(read_json_file(gap.lc));
            const stacksp::GapLimits limits;
            const stacksp::GapReport report =
                stacksp::run_gap_experiment(lc, limits, gap.samples, gap.seed);
            emit(gap.out, gap.format, stacksp::gap_report_to_json(report),
                 stacksp::render_gap_text(report));
            return report.all_pass() ? 0 : 1;
        }
    } catch (const stacksp::TooLargeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const stacksp::InequalityViolatedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
