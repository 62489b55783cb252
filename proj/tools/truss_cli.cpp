#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "truss/analysis.hpp"
#include "truss/errors.hpp"
#include "truss/graph.hpp"
#include "truss/inmem.hpp"
#include "truss/run.hpp"

namespace {

truss::GraphFormat parse_format(const std::string& name) {
    if (name == "edge-list") return truss::GraphFormat::edge_list;
    if (name == "adjacency-list") return truss::GraphFormat::adjacency_list;
    throw truss::argument_error("unknown format " + name);
}

int cmd_decompose(const truss::RunConfig& cfg) {
    truss::RunResult res = truss::run_decompose(cfg);
    auto by_k = truss::classes(res.labeling);
    std::cout << "k_max=" << res.labeling.k_max << '\n';
    std::cout << "classes=" << by_k.size() << '\n';
    std::cout << "edges_labeled=" << res.labeling.phi.size() << '\n';
    std::cout << "out=" << res.out_dir << '\n';
    return 0;
}

int cmd_verify(const std::string& graph_path, const std::string& label_path,
               truss::GraphFormat format) {
    truss::Graph g = truss::load_graph_file(graph_path, format);
    truss::TrussLabeling l = truss::load_labeling_file(label_path);
    std::vector<truss::Edge> labeled;
    labeled.reserve(l.phi.size());
    for (const auto& [e, p] : l.phi) labeled.push_back(e);
    if (labeled != g.edges()) {
        std::cerr << "error: labeling and graph cover different edge sets\n";
        return 2;
    }
    truss::VerifyReport rep = truss::verify_labeling(g, l);
    std::cout << rep.to_text();
    return rep.ok ? 0 : 1;
}

int cmd_stats(const std::string& graph_path, truss::GraphFormat format) {
    truss::Graph g = truss::load_graph_file(graph_path, format);
    std::cout << truss::truss_vs_core_report(g).to_text();
    return 0;
}

unsigned long arg_num(const std::vector<std::string>& params, std::size_t i,
                      const std::string& what) {
    if (i >= params.size())
        throw truss::argument_error("missing " + what + " parameter");
    try {
        return std::stoul(params[i]);
    } catch (const std::exception&) {
        throw truss::argument_error("bad " + what + ": " + params[i]);
    }
}

double arg_real(const std::vector<std::string>& params, std::size_t i,
                const std::string& what) {
    if (i >= params.size())
        throw truss::argument_error("missing " + what + " parameter");
    try {
        return std::stod(params[i]);
    } catch (const std::exception&) {
        throw truss::argument_error("bad " + what + ": " + params[i]);
    }
}

int cmd_gen(const std::string& kind, const std::vector<std::string>& params,
            std::uint64_t seed, const std::string& out_path) {
    truss::Graph g;
    if (kind == "fig2") {
        g = truss::fig2_graph();
    } else if (kind == "clique") {
        g = truss::generate_clique(arg_num(params, 0, "size"));
    } else if (kind == "er") {
        g = truss::generate_erdos_renyi(arg_num(params, 0, "vertex count"),
                                        arg_real(params, 1, "edge probability"),
                                        seed);
    } else if (kind == "pl") {
        g = truss::generate_power_law(arg_num(params, 0, "vertex count"),
                                      arg_real(params, 1, "exponent"), seed);
    } else if (kind == "hub") {
        g = truss::generate_hub_graph(arg_num(params, 0, "hub degree"),
                                      arg_num(params, 1, "extra edges"), seed);
    } else {
        throw truss::argument_error("unknown generator " + kind);
    }
    if (out_path.empty()) {
        truss::save_graph(std::cout, g, truss::GraphFormat::edge_list);
    } else {
        truss::save_graph_file(out_path, g, truss::GraphFormat::edge_list);
        std::cout << "wrote " << g.m() << " edges to " << out_path << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-truss decomposition toolkit"};
    app.require_subcommand(1);

    std::string input;
    std::string format = "edge-list";
    std::string algo = "inmem";
    std::string out_dir;
    std::size_t memory = 0;
    std::size_t block = 0;
    int t = 0;
    bool all = false;
    bool no_kinit = false;
    std::uint64_t seed = 0;

    CLI::App* dec = app.add_subcommand(
        "decompose", "Compute truss numbers and write run artifacts");
    dec->add_option("input", input, "graph file")->required();
    dec->add_option("--format", format, "edge-list or adjacency-list")
        ->check(CLI::IsMember({"edge-list", "adjacency-list"}));
    dec->add_option("--algo", algo, "decomposition algorithm")
        ->check(CLI::IsMember(
            {"inmem-baseline", "inmem", "bottomup", "topdown"}));
    dec->add_option("--memory", memory, "memory budget M in edge+vertex units");
    dec->add_option("--block", block, "block size B in records");
    CLI::Option* topt =
        dec->add_option("--t", t, "top-down: number of top classes");
    dec->add_flag("--all", all, "top-down: compute every class");
    dec->add_option("--seed", seed, "echoed into the manifest");
    dec->add_option("--out", out_dir, "output directory");
    dec->add_flag("--no-kinit", no_kinit,
                  "top-down: disable the in-memory head start");

    std::string v_graph;
    std::string v_label;
    CLI::App* ver = app.add_subcommand(
        "verify", "Check a labeling against its graph");
    ver->add_option("graph", v_graph, "graph file")->required();
    ver->add_option("labeling", v_label, "labeling file")->required();
    ver->add_option("--format", format, "edge-list or adjacency-list")
        ->check(CLI::IsMember({"edge-list", "adjacency-list"}));

    std::string s_graph;
    CLI::App* sta =
        app.add_subcommand("stats", "Top-truss versus top-core report");
    sta->add_option("graph", s_graph, "graph file")->required();
    sta->add_option("--format", format, "edge-list or adjacency-list")
        ->check(CLI::IsMember({"edge-list", "adjacency-list"}));

    std::string g_kind;
    std::vector<std::string> g_params;
    std::string g_out;
    CLI::App* gen = app.add_subcommand("gen", "Write a generated graph");
    gen->add_option("kind", g_kind, "fig2 | clique | er | pl | hub")
        ->required();
    gen->add_option("params", g_params, "generator parameters");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--out", g_out, "output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dec->parsed()) {
            truss::RunConfig cfg;
            cfg.input = input;
            cfg.format = parse_format(format);
            auto a = truss::algo_from_name(algo);
            if (!a) throw truss::argument_error("unknown algorithm " + algo);
            cfg.algo = *a;
            if (cfg.algo == truss::Algo::topdown) {
                if (!all && topt->count() == 0)
                    throw truss::argument_error(
                        "topdown needs --t <n> or --all");
                if (all && topt->count() > 0)
                    throw truss::argument_error("--t and --all conflict");
                if (!all && t < 1)
                    throw truss::argument_error("--t must be at least 1");
                cfg.t = all ? -1 : t;
            } else if (topt->count() > 0 || all) {
                throw truss::argument_error(
                    "--t/--all apply to the topdown algorithm only");
            }
            cfg.memory = memory;
            cfg.block = block;
            cfg.seed = seed;
            cfg.out_dir = out_dir;
            cfg.use_kinit = !no_kinit;
            return cmd_decompose(cfg);
        }
        if (ver->parsed())
            return cmd_verify(v_graph, v_label, parse_format(format));
        if (sta->parsed()) return cmd_stats(s_graph, parse_format(format));
        if (gen->parsed()) return cmd_gen(g_kind, g_params, seed, g_out);
    } catch (const truss::budget_infeasible_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const truss::limit_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const truss::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
