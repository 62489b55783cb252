#include "truss/run.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "truss/bottomup.hpp"
#include "truss/errors.hpp"
#include "truss/topdown.hpp"

namespace truss {

std::string algo_name(Algo a) {
    switch (a) {
    case Algo::inmem_baseline: return "inmem-baseline";
    case Algo::inmem: return "inmem";
    case Algo::bottomup: return "bottomup";
    case Algo::topdown: return "topdown";
    }
    return "unknown";
}

std::optional<Algo> algo_from_name(const std::string& name) {
    if (name == "inmem-baseline") return Algo::inmem_baseline;
    if (name == "inmem") return Algo::inmem;
    if (name == "bottomup") return Algo::bottomup;
    if (name == "topdown") return Algo::topdown;
    return std::nullopt;
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path + " for checksumming");
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

namespace {

std::string resolve_out_dir(const RunConfig& cfg) {
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    if (const char* env = std::getenv("TRUSS_OUT_DIR"); env && *env)
        return env;
    return "./truss-run";
}

void write_class_file(const std::string& path, const std::vector<Edge>& cls) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path);
    for (const Edge& e : cls) out << e.u << ' ' << e.v << '\n';
}

} // namespace

RunResult run_decompose(const RunConfig& cfg) {
    Graph g = load_graph_file(cfg.input, cfg.format);

    RunResult res;
    res.out_dir = resolve_out_dir(cfg);
    std::filesystem::create_directories(res.out_dir);

    std::size_t M = cfg.memory ? cfg.memory : std::max<std::size_t>(g.size(), 2);
    std::size_t B = cfg.block
                        ? cfg.block
                        : std::max<std::size_t>(1, std::min<std::size_t>(64, M / 2));
    MemoryBudget budget(M, B);
    res.budget_m = M;
    res.budget_b = B;

    save_graph_file(res.out_dir + "/input.edges", g, GraphFormat::edge_list);

    switch (cfg.algo) {
    case Algo::inmem_baseline:
        res.labeling = decompose_baseline(g);
        break;
    case Algo::inmem:
        res.labeling = decompose_improved(g);
        break;
    case Algo::bottomup: {
        StoreEnv env{&res.counter, res.out_dir};
        res.labeling = decompose_bottomup(g, budget, env, nullptr);
        res.scan_report_written = true;
        break;
    }
    case Algo::topdown: {
        StoreEnv env{&res.counter, res.out_dir};
        res.labeling = decompose_topdown(g, cfg.t, budget, env, cfg.use_kinit);
        res.scan_report_written = true;
        break;
    }
    }

    save_labeling_file(res.out_dir + "/labeling.txt", res.labeling);

    std::vector<std::string> artifacts{"input.edges", "labeling.txt"};
    for (const auto& [k, cls] : classes(res.labeling)) {
        std::string name = "phi_" + std::to_string(k) + ".edges";
        write_class_file(res.out_dir + "/" + name, cls);
        artifacts.push_back(name);
    }
    if (res.scan_report_written) {
        ScanReport rep = scan_report(res.counter, g.size(), budget);
        std::ofstream out(res.out_dir + "/scan_report.txt", std::ios::binary);
        if (!out) throw error("cannot write scan_report.txt");
        out << rep.to_text();
        out << "k_max=" << res.labeling.k_max << '\n';
        artifacts.push_back("scan_report.txt");
        if (std::filesystem::exists(res.out_dir + "/g_new.current"))
            artifacts.push_back("g_new.current");
    }

    std::sort(artifacts.begin(), artifacts.end());
    std::ofstream man(res.out_dir + "/manifest.txt", std::ios::binary);
    if (!man) throw error("cannot write manifest.txt");
    man << "input=" << cfg.input << '\n';
    man << "format="
        << (cfg.format == GraphFormat::edge_list ? "edge-list"
                                                 : "adjacency-list")
        << '\n';
    man << "algo=" << algo_name(cfg.algo) << '\n';
    man << "t=" << cfg.t << '\n';
    man << "memory=" << M << '\n';
    man << "block=" << B << '\n';
    man << "seed=" << cfg.seed << '\n';
    man << "kinit=" << (cfg.use_kinit ? "on" : "off") << '\n';
    man << "k_max=" << res.labeling.k_max << '\n';
    for (const std::string& name : artifacts)
        man << "checksum " << name << ' '
            << file_checksum(res.out_dir + "/" + name) << '\n';
    return res;
}

} // namespace truss
