// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Tolerances and frozen constants are
// pinned below, next to the criterion that uses them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "truss/analysis.hpp"
#include "truss/bottomup.hpp"
#include "truss/external.hpp"
#include "truss/graph.hpp"
#include "truss/inmem.hpp"
#include "truss/run.hpp"
#include "truss/support.hpp"
#include "truss/topdown.hpp"

using namespace truss;

namespace {

// --- pinned tolerances -------------------------------------------------
constexpr double kFixtureSeconds = 1.0;   // criterion 1: golden runs
constexpr double kCorpusSeconds = 120.0;  // criterion 4: oracle sweep
constexpr double kHubSeconds = 30.0;      // criterion 7: probe comparison
constexpr double kProbeFactor = 10.0;     // criterion 7: probes <= 10*m^1.5
// Criterion 8: full-scan-equivalents <= kScanConstant * (|G|/M + k_max)
// for every budgeted bottom-up run. Recorded at the first green run and
// regression-tested since; the largest observed ratio is printed. The
// corpus-wide worst case measured at recording time was 6.736 (the counts
// are deterministic, so the margin only guards future code changes).
constexpr double kScanConstant = 8.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s criterion-%d %s\n", ok ? "PASS" : "FAIL", criterion,
                detail.c_str());
    std::fflush(stdout);
    return ok;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// --- fixture golden classes -------------------------------------------
std::vector<Edge> golden_phi2() { return {Edge(8, 10)}; }

std::vector<Edge> golden_phi3() {
    return {Edge(3, 6),  Edge(3, 10), Edge(3, 11), Edge(4, 5), Edge(4, 6),
            Edge(5, 6),  Edge(6, 7),  Edge(6, 10), Edge(6, 11)};
}

std::vector<Edge> golden_phi4() {
    return {Edge(5, 7), Edge(5, 8), Edge(5, 9), Edge(7, 8), Edge(7, 9),
            Edge(8, 9)};
}

std::vector<Edge> golden_phi5() {
    std::vector<Edge> out;
    for (VertexId u = 0; u < 5; ++u)
        for (VertexId v = u + 1; v < 5; ++v) out.emplace_back(u, v);
    return out;
}

TrussLabeling golden_labeling() {
    TrussLabeling l;
    for (const Edge& e : golden_phi2()) l.phi[e] = 2;
    for (const Edge& e : golden_phi3()) l.phi[e] = 3;
    for (const Edge& e : golden_phi4()) l.phi[e] = 4;
    for (const Edge& e : golden_phi5()) l.phi[e] = 5;
    l.k_max = 5;
    return l;
}

// --- corpus ------------------------------------------------------------
struct CorpusGraph {
    std::string name;
    Graph g;
};

std::vector<CorpusGraph> make_corpus() {
    std::vector<CorpusGraph> corpus;
    corpus.reserve(220);
    for (int i = 0; i < 200; ++i) {
        std::size_t n = 10 + (static_cast<std::size_t>(i) * 53) % 91;
        double p = 0.05 + 0.45 * static_cast<double>((i * 97) % 200) / 199.0;
        std::ostringstream name;
        name << "er-" << n << "-" << fmt(p) << "-s" << (1000 + i);
        corpus.push_back({name.str(),
                          generate_erdos_renyi(n, p, 1000 + i)});
    }
    for (int j = 0; j < 20; ++j) {
        double expo = 2.1 + 0.04 * j;
        std::ostringstream name;
        name << "pl-200-" << fmt(expo) << "-s" << (7000 + j);
        corpus.push_back({name.str(),
                          generate_power_law(200, expo, 7000 + j)});
    }
    return corpus;
}

std::size_t max_degree(const Graph& g) {
    std::size_t d = 0;
    for (VertexId v : g.vertices()) d = std::max(d, g.degree(v));
    return d;
}

// Budgets |G|, |G|/2, |G|/4, |G|/8 filtered to per-vertex feasibility
// (every closed neighborhood must fit: M >= 2*maxdeg+1), deduplicated,
// descending.
std::vector<std::size_t> tested_budgets(const Graph& g) {
    std::size_t floor_m = std::max<std::size_t>(2 * max_degree(g) + 1, 2);
    std::set<std::size_t, std::greater<std::size_t>> budgets;
    for (std::size_t div : {1u, 2u, 4u, 8u}) {
        std::size_t m = g.size() / div;
        if (m >= floor_m) budgets.insert(m);
    }
    if (budgets.empty()) budgets.insert(std::max(g.size(), floor_m));
    return {budgets.begin(), budgets.end()};
}

MemoryBudget make_budget(std::size_t m) {
    return MemoryBudget(m, std::max<std::size_t>(1, std::min<std::size_t>(
                                                        4, m / 2)));
}

std::string labeling_bytes(const TrussLabeling& l) {
    std::ostringstream out;
    save_labeling(out, l);
    return out.str();
}

// Results of the budget sweep shared by criteria 5, 6 and 8.
struct SweepOutcome {
    std::size_t diff_count = 0;       // criterion 6
    std::size_t bound_violations = 0; // criterion 5
    std::size_t bound_checks = 0;
    double max_scan_ratio = 0.0;      // criterion 8
    std::string worst_case;
    std::size_t runs = 0;
};

SweepOutcome budget_sweep(const std::vector<CorpusGraph>& corpus) {
    SweepOutcome out;
    for (const CorpusGraph& cg : corpus) {
        const Graph& g = cg.g;
        TrussLabeling reference = decompose_improved(g);
        SupportMap sup = compute_support(g);
        std::string reference_bytes = labeling_bytes(reference);
        for (std::size_t m : tested_budgets(g)) {
            MemoryBudget budget = make_budget(m);

            ScanCounter counter;
            StoreEnv env{&counter, ""};
            TrussLabeling up = decompose_bottomup(g, budget, env);
            ++out.runs;
            if (labeling_bytes(up) != reference_bytes) ++out.diff_count;
            if (g.m() > 0 && up.k_max >= 2) {
                double fse = static_cast<double>(counter.records_read) /
                             static_cast<double>(g.size());
                double allowance =
                    static_cast<double>(g.size()) / static_cast<double>(m) +
                    up.k_max;
                double ratio = fse / allowance;
                if (ratio > out.max_scan_ratio) {
                    out.max_scan_ratio = ratio;
                    out.worst_case = cg.name + "@M=" + std::to_string(m);
                }
            }

            TrussLabeling down = decompose_topdown(g, -1, budget);
            if (labeling_bytes(down) != reference_bytes) ++out.diff_count;

            // Bound lemmas under this budget.
            ScanCounter c2;
            StoreEnv env2{&c2, ""};
            auto low = lower_bounding(g, budget, env2);
            for (const Edge& e : low.phi2) {
                ++out.bound_checks;
                if (reference.at(e) != 2) ++out.bound_violations;
            }
            for (const StoreRecord& r : low.g_new.snapshot()) {
                ++out.bound_checks;
                if (!r.lb || *r.lb < 2 || *r.lb > reference.at(r.e))
                    ++out.bound_violations;
            }
            auto stage1 = lower_bounding(g, budget, env2, nullptr, true);
            UpperBoundMap ub = upper_bounding(stage1.g_new, budget);
            for (const auto& [e, psi] : ub.psi) {
                ++out.bound_checks;
                if (psi < reference.at(e) || psi > sup.at(e) + 2)
                    ++out.bound_violations;
            }
        }
    }
    return out;
}

// --- subprocess helper for the CLI-level criteria ----------------------
struct Scratch {
    std::filesystem::path dir;

    Scratch() {
        dir = std::filesystem::temp_directory_path() /
              ("truss-acceptance-" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir);
    }
    ~Scratch() { std::filesystem::remove_all(dir); }

    std::string path(const std::string& name) const {
        return (dir / name).string();
    }

    int run(const std::string& args) const {
        std::string cmd = std::string(TRUSS_CLI_PATH) + " " + args + " > " +
                          path("stdout.txt") + " 2> " + path("stderr.txt");
        int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Compares two run directories file by file; returns a description of the
// first difference, or "" when identical.
std::string compare_dirs(const std::filesystem::path& a,
                         const std::filesystem::path& b) {
    std::map<std::string, std::filesystem::path> fa, fb;
    for (const auto& e : std::filesystem::directory_iterator(a))
        fa[e.path().filename().string()] = e.path();
    for (const auto& e : std::filesystem::directory_iterator(b))
        fb[e.path().filename().string()] = e.path();
    if (fa.size() != fb.size()) return "different file lists";
    for (const auto& [name, pa] : fa) {
        auto it = fb.find(name);
        if (it == fb.end()) return name + " missing from rerun";
        if (slurp(pa) != slurp(it->second)) return name + " differs";
    }
    return "";
}

// --- criteria ----------------------------------------------------------

bool criterion1() {
    auto start = Clock::now();
    Graph g = fig2_graph();
    TrussLabeling golden = golden_labeling();

    bool parts_forced =
        partition_vertices(g, make_budget(31)).size() >= 3;

    bool ok = parts_forced;
    ok = ok && decompose_baseline(g) == golden;
    ok = ok && decompose_improved(g) == golden;
    ok = ok && decompose_bottomup(g, make_budget(31)) == golden;
    ok = ok && decompose_topdown(g, 4, make_budget(g.size())) == golden;
    double secs = seconds_since(start);
    ok = ok && secs < kFixtureSeconds;
    return report(1, ok,
                  "fixture golden classes, 4 algorithms (" + fmt(secs) +
                      " s, budget 31 splits the sweep into >=3 parts: " +
                      (parts_forced ? "yes" : "no") + ")");
}

bool criterion2() {
    Graph g = fig2_graph();
    bool ok = compute_support(g).at(Edge(3, 6)) == 3;

    ScanCounter c;
    StoreEnv env{&c, ""};
    MemoryBudget budget = make_budget(g.size());
    auto stage1 = lower_bounding(g, budget, env, nullptr, true);
    UpperBoundMap ub = upper_bounding(stage1.g_new, budget);
    ok = ok && ub.at(Edge(3, 6)) == 4;
    for (const Edge& e : golden_phi5()) ok = ok && ub.at(e) == 5;
    return report(2, ok, "support 3 and bound 4 on (3,6); bound 5 on all ten "
                         "5-clique edges");
}

bool criterion3() {
    Graph g = fig2_graph();
    std::vector<Edge> phi5 = golden_phi5();
    std::vector<Edge> phi4 = golden_phi4();

    bool saw5 = false, saw4 = false;
    bool ok5 = false, ok4 = false;
    StoreObserver obs = [&](int k, const ExternalStore& store) {
        std::vector<Edge> kept5, kept4;
        for (const StoreRecord& r : store.snapshot()) {
            if (std::binary_search(phi5.begin(), phi5.end(), r.e))
                kept5.push_back(r.e);
            if (std::binary_search(phi4.begin(), phi4.end(), r.e))
                kept4.push_back(r.e);
        }
        if (k == 5) {
            saw5 = true;
            ok5 = kept5 == std::vector<Edge>{Edge(3, 4)};
        }
        if (k == 4) {
            saw4 = true;
            ok4 = kept4 == std::vector<Edge>{Edge(5, 7)};
        }
    };
    ScanCounter c;
    StoreEnv env{&c, ""};
    decompose_topdown(g, 2, make_budget(g.size()), env, false, obs);
    bool ok = saw5 && ok5 && saw4 && ok4;
    return report(3, ok, "after pruning, (3,4) is the only stored 5-class "
                         "edge and (5,7) the only stored 4-class edge");
}

bool criterion4(const std::vector<CorpusGraph>& corpus) {
    auto start = Clock::now();
    std::size_t mismatches = 0;
    for (const CorpusGraph& cg : corpus) {
        TrussLabeling want = oracle_decompose(cg.g);
        MemoryBudget budget = make_budget(std::max(cg.g.size(),
                                                   std::size_t{2}));
        if (decompose_baseline(cg.g) != want) ++mismatches;
        if (decompose_improved(cg.g) != want) ++mismatches;
        if (decompose_bottomup(cg.g, budget) != want) ++mismatches;
        if (decompose_topdown(cg.g, -1, budget) != want) ++mismatches;
    }
    double secs = seconds_since(start);
    bool ok = mismatches == 0 && secs < kCorpusSeconds;
    return report(4, ok,
                  "oracle equivalence on " + std::to_string(corpus.size()) +
                      " corpus graphs x 4 algorithms, " +
                      std::to_string(mismatches) + " mismatches (" +
                      fmt(secs) + " s)");
}

bool criterion5(const SweepOutcome& sweep) {
    bool ok = sweep.bound_violations == 0 && sweep.bound_checks > 0;
    return report(5, ok,
                  "lower <= truss <= upper bound on " +
                      std::to_string(sweep.bound_checks) + " edge checks, " +
                      std::to_string(sweep.bound_violations) + " violations");
}

bool criterion6(const SweepOutcome& sweep) {
    bool ok = sweep.diff_count == 0 && sweep.runs > 0;
    return report(6, ok,
                  "byte-identical labelings across " +
                      std::to_string(sweep.runs) +
                      " budgeted runs per direction, " +
                      std::to_string(sweep.diff_count) + " diffs");
}

bool criterion7() {
    auto start = Clock::now();
    Graph g = generate_hub_graph(2000, 10000, 424242);
    ProbeCount base = 0, impr = 0;
    TrussLabeling lb = decompose_baseline(g, &base);
    TrussLabeling li = decompose_improved(g, &impr);
    double m = static_cast<double>(g.m());
    double cap = kProbeFactor * std::pow(m, 1.5);
    double secs = seconds_since(start);
    bool ok = lb == li && static_cast<double>(impr) <= cap && impr < base &&
              secs < kHubSeconds;
    std::ostringstream detail;
    detail << "hub graph probes: improved " << impr << " <= cap "
           << static_cast<std::uint64_t>(cap) << " and < baseline " << base
           << " (" << fmt(secs) << " s)";
    return report(7, ok, detail.str());
}

bool criterion8(const SweepOutcome& sweep) {
    bool ok = sweep.max_scan_ratio <= kScanConstant &&
              sweep.max_scan_ratio > 0.0;
    return report(8, ok,
                  "scan bound: worst full-scan-equivalents ratio " +
                      fmt(sweep.max_scan_ratio) + " (at " + sweep.worst_case +
                      ") <= frozen constant " + fmt(kScanConstant));
}

bool criterion9(const std::vector<CorpusGraph>& corpus) {
    std::size_t violations = 0;
    for (const CorpusGraph& cg : corpus)
        if (!truss_vs_core_report(cg.g).containment_ok) ++violations;

    bool cliques_ok = true;
    for (std::size_t n = 3; n <= 8; ++n) {
        Graph k = generate_clique(n);
        cliques_ok = cliques_ok &&
                     decompose_improved(k).k_max == static_cast<int>(n) &&
                     core_decompose(k).c_max == static_cast<int>(n) - 1;
    }

    Graph fix = fig2_graph();
    TrussLabeling l = decompose_improved(fix);
    double cc = clustering_coefficient(truss_subgraph(fix, l, l.k_max));
    bool cc_ok = cc == 1.0; // exact by construction: the top truss is a clique

    bool ok = violations == 0 && cliques_ok && cc_ok;
    return report(9, ok,
                  "containment on " + std::to_string(corpus.size()) +
                      " graphs (" + std::to_string(violations) +
                      " violations), clique truss/core numbers, top-truss "
                      "clustering coefficient " +
                      fmt(cc));
}

bool criterion10() {
    Scratch ws;
    bool ok = ws.run("gen fig2 --out " + ws.path("fig2.edges")) == 0;
    ok = ok && ws.run("gen er 30 0.25 --seed 9 --out " + ws.path("er.edges")) ==
                   0;

    struct Config {
        std::string name;
        std::string args;
    };
    std::vector<Config> configs{
        {"bottomup-fixture",
         "decompose " + ws.path("fig2.edges") +
             " --algo bottomup --memory 31 --block 4"},
        {"topdown-er",
         "decompose " + ws.path("er.edges") + " --algo topdown --all"},
        {"inmem-fixture", "decompose " + ws.path("fig2.edges")},
    };
    std::string detail = "byte-identical reruns:";
    for (const Config& cfg : configs) {
        std::string a = ws.path(cfg.name + "-a");
        std::string b = ws.path(cfg.name + "-b");
        ok = ok && ws.run(cfg.args + " --out " + a) == 0;
        ok = ok && ws.run(cfg.args + " --out " + b) == 0;
        std::string diff = compare_dirs(a, b);
        if (!diff.empty()) {
            ok = false;
            detail += " " + cfg.name + ": " + diff + ";";
        } else {
            detail += " " + cfg.name + " ok;";
        }
    }
    return report(10, ok, detail);
}

} // namespace

int main() {
    std::vector<CorpusGraph> corpus = make_corpus();
    SweepOutcome sweep = budget_sweep(corpus);

    bool ok = true;
    ok &= criterion1();
    ok &= criterion2();
    ok &= criterion3();
    ok &= criterion4(corpus);
    ok &= criterion5(sweep);
    ok &= criterion6(sweep);
    ok &= criterion7();
    ok &= criterion8(sweep);
    ok &= criterion9(corpus);
    ok &= criterion10();
    std::printf("%s\n", ok ? "ALL CRITERIA PASS" : "ACCEPTANCE FAILURES");
    return ok ? 0 : 1;
}
