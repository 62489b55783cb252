#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "truss/external.hpp"
#include "truss/graph.hpp"
#include "truss/inmem.hpp"

namespace truss {

enum class Algo { inmem_baseline, inmem, bottomup, topdown };

std::string algo_name(Algo a);
std::optional<Algo> algo_from_name(const std::string& name);

// Everything a decomposition run needs; identical configs produce
// byte-identical artifacts.
struct RunConfig {
    std::string input;
    GraphFormat format = GraphFormat::edge_list;
    Algo algo = Algo::inmem;
    int t = -1;                  // top-down classes to emit; -1 means all
    std::size_t memory = 0;      // M; 0 defaults to |G| = m + n
    std::size_t block = 0;       // B; 0 defaults to max(1, min(64, M/2))
    std::uint64_t seed = 0;      // echoed into the manifest
    std::string out_dir;         // empty: $TRUSS_OUT_DIR, else ./truss-run
    bool use_kinit = true;
    std::size_t oracle_limit = 300;
};

struct RunResult {
    TrussLabeling labeling;
    std::string out_dir;
    ScanCounter counter;
    std::size_t budget_m = 0;
    std::size_t budget_b = 0;
    bool scan_report_written = false;
};

// Runs the configured decomposition and writes the artifacts into the
// output directory: input.edges (normalized snapshot), labeling.txt,
// phi_<k>.edges per nonempty class, scan_report.txt plus the final
// g_new.current for the store-based algorithms, and manifest.txt echoing
// the config with a checksum per artifact.
RunResult run_decompose(const RunConfig& cfg);

// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::string file_checksum(const std::string& path);

} // namespace truss
