#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "truss/graph.hpp"

namespace truss {

// Abstract memory budget: M is the largest graph object (measured in edges
// plus vertices) the algorithms may hold in memory at once; B is the block
// size in records, so one full pass over N records costs N/B block reads.
struct MemoryBudget {
    std::size_t M;
    std::size_t B;

    MemoryBudget(std::size_t m, std::size_t b);
};

// Monotone I/O counters shared by every store in a run.
struct ScanCounter {
    std::uint64_t records_read = 0;
    std::uint64_t records_written = 0;
    std::uint64_t full_scans = 0;
};

// One on-disk edge record: "u v", optionally annotated with a support value
// ("s=") and/or a truss-number lower bound ("lb=").
struct StoreRecord {
    Edge e;
    std::optional<int> sup;
    std::optional<int> lb;

    StoreRecord() : e(0, 1) {}
    explicit StoreRecord(Edge ed) : e(ed) {}
    StoreRecord(Edge ed, std::optional<int> s, std::optional<int> l)
        : e(ed), sup(s), lb(l) {}
};

std::string format_record(const StoreRecord& r);
StoreRecord parse_record(const std::string& line, std::size_t lineno);

// Sequential edge store. The only data paths are full-pass scan, append and
// rewrite; each charges the shared ScanCounter the same way whether the
// backing is a file or an in-memory vector.
class ExternalStore {
public:
    static ExternalStore in_memory(ScanCounter* counter);
    static ExternalStore file_backed(const std::string& path,
                                     ScanCounter* counter);

    std::size_t record_count() const { return count_; }
    bool empty() const { return count_ == 0; }
    const std::string& path() const { return path_; }

    // Loads initial content without charging the counter: the input is
    // assumed to already sit on disk when a run starts.
    void preload(const std::vector<StoreRecord>& records);

    // One full pass; charges record_count reads and one full scan.
    void scan(const std::function<void(const StoreRecord&)>& fn) const;

    // Appends records, charging one write each.
    void append(const std::vector<StoreRecord>& records);

    // One read pass plus one write pass of the kept records. `fn` returns
    // the (possibly updated) record to keep, or nullopt to drop it.
    // Returns the number of records kept.
    std::size_t rewrite(
        const std::function<std::optional<StoreRecord>(const StoreRecord&)>& fn);

    // Uncharged copy of the records, for tests, observers and checksums
    // only — instrumentation, not part of any algorithm's I/O.
    std::vector<StoreRecord> snapshot() const;

private:
    ExternalStore() = default;

    bool file_ = false;
    std::string path_;
    ScanCounter* counter_ = nullptr;
    std::size_t count_ = 0;
    std::vector<StoreRecord> mem_;

    std::vector<StoreRecord> read_all() const;
    void write_all(const std::vector<StoreRecord>& records);
};

// Neighborhood subgraph NS(U): every edge with at least one endpoint in U,
// split into internal edges (both endpoints in U) and external edges
// (exactly one). For internal edges the full neighbor lists of both
// endpoints are present.
struct NeighborhoodSubgraph {
    std::vector<VertexId> internal_vertices;      // sorted
    std::unordered_set<VertexId> internal_set;
    Graph graph;
    std::vector<Edge> internal_edges;             // canonical order
    std::vector<Edge> external_edges;             // canonical order
    std::vector<StoreRecord> records;             // canonical order
    bool overflow = false;                        // size() > budget M

    std::size_t size() const { return graph.m() + graph.n(); }
    bool is_internal(VertexId v) const { return internal_set.count(v) != 0; }
    bool is_internal(const Edge& e) const {
        return is_internal(e.u) && is_internal(e.v);
    }
};

// Factory for the stores of one run: file-backed under `dir` when set,
// in-memory otherwise, all charging the same counter.
struct StoreEnv {
    ScanCounter* counter = nullptr;
    std::string dir;

    ExternalStore make(const std::string& name) const;
};

// Greedy ascending-id sweep packing vertices into parts while the part's
// neighborhood-subgraph size (edges incident to the part plus the closure's
// vertex count) stays within M. When the whole graph fits in M a single
// part is returned. `offset` rotates the sweep's starting vertex, which
// retries use to escape repeating cross-part splits. Throws
// budget_infeasible_error naming the vertex when one vertex alone busts M.
std::vector<std::vector<VertexId>> partition_vertices(
    const Graph& g, const MemoryBudget& budget, std::size_t offset = 0);
std::vector<std::vector<VertexId>> partition_vertices(
    const ExternalStore& store, const MemoryBudget& budget,
    std::size_t offset = 0);
// Core sweep over explicit adjacency: partitions `verts` (which may be a
// subset of the adjacency's vertices) using full neighbor lists for the
// size bound.
std::vector<std::vector<VertexId>> partition_vertices(
    const std::map<VertexId, std::vector<VertexId>>& adj,
    const std::vector<VertexId>& verts, std::size_t total_size,
    const MemoryBudget& budget, std::size_t offset = 0);

// NS(U) extraction. The store form selects matching records in one charged
// scan; the graph form is for in-memory callers and charges nothing.
NeighborhoodSubgraph extract_neighborhood(const Graph& g,
                                          const std::vector<VertexId>& U,
                                          const MemoryBudget& budget);
NeighborhoodSubgraph extract_neighborhood(const ExternalStore& store,
                                          const std::vector<VertexId>& U,
                                          const MemoryBudget& budget);

// Routes every record that passes `keep` (nullptr keeps all) to each part
// containing one of its endpoints. Costs one scan of the store plus a
// write-and-read round trip of the routed records through per-part bucket
// stores, the same traffic a disk implementation pays to split a pass's
// input into per-part files; a record shared by two parts lands in both.
// Parts must be disjoint.
std::vector<std::vector<StoreRecord>> scatter_records(
    const ExternalStore& store, const std::vector<std::vector<VertexId>>& parts,
    const std::function<bool(const StoreRecord&)>& keep, const StoreEnv& env);

// NS extraction for a whole partition at once: one scatter pass instead of
// one scan per part. Each part's subgraph equals what extract_neighborhood
// would return for it.
std::vector<NeighborhoodSubgraph> extract_neighborhoods(
    const ExternalStore& store, const std::vector<std::vector<VertexId>>& parts,
    const MemoryBudget& budget, const StoreEnv& env);

// Disjoint star-shaped parts seeded from the endpoints of `targets`: heavy
// target endpoints seed first and pull in their unassigned target partners
// while the part's neighborhood-subgraph bound (edges incident to the part
// plus the closure's vertex count, degrees taken from `adj`) stays within
// M. Aimed at making target edges internal to some part, unlike the
// id-order sweep which only co-locates id-adjacent pairs. `offset` rotates
// the seeding order between retries. Throws budget_infeasible_error when a
// single target endpoint busts M.
std::vector<std::vector<VertexId>> partition_covering(
    const std::map<VertexId, std::vector<VertexId>>& adj,
    const std::vector<Edge>& targets, const MemoryBudget& budget,
    std::size_t offset = 0);

// Removes a set of edges from the store. The drop set is processed in
// chunks of at most M edges, one read+write pass per chunk, so even an
// over-budget drop set never needs more than M in memory at once.
void rewrite_filtered(ExternalStore& store, const std::vector<Edge>& drop,
                      const MemoryBudget& budget);

// Scan totals normalized against the original graph: full-scan-equivalents
// is records_read divided by the input edge count, the unit used by the
// m/M + k_max cost bound.
struct ScanReport {
    std::uint64_t records_read = 0;
    std::uint64_t records_written = 0;
    std::uint64_t full_scans = 0;
    double full_scan_equivalents = 0.0;
    double m_over_m_budget = 0.0;  // edge count / M
    std::size_t graph_size = 0;
    std::size_t budget_m = 0;
    std::size_t budget_b = 0;

    std::string to_text() const;
};

ScanReport scan_report(const ScanCounter& c, std::size_t graph_size,
                       const MemoryBudget& budget);

} // namespace truss
