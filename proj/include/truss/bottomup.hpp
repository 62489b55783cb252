#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "truss/external.hpp"
#include "truss/inmem.hpp"

namespace truss {

// Optional override for the per-iteration vertex partition of the lower-
// bounding phase. Called with the iteration number (0-based); returning
// nullopt falls back to partition_vertices. Injected partitions must cover
// every current vertex and every part's neighborhood subgraph must fit in M.
using PartitionHook = std::function<std::optional<std::vector<std::vector<VertexId>>>(
    std::size_t iteration)>;

// In-memory cascade peel over `edges`: repeatedly removes an edge that
// satisfies `peelable` and whose current support within the remaining edges
// is at most `max_sup`, until none is left. Edges failing `peelable` count
// toward supports but are never removed. Returns the removed edges in
// canonical order.
std::vector<Edge> peel_edges(const std::vector<Edge>& edges,
                             const std::function<bool(const Edge&)>& peelable,
                             int max_sup);

struct LowerBoundingResult {
    // Edges with truss number exactly 2, canonical order.
    std::vector<Edge> phi2;
    // Every other edge, annotated "lb=" with a truss-number lower bound
    // (or "s=" with its exact original support when record_support is set).
    ExternalStore g_new;
};

// Shrinks the graph part by part. Each iteration partitions the current
// vertices, locally decomposes every part's neighborhood subgraph, moves the
// internal edges to g_new and rewrites the store once. Each store record's
// "s=" field carries a credit: the number of the edge's original triangles
// whose internal edge already moved to g_new. Credit plus current local
// support is the edge's exact original support, which keeps the phi=2 test
// ("support 0") and the recorded supports exact. With record_support the
// lower-bound bookkeeping is skipped and g_new records carry "s=" instead.
LowerBoundingResult lower_bounding(const Graph& g, const MemoryBudget& budget,
                                   const StoreEnv& env,
                                   const PartitionHook& hook = nullptr,
                                   bool record_support = false);

// Endpoints of every store edge with lb <= k, sorted. The second form also
// reports the smallest lb among the remaining edges (-1 when none), which
// lets the driver skip k values whose candidate set is empty.
std::vector<VertexId> candidate_vertices_bottomup(const ExternalStore& store,
                                                  int k);
std::vector<VertexId> candidate_vertices_bottomup(const ExternalStore& store,
                                                  int k, int* min_lb_beyond);

// Peels H's internal edges with support <= k-2 to a fixpoint, removes them
// from the store in one batch and returns them (the k-class) in canonical
// order. External edges are counted in supports but never removed.
std::vector<Edge> bottomup_class(const NeighborhoodSubgraph& h, int k,
                                 ExternalStore& store,
                                 const MemoryBudget& budget);

// Same class when NS(U_k) exceeds M: materializes H to its own store,
// repeatedly partitions the untested vertices and peels each part's
// neighborhood of H, which itself fits in memory. A full pass with no
// emission is the fixpoint; five consecutive stalled passes fall back to
// one scan per removal.
std::vector<Edge> bottomup_class_overbudget(const NeighborhoodSubgraph& h,
                                            int k, const MemoryBudget& budget,
                                            ExternalStore& store,
                                            const StoreEnv& env);

// Full decomposition, ascending k. Uses in-memory stores and a private
// counter unless an environment is supplied.
TrussLabeling decompose_bottomup(const Graph& g, const MemoryBudget& budget);
TrussLabeling decompose_bottomup(const Graph& g, const MemoryBudget& budget,
                                 const StoreEnv& env,
                                 const PartitionHook& hook = nullptr);

} // namespace truss
