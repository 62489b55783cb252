#pragma once

#include <functional>
#include <map>
#include <unordered_set>
#include <vector>

#include "truss/bottomup.hpp"
#include "truss/external.hpp"
#include "truss/inmem.hpp"

namespace truss {

// Truss-number upper bound psi(e) per edge: phi(e) <= psi(e) <= sup(e) + 2.
struct UpperBoundMap {
    std::map<Edge, int> psi;

    int at(const Edge& e) const;
};

// psi(e) = min(sup(e), x_u(e), x_v(e)) + 2 where x_w(e) is the largest x
// such that w has at least x incident edges other than e with support at
// least x. Every record must carry its "s=" support annotation
// (argument_error otherwise).
UpperBoundMap upper_bounding(const ExternalStore& store,
                             const MemoryBudget& budget);

// Endpoints of every undecided store edge with psi >= k, sorted: only these
// vertices can still carry an edge of the k-class.
std::vector<VertexId> candidate_vertices_topdown(
    const ExternalStore& store, const UpperBoundMap& ub, int k,
    const std::unordered_set<Edge, EdgeHash>& decided);

// Computes the k-class from H = NS(U_k). Candidate edges (internal,
// undecided, psi >= k) with fewer than k-2 triangles whose other two edges
// are also still possible k-truss members (decided, or undecided with
// psi >= k) are cascaded away; the surviving candidates are exactly the
// k-class. They are added to `decided` and the store is then pruned:
// a decided record is dropped once every one of its store triangles has
// both other edges decided, so it can no longer influence any undecided
// support. Returns the class in canonical order.
std::vector<Edge> topdown_class(const NeighborhoodSubgraph& h, int k,
                                ExternalStore& store,
                                std::unordered_set<Edge, EdgeHash>& decided,
                                const UpperBoundMap& ub,
                                const MemoryBudget& budget);

// Same class when NS(U_k) exceeds M: H moves to its own store and each pass
// partitions the untested candidate endpoints, peeling every part's
// neighborhood of H in memory. A complete pass removing nothing is the
// fixpoint; five consecutive stalled passes fall back to one scan per
// support check.
std::vector<Edge> topdown_class_overbudget(
    const NeighborhoodSubgraph& h, int k, const MemoryBudget& budget,
    ExternalStore& store, std::unordered_set<Edge, EdgeHash>& decided,
    const UpperBoundMap& ub, const StoreEnv& env);

// Called after each computed class (and its pruning pass) with the class's
// k and the store as it stands.
using StoreObserver = std::function<void(int, const ExternalStore&)>;

// Decomposition by descending k, stopping after the `t` largest nonempty
// classes (t < 0 means all). Stage one is lower_bounding in support mode;
// stage two walks k from the largest psi downward. When `use_kinit` is set
// and some NS(U_k) fits in M, all classes from that k upward are read off
// one in-memory decomposition before the per-k walk resumes below it. The
// 2-class, when reached, is reported last.
TrussLabeling decompose_topdown(const Graph& g, int t,
                                const MemoryBudget& budget,
                                const StoreEnv& env, bool use_kinit = true,
                                const StoreObserver& observer = nullptr);
TrussLabeling decompose_topdown(const Graph& g, int t,
                                const MemoryBudget& budget);

} // namespace truss
