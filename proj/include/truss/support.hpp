#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "truss/graph.hpp"

namespace truss {

// Per-edge triangle counts.
struct SupportMap {
    std::unordered_map<Edge, int, EdgeHash> support;

    int at(const Edge& e) const;
};

// Counts the elementary operations that dominate the two in-memory
// algorithms: hash membership tests (improved) and sorted-merge element
// visits (baseline). Both totals include support initialization.
using ProbeCount = std::uint64_t;

// Exact support for every edge, iterating each edge from its lower-degree
// endpoint and testing closing edges against a hash set. Adds one probe per
// membership test when `probes` is non-null.
SupportMap compute_support(const Graph& g, ProbeCount* probes = nullptr);

// Same result via full sorted-merge intersection of both neighbor lists,
// charging one probe per element visited. Used by the baseline algorithm.
SupportMap compute_support_merge(const Graph& g, ProbeCount* probes = nullptr);

// All triangles containing e, each exactly once. Throws not_found_error when
// e is not an edge of g.
std::vector<Triangle> enumerate_triangles_of_edge(const Graph& g,
                                                  const Edge& e);

// Bin-sorted edge array with O(1) decrement-and-reorder and a peel pointer.
// The array is non-decreasing in current support among unpeeled edges;
// `position` is its inverse. Ties are in canonical edge order at build time.
class PeelOrder {
public:
    explicit PeelOrder(const SupportMap& s);

    bool empty() const { return head_ == edges_.size(); }
    std::size_t remaining() const { return edges_.size() - head_; }

    // The unpeeled edge with minimum support (array position head).
    const Edge& min_edge() const;
    int min_support() const;

    int support(const Edge& e) const;
    bool contains(const Edge& e) const { return pos_.count(e) != 0; }
    // An edge is alive until it is popped.
    bool alive(const Edge& e) const;

    // Removes the minimum edge and returns it.
    Edge pop();

    // Decreases support(e) by one and restores sortedness with a single swap
    // against the head of e's bin. e must be alive with support > 0.
    void decrement(const Edge& e);

    // Full invariant check (sortedness, inverse positions, bin boundaries).
    // Returns an explanation of the first violation, or "" when consistent.
    std::string audit() const;

    const std::vector<Edge>& array() const { return edges_; }

private:
    std::vector<Edge> edges_;
    std::vector<int> sup_;                              // parallel to edges_
    std::unordered_map<Edge, std::size_t, EdgeHash> pos_;
    std::vector<std::size_t> bin_start_;                // index by support
    std::size_t head_ = 0;
};

// Debug dump: lines "u v sup" in canonical edge order.
void dump_support(std::ostream& out, const SupportMap& s);

} // namespace truss
