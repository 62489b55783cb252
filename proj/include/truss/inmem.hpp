#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "truss/graph.hpp"
#include "truss/support.hpp"

namespace truss {

// Truss number phi(e) for every edge, plus the largest k with a nonempty
// k-class. k_max is 0 for an edgeless graph and 2 for a triangle-free one.
struct TrussLabeling {
    std::map<Edge, int> phi;
    int k_max = 0;

    int at(const Edge& e) const;
    bool operator==(const TrussLabeling&) const = default;
};

// Peeling that rediscovers each removed edge's triangles by merging both
// endpoints' full neighbor lists. Kept as a differential oracle; the merge
// cost is the point of comparison with decompose_improved.
TrussLabeling decompose_baseline(const Graph& g, ProbeCount* probes = nullptr);

// Peeling over a bin-sorted edge array: always removes a current-minimum-
// support edge and rediscovers triangles from the lower-degree endpoint with
// hash membership tests.
TrussLabeling decompose_improved(const Graph& g, ProbeCount* probes = nullptr);

// Groups edges by truss number. Every value vector is in canonical order.
std::map<int, std::vector<Edge>> classes(const TrussLabeling& l);

// Subgraph formed by the edges with phi >= k (isolated vertices dropped).
// k must be at least 2.
Graph truss_subgraph(const Graph& g, const TrussLabeling& l, int k);

// Text form: one "# k_max=<K>" header line, then "u v phi" per edge in
// canonical order.
void save_labeling(std::ostream& out, const TrussLabeling& l);
TrussLabeling load_labeling(std::istream& in);
void save_labeling_file(const std::string& path, const TrussLabeling& l);
TrussLabeling load_labeling_file(const std::string& path);

} // namespace truss
