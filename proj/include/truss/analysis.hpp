#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "truss/graph.hpp"
#include "truss/inmem.hpp"

namespace truss {

// Definitional fixpoint decomposition: for each k ascending, repeatedly
// delete any edge whose in-subgraph support is below k-2, recomputing
// supports from scratch each pass; phi(e) is the largest k the edge
// survived. Deliberately naive, so it is capped at `limit` vertices and
// throws limit_error beyond that.
TrussLabeling oracle_decompose(const Graph& g, std::size_t limit = 300);

// Audit of a labeling against its graph: coverage (labels exactly E_G),
// validity (each T_k has all in-subgraph supports >= k-2) and tightness
// (each edge fails the support test one level up, i.e. in
// {e' : phi(e') >= phi(e)+1} plus e itself).
struct VerifyReport {
    bool ok = true;
    std::vector<std::string> violations;

    std::string to_text() const;
    std::string to_kv() const;
};

VerifyReport verify_labeling(const Graph& g, const TrussLabeling& l);

// Vertex core numbers by bucket peeling.
struct CoreLabeling {
    std::map<VertexId, int> core;
    int c_max = 0;

    int at(VertexId v) const;
};

CoreLabeling core_decompose(const Graph& g);

// Mean local clustering coefficient over vertices of degree >= 2; vertices
// below that are excluded. When no vertex qualifies the result is 0 and
// *undefined (if given) is set.
double clustering_coefficient(const Graph& g, bool* undefined = nullptr);

// Side-by-side statistics of the top truss T (k = k_max) and the top core C
// (c = c_max), plus the containment audit "every T_k lies inside the
// (k-1)-core".
struct TrussCoreReport {
    int k_max = 0;
    int c_max = 0;
    std::size_t truss_vertices = 0;
    std::size_t truss_edges = 0;
    std::size_t core_vertices = 0;
    std::size_t core_edges = 0;
    double cc_truss = 0.0;
    double cc_core = 0.0;
    bool cc_truss_defined = false;
    bool cc_core_defined = false;
    bool containment_ok = true;

    std::string to_text() const;
    std::string to_kv() const;
};

TrussCoreReport truss_vs_core_report(const Graph& g);

} // namespace truss
