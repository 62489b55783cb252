#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "truss/errors.hpp"

namespace truss {

using VertexId = std::uint32_t;

// Undirected edge in canonical form (u < v). Construction normalizes the
// endpoint order; self-loops are rejected.
struct Edge {
    VertexId u;
    VertexId v;

    Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {
        if (a == b) throw argument_error("self-loop is not a valid edge");
    }

    auto operator<=>(const Edge&) const = default;

    std::uint64_t key() const {
        return (static_cast<std::uint64_t>(u) << 32) | v;
    }
};

struct EdgeHash {
    std::size_t operator()(const Edge& e) const {
        return std::hash<std::uint64_t>{}(e.key());
    }
};

// Triangle with vertices in ascending order.
struct Triangle {
    VertexId a;
    VertexId b;
    VertexId c;

    Triangle(VertexId x, VertexId y, VertexId z);
    auto operator<=>(const Triangle&) const = default;
};

// Undirected simple graph in sorted adjacency-list form. Vertex ids need not
// be contiguous. Immutable once built (all mutation goes through the builder
// functions below).
class Graph {
public:
    Graph() = default;

    std::size_t n() const { return adj_.size(); }
    std::size_t m() const { return m_; }
    // |G| = m + n, the unit used by memory budgets.
    std::size_t size() const { return m_ + adj_.size(); }

    bool has_vertex(VertexId v) const { return adj_.count(v) != 0; }
    bool has_edge(VertexId u, VertexId v) const;
    bool has_edge(const Edge& e) const { return has_edge(e.u, e.v); }

    // Sorted neighbor list; throws not_found_error for an unknown vertex.
    const std::vector<VertexId>& neighbors(VertexId v) const;
    std::size_t degree(VertexId v) const { return neighbors(v).size(); }

    // Ascending-id iteration over (vertex, neighbor list) pairs.
    const std::map<VertexId, std::vector<VertexId>>& adjacency() const {
        return adj_;
    }

    std::vector<VertexId> vertices() const;
    // All edges in canonical ascending order.
    std::vector<Edge> edges() const;

    bool operator==(const Graph& other) const = default;

    // Construction. add_edge inserts both directions, keeps lists sorted, and
    // ignores duplicates (returns false for a duplicate). add_vertex ensures
    // the vertex exists, possibly isolated.
    void add_vertex(VertexId v);
    bool add_edge(VertexId u, VertexId v);

private:
    std::map<VertexId, std::vector<VertexId>> adj_;
    std::size_t m_ = 0;
};

enum class GraphFormat { edge_list, adjacency_list };

// Normalizations applied while loading.
struct LoadStats {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_dropped = 0;
};

// Parses a graph from text. Self-loops are dropped and duplicate edges
// deduplicated, with counts reported through `stats` when non-null.
// Malformed lines raise parse_error with the 1-based line number.
Graph load_graph(std::istream& in, GraphFormat format,
                 LoadStats* stats = nullptr);
Graph load_graph_file(const std::string& path, GraphFormat format,
                      LoadStats* stats = nullptr);

// Byte-deterministic serialization: ascending u, then ascending v.
void save_graph(std::ostream& out, const Graph& g, GraphFormat format);
void save_graph_file(const std::string& path, const Graph& g,
                     GraphFormat format);

// Checks the simple-graph invariants (symmetry, sorted lists, no loops or
// duplicates, consistent edge count). Returns an explanation of the first
// violation, or an empty string when the graph is valid.
std::string validate_graph(const Graph& g);

// Deterministic generators. Identical arguments produce identical graphs.
Graph generate_clique(std::size_t n);
Graph generate_erdos_renyi(std::size_t n, double p, std::uint64_t seed);
Graph generate_power_law(std::size_t n, double exponent, std::uint64_t seed);

// One hub adjacent to `hub_degree` vertices plus `extra_edges` random edges
// among the non-hub vertices. Used by the operation-count comparisons.
Graph generate_hub_graph(std::size_t hub_degree, std::size_t extra_edges,
                         std::uint64_t seed);

// The 12-vertex, 26-edge fixture used throughout the tests and available from
// the CLI as `gen fig2` (vertices a..l mapped to 0..11).
Graph fig2_graph();

} // namespace truss
