#include "truss/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace truss {

Triangle::Triangle(VertexId x, VertexId y, VertexId z) {
    if (x == y || y == z || x == z)
        throw argument_error("triangle vertices must be distinct");
    VertexId lo = std::min({x, y, z});
    VertexId hi = std::max({x, y, z});
    a = lo;
    c = hi;
    b = static_cast<VertexId>(static_cast<std::uint64_t>(x) + y + z - lo - hi);
}

bool Graph::has_edge(VertexId u, VertexId v) const {
    auto it = adj_.find(u);
    if (it == adj_.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), v);
}

const std::vector<VertexId>& Graph::neighbors(VertexId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end())
        throw not_found_error("unknown vertex " + std::to_string(v));
    return it->second;
}

std::vector<VertexId> Graph::vertices() const {
    std::vector<VertexId> out;
    out.reserve(adj_.size());
    for (const auto& [v, _] : adj_) out.push_back(v);
    return out;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (const auto& [u, nbrs] : adj_)
        for (VertexId v : nbrs)
            if (u < v) out.emplace_back(u, v);
    return out;
}

void Graph::add_vertex(VertexId v) { adj_[v]; }

bool Graph::add_edge(VertexId u, VertexId v) {
    if (u == v) throw argument_error("self-loop is not a valid edge");
    auto& nu = adj_[u];
    auto it = std::lower_bound(nu.begin(), nu.end(), v);
    if (it != nu.end() && *it == v) return false;
    nu.insert(it, v);
    auto& nv = adj_[v];
    nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
    ++m_;
    return true;
}

namespace {

bool parse_vertex(const std::string& tok, VertexId& out) {
    if (tok.empty()) return false;
    std::uint64_t val = 0;
    for (char c : tok) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        val = val * 10 + static_cast<std::uint64_t>(c - '0');
        if (val > 0xffffffffULL) return false;
    }
    out = static_cast<VertexId>(val);
    return true;
}

void add_normalized(Graph& g, VertexId u, VertexId v, LoadStats& stats) {
    if (u == v) {
        ++stats.self_loops_dropped;
        return;
    }
    if (!g.add_edge(u, v)) ++stats.duplicates_dropped;
}

Graph load_edge_list(std::istream& in, LoadStats& stats) {
    Graph g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string a, b, rest;
        if (!(ls >> a >> b) || (ls >> rest))
            throw parse_error(lineno, "expected \"u v\"");
        VertexId u, v;
        if (!parse_vertex(a, u) || !parse_vertex(b, v))
            throw parse_error(lineno, "vertex id is not a non-negative integer");
        add_normalized(g, u, v, stats);
    }
    return g;
}

Graph load_adjacency_list(std::istream& in, LoadStats& stats) {
    Graph g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw parse_error(lineno, "expected \"u: v1 v2 ...\"");
        VertexId u;
        if (!parse_vertex(line.substr(0, colon), u))
            throw parse_error(lineno, "vertex id is not a non-negative integer");
        g.add_vertex(u);
        std::istringstream ls(line.substr(colon + 1));
        std::string tok;
        // Duplicates within one line are real duplicates; the mirrored
        // listing (v in u's line and u in v's line) is the expected encoding
        // of an undirected edge and is not counted.
        std::vector<VertexId> seen;
        while (ls >> tok) {
            VertexId v;
            if (!parse_vertex(tok, v))
                throw parse_error(lineno,
                                  "vertex id is not a non-negative integer");
            if (u == v) {
                ++stats.self_loops_dropped;
                continue;
            }
            if (std::find(seen.begin(), seen.end(), v) != seen.end()) {
                ++stats.duplicates_dropped;
                continue;
            }
            seen.push_back(v);
            g.add_edge(u, v);
        }
    }
    return g;
}

} // namespace

Graph load_graph(std::istream& in, GraphFormat format, LoadStats* stats) {
    LoadStats local;
    Graph g = format == GraphFormat::edge_list ? load_edge_list(in, local)
                                               : load_adjacency_list(in, local);
    if (stats) *stats = local;
    return g;
}

Graph load_graph_file(const std::string& path, GraphFormat format,
                      LoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw parse_error(0, "cannot open " + path);
    return load_graph(in, format, stats);
}

void save_graph(std::ostream& out, const Graph& g, GraphFormat format) {
    if (format == GraphFormat::edge_list) {
        for (const auto& [u, nbrs] : g.adjacency())
            for (VertexId v : nbrs)
                if (u < v) out << u << ' ' << v << '\n';
    } else {
        for (const auto& [u, nbrs] : g.adjacency()) {
            out << u << ':';
            for (VertexId v : nbrs) out << ' ' << v;
            out << '\n';
        }
    }
}

void save_graph_file(const std::string& path, const Graph& g,
                     GraphFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path);
    save_graph(out, g, format);
}

std::string validate_graph(const Graph& g) {
    std::size_t degree_sum = 0;
    for (const auto& [u, nbrs] : g.adjacency()) {
        degree_sum += nbrs.size();
        VertexId prev = 0;
        bool first = true;
        for (VertexId v : nbrs) {
            if (v == u) return "self-loop at vertex " + std::to_string(u);
            if (!first && v <= prev)
                return "neighbor list of " + std::to_string(u) +
                       " is not strictly ascending";
            prev = v;
            first = false;
            if (!g.has_vertex(v))
                return "neighbor " + std::to_string(v) + " of " +
                       std::to_string(u) + " is not a vertex";
            if (!g.has_edge(v, u))
                return "edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") is not symmetric";
        }
    }
    if (degree_sum != 2 * g.m())
        return "edge count " + std::to_string(g.m()) +
               " does not match degree sum " + std::to_string(degree_sum);
    return "";
}

namespace {

// Uniform double in [0,1) built from the raw engine output so that results do
// not depend on the standard library's distribution implementations.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

Graph generate_clique(std::size_t n) {
    Graph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex(static_cast<VertexId>(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            g.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j));
    return g;
}

Graph generate_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0)
        throw argument_error("edge probability must be in [0,1]");
    std::mt19937_64 rng(seed);
    Graph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex(static_cast<VertexId>(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (uniform01(rng) < p)
                g.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j));
    return g;
}

Graph generate_power_law(std::size_t n, double exponent, std::uint64_t seed) {
    if (exponent <= 1.0)
        throw argument_error("power-law exponent must be > 1");
    // Chung-Lu model: expected degrees follow a power law with the given
    // exponent; edge (i,j) appears with probability min(1, w_i w_j / S).
    std::vector<double> w(n);
    double sum = 0.0;
    const double alpha = 1.0 / (exponent - 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::pow(static_cast<double>(n) / (static_cast<double>(i) + 1.0),
                        alpha);
        sum += w[i];
    }
    std::mt19937_64 rng(seed);
    Graph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex(static_cast<VertexId>(i));
    if (sum <= 0.0) return g;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double p = std::min(1.0, w[i] * w[j] / sum);
            if (uniform01(rng) < p)
                g.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j));
        }
    return g;
}

Graph generate_hub_graph(std::size_t hub_degree, std::size_t extra_edges,
                         std::uint64_t seed) {
    if (hub_degree == 0) throw argument_error("hub degree must be positive");
    Graph g;
    const VertexId hub = 0;
    g.add_vertex(hub);
    for (std::size_t i = 1; i <= hub_degree; ++i)
        g.add_edge(hub, static_cast<VertexId>(i));
    // Random edges among the non-hub vertices over a pool 1.5x the hub
    // neighborhood, so part of the pool is outside the hub's reach.
    const std::size_t pool = hub_degree + hub_degree / 2;
    std::mt19937_64 rng(seed);
    std::size_t added = 0;
    while (added < extra_edges) {
        VertexId a = static_cast<VertexId>(1 + rng() % pool);
        VertexId b = static_cast<VertexId>(1 + rng() % pool);
        if (a == b) continue;
        if (g.add_edge(a, b)) ++added;
    }
    return g;
}

Graph fig2_graph() {
    // Vertices a..l as 0..11. The edge set is the union of the four truss
    // classes of the running example (one support-0 edge, a 9-edge fringe, a
    // 4-clique on {f,h,i,j}, and a 5-clique on {a,b,c,d,e}).
    static const std::pair<VertexId, VertexId> edges[] = {
        {8, 10},                                                  // (i,k)
        {3, 6}, {3, 10}, {3, 11}, {4, 5}, {4, 6},                 // (d,g) (d,k) (d,l) (e,f) (e,g)
        {5, 6}, {6, 7}, {6, 10}, {6, 11},                         // (f,g) (g,h) (g,k) (g,l)
        {5, 7}, {5, 8}, {5, 9}, {7, 8}, {7, 9}, {8, 9},           // K4 on {f,h,i,j}
        {0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2},                   // K5 on {a,b,c,d,e}
        {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4},
    };
    Graph g;
    for (const auto& [u, v] : edges) g.add_edge(u, v);
    return g;
}

} // namespace truss
