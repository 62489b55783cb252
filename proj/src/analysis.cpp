#include "truss/analysis.hpp"

#include <algorithm>
#include <sstream>

#include "truss/errors.hpp"
#include "truss/support.hpp"

namespace truss {

namespace {

// Support of every edge restricted to an edge subset, by brute merge over
// the subset's own adjacency.
std::map<Edge, int> subset_support(const std::vector<Edge>& edges) {
    std::map<VertexId, std::vector<VertexId>> adj;
    for (const Edge& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto& [v, nbrs] : adj) {
        (void)v;
        std::sort(nbrs.begin(), nbrs.end());
    }
    std::map<Edge, int> sup;
    for (const Edge& e : edges) {
        const auto& nu = adj.at(e.u);
        const auto& nv = adj.at(e.v);
        int cnt = 0;
        auto i = nu.begin();
        auto j = nv.begin();
        while (i != nu.end() && j != nv.end()) {
            if (*i < *j)
                ++i;
            else if (*j < *i)
                ++j;
            else {
                ++cnt;
                ++i;
                ++j;
            }
        }
        sup.emplace(e, cnt);
    }
    return sup;
}

Graph induced_subgraph(const Graph& g, const std::vector<VertexId>& verts) {
    std::unordered_set<VertexId> in(verts.begin(), verts.end());
    Graph h;
    for (VertexId v : verts) h.add_vertex(v);
    for (const Edge& e : g.edges())
        if (in.count(e.u) && in.count(e.v)) h.add_edge(e.u, e.v);
    return h;
}

} // namespace

TrussLabeling oracle_decompose(const Graph& g, std::size_t limit) {
    if (g.n() > limit)
        throw limit_error("graph has " + std::to_string(g.n()) +
                          " vertices, above the oracle limit of " +
                          std::to_string(limit));
    TrussLabeling out;
    if (g.m() == 0) {
        out.k_max = 0;
        return out;
    }
    std::vector<Edge> alive = g.edges();
    int k = 2;
    while (!alive.empty()) {
        // Shrink to the k-truss: delete every under-supported edge, then
        // recompute and repeat until a full pass deletes nothing.
        for (;;) {
            auto sup = subset_support(alive);
            std::vector<Edge> keep;
            keep.reserve(alive.size());
            for (const Edge& e : alive)
                if (sup.at(e) >= k - 2) keep.push_back(e);
            if (keep.size() == alive.size()) break;
            alive.swap(keep);
        }
        for (const Edge& e : alive) out.phi[e] = k;  // survived k; may rise
        ++k;
    }
    out.k_max = k - 2;  // last k that retained any edge
    return out;
}

VerifyReport verify_labeling(const Graph& g, const TrussLabeling& l) {
    VerifyReport r;
    auto note = [&r](std::string msg) {
        r.ok = false;
        r.violations.push_back(std::move(msg));
    };
    for (const Edge& e : g.edges())
        if (!l.phi.count(e))
            note("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                 ") has no label");
    for (const auto& [e, k] : l.phi) {
        if (!g.has_edge(e))
            note("labeled edge (" + std::to_string(e.u) + "," +
                 std::to_string(e.v) + ") is not in the graph");
        if (k < 2)
            note("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                 ") has label " + std::to_string(k) + " below 2");
    }
    if (!r.ok) return r;

    int seen_max = 0;
    for (const auto& [e, k] : l.phi) {
        (void)e;
        seen_max = std::max(seen_max, k);
    }
    if (seen_max != l.k_max)
        note("k_max is " + std::to_string(l.k_max) + " but the largest label is " +
             std::to_string(seen_max));

    // Validity: within each T_k every edge closes at least k-2 triangles.
    for (int k = 2; k <= seen_max; ++k) {
        std::vector<Edge> tk;
        for (const auto& [e, q] : l.phi)
            if (q >= k) tk.push_back(e);
        auto sup = subset_support(tk);
        for (const Edge& e : tk)
            if (sup.at(e) < k - 2)
                note("T_" + std::to_string(k) + " edge (" + std::to_string(e.u) +
                     "," + std::to_string(e.v) + ") has support " +
                     std::to_string(sup.at(e)) + " < " + std::to_string(k - 2));
    }

    // Tightness: each edge must fail the bar one level above its label even
    // with itself added to the higher truss. Adding e contributes no new
    // triangle partner, so its support there is the number of common
    // neighbors along label->=k+1 edges only.
    for (int k = 2; k <= seen_max; ++k) {
        std::map<VertexId, std::vector<VertexId>> up;
        for (const auto& [e, q] : l.phi)
            if (q >= k + 1) {
                up[e.u].push_back(e.v);
                up[e.v].push_back(e.u);
            }
        for (auto& [v, nbrs] : up) {
            (void)v;
            std::sort(nbrs.begin(), nbrs.end());
        }
        static const std::vector<VertexId> none;
        for (const auto& [e, q] : l.phi) {
            if (q != k) continue;
            const auto& nu = up.count(e.u) ? up.at(e.u) : none;
            const auto& nv = up.count(e.v) ? up.at(e.v) : none;
            int cnt = 0;
            auto i = nu.begin();
            auto j = nv.begin();
            while (i != nu.end() && j != nv.end()) {
                if (*i < *j)
                    ++i;
                else if (*j < *i)
                    ++j;
                else {
                    ++cnt;
                    ++i;
                    ++j;
                }
            }
            if (cnt >= k - 1)
                note("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                     ") labeled " + std::to_string(k) + " still has support " +
                     std::to_string(cnt) + " among labels >= " +
                     std::to_string(k + 1));
        }
    }
    return r;
}

std::string VerifyReport::to_text() const {
    std::ostringstream out;
    if (ok) {
        out << "labeling verified: no violations\n";
    } else {
        out << "labeling INVALID: " << violations.size() << " violation(s)\n";
        for (const auto& v : violations) out << "  - " << v << '\n';
    }
    return out.str();
}

std::string VerifyReport::to_kv() const {
    std::ostringstream out;
    out << "ok=" << (ok ? 1 : 0) << '\n';
    out << "violations=" << violations.size() << '\n';
    return out.str();
}

int CoreLabeling::at(VertexId v) const {
    auto it = core.find(v);
    if (it == core.end())
        throw not_found_error("no core number for vertex " + std::to_string(v));
    return it->second;
}

CoreLabeling core_decompose(const Graph& g) {
    CoreLabeling out;
    if (g.n() == 0) return out;
    // Bucket peeling: repeatedly remove a minimum-degree vertex; its core
    // number is the running maximum of the minimum degree seen.
    std::map<VertexId, int> deg;
    int maxdeg = 0;
    for (const auto& [v, nbrs] : g.adjacency()) {
        deg[v] = static_cast<int>(nbrs.size());
        maxdeg = std::max(maxdeg, deg[v]);
    }
    std::vector<std::vector<VertexId>> bins(static_cast<std::size_t>(maxdeg) + 1);
    for (const auto& [v, d] : deg) bins[static_cast<std::size_t>(d)].push_back(v);
    std::unordered_set<VertexId> done;
    int level = 0;
    std::size_t b = 0;
    while (done.size() < g.n()) {
        while (b <= static_cast<std::size_t>(maxdeg) && bins[b].empty()) ++b;
        // Degrees only decrease, so stale entries may sit in higher bins;
        // a vertex is processed at its first (lowest) appearance.
        VertexId v = bins[b].back();
        bins[b].pop_back();
        if (done.count(v) || deg.at(v) != static_cast<int>(b)) continue;
        level = std::max(level, static_cast<int>(b));
        out.core[v] = level;
        done.insert(v);
        for (VertexId w : g.neighbors(v)) {
            if (done.count(w)) continue;
            int& dw = deg.at(w);
            --dw;
            bins[static_cast<std::size_t>(dw)].push_back(w);
            if (static_cast<std::size_t>(dw) < b) b = static_cast<std::size_t>(dw);
        }
    }
    for (const auto& [v, c] : out.core) {
        (void)v;
        out.c_max = std::max(out.c_max, c);
    }
    return out;
}

double clustering_coefficient(const Graph& g, bool* undefined) {
    if (undefined) *undefined = false;
    SupportMap s = compute_support(g);
    // Triangles through v: each one contributes to exactly two incident edges.
    std::map<VertexId, long long> tri2;
    for (const auto& [e, sup] : s.support) {
        tri2[e.u] += sup;
        tri2[e.v] += sup;
    }
    double total = 0.0;
    std::size_t counted = 0;
    for (VertexId v : g.vertices()) {
        std::size_t d = g.degree(v);
        if (d < 2) continue;
        double pairs = 0.5 * static_cast<double>(d) * static_cast<double>(d - 1);
        double tri = tri2.count(v) ? static_cast<double>(tri2.at(v)) / 2.0 : 0.0;
        total += tri / pairs;
        ++counted;
    }
    if (counted == 0) {
        if (undefined) *undefined = true;
        return 0.0;
    }
    return total / static_cast<double>(counted);
}

TrussCoreReport truss_vs_core_report(const Graph& g) {
    TrussCoreReport r;
    TrussLabeling l = decompose_improved(g);
    CoreLabeling c = core_decompose(g);
    r.k_max = l.k_max;
    r.c_max = c.c_max;

    Graph t = l.k_max >= 2 ? truss_subgraph(g, l, l.k_max) : Graph();
    r.truss_vertices = t.n();
    r.truss_edges = t.m();
    bool undef = false;
    r.cc_truss = clustering_coefficient(t, &undef);
    r.cc_truss_defined = !undef;

    std::vector<VertexId> top_core;
    for (const auto& [v, q] : c.core)
        if (q >= c.c_max) top_core.push_back(v);
    Graph cg = induced_subgraph(g, top_core);
    r.core_vertices = cg.n();
    r.core_edges = cg.m();
    r.cc_core = clustering_coefficient(cg, &undef);
    r.cc_core_defined = !undef;

    // Containment: an edge of T_k must join two vertices of the (k-1)-core.
    for (const auto& [e, k] : l.phi)
        if (std::min(c.at(e.u), c.at(e.v)) < k - 1) r.containment_ok = false;
    return r;
}

std::string TrussCoreReport::to_text() const {
    std::ostringstream out;
    out << "top truss:  k_max=" << k_max << "  |V|=" << truss_vertices
        << "  |E|=" << truss_edges << "  cc=";
    if (cc_truss_defined)
        out << cc_truss;
    else
        out << "undefined";
    out << '\n';
    out << "top core:   c_max=" << c_max << "  |V|=" << core_vertices
        << "  |E|=" << core_edges << "  cc=";
    if (cc_core_defined)
        out << cc_core;
    else
        out << "undefined";
    out << '\n';
    out << "containment (every T_k inside the (k-1)-core): "
        << (containment_ok ? "ok" : "VIOLATED") << '\n';
    return out.str();
}

std::string TrussCoreReport::to_kv() const {
    std::ostringstream out;
    out << "k_max=" << k_max << '\n'
        << "truss_vertices=" << truss_vertices << '\n'
        << "truss_edges=" << truss_edges << '\n'
        << "cc_truss=" << cc_truss << '\n'
        << "cc_truss_defined=" << (cc_truss_defined ? 1 : 0) << '\n'
        << "c_max=" << c_max << '\n'
        << "core_vertices=" << core_vertices << '\n'
        << "core_edges=" << core_edges << '\n'
        << "cc_core=" << cc_core << '\n'
        << "cc_core_defined=" << (cc_core_defined ? 1 : 0) << '\n'
        << "containment_ok=" << (containment_ok ? 1 : 0) << '\n';
    return out.str();
}

} // namespace truss
