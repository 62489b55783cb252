#include "truss/inmem.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "truss/errors.hpp"

namespace truss {

int TrussLabeling::at(const Edge& e) const {
    auto it = phi.find(e);
    if (it == phi.end())
        throw not_found_error("no truss number for edge (" +
                              std::to_string(e.u) + "," + std::to_string(e.v) +
                              ")");
    return it->second;
}

namespace {

// Shared peel loop. Removal marks the edge dead (position before the peel
// head); triangle rediscovery differs between the two algorithms but both
// then decrement the two surviving partner edges of every live triangle.
TrussLabeling peel(const Graph& g, bool improved, ProbeCount* probes) {
    TrussLabeling out;
    if (g.m() == 0) {
        out.k_max = 0;
        return out;
    }
    SupportMap s =
        improved ? compute_support(g, probes) : compute_support_merge(g, probes);
    PeelOrder p(s);
    int k = 2;
    while (!p.empty()) {
        k = std::max(k, p.min_support() + 2);
        Edge e = p.pop();
        if (improved) {
            VertexId a = e.u, b = e.v;
            if (g.degree(a) > g.degree(b)) std::swap(a, b);
            for (VertexId w : g.neighbors(a)) {
                if (w == b) continue;
                if (probes) ++*probes;
                Edge bw(b, w);
                if (!p.contains(bw) || !p.alive(bw)) continue;
                Edge aw(a, w);
                if (!p.alive(aw)) continue;
                p.decrement(aw);
                p.decrement(bw);
            }
        } else {
            const auto& nu = g.neighbors(e.u);
            const auto& nv = g.neighbors(e.v);
            if (probes) *probes += nu.size() + nv.size();
            auto i = nu.begin();
            auto j = nv.begin();
            while (i != nu.end() && j != nv.end()) {
                if (*i < *j) {
                    ++i;
                } else if (*j < *i) {
                    ++j;
                } else {
                    Edge uw(e.u, *i), vw(e.v, *i);
                    if (p.alive(uw) && p.alive(vw)) {
                        p.decrement(uw);
                        p.decrement(vw);
                    }
                    ++i;
                    ++j;
                }
            }
        }
        out.phi.emplace(e, k);
    }
    out.k_max = k;
    return out;
}

} // namespace

TrussLabeling decompose_baseline(const Graph& g, ProbeCount* probes) {
    return peel(g, false, probes);
}

TrussLabeling decompose_improved(const Graph& g, ProbeCount* probes) {
    return peel(g, true, probes);
}

std::map<int, std::vector<Edge>> classes(const TrussLabeling& l) {
    std::map<int, std::vector<Edge>> out;
    for (const auto& [e, k] : l.phi) out[k].push_back(e);
    return out;
}

Graph truss_subgraph(const Graph& g, const TrussLabeling& l, int k) {
    if (k < 2) throw argument_error("truss order must be at least 2");
    Graph t;
    for (const Edge& e : g.edges())
        if (l.at(e) >= k) t.add_edge(e.u, e.v);
    return t;
}

void save_labeling(std::ostream& out, const TrussLabeling& l) {
    out << "# k_max=" << l.k_max << '\n';
    for (const auto& [e, k] : l.phi)
        out << e.u << ' ' << e.v << ' ' << k << '\n';
}

TrussLabeling load_labeling(std::istream& in) {
    TrussLabeling l;
    bool have_kmax = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') {
            auto at = line.find("k_max=", start);
            if (at != std::string::npos) {
                try {
                    l.k_max = std::stoi(line.substr(at + 6));
                    have_kmax = true;
                } catch (const std::exception&) {
                    throw parse_error(lineno, "malformed k_max header");
                }
            }
            continue;
        }
        std::istringstream fields(line.substr(start));
        unsigned long long u = 0, v = 0;
        long long k = 0;
        if (!(fields >> u >> v >> k))
            throw parse_error(lineno, "expected \"u v phi\"");
        std::string rest;
        if (fields >> rest) throw parse_error(lineno, "trailing data after phi");
        if (u > 0xffffffffULL || v > 0xffffffffULL)
            throw parse_error(lineno, "vertex id out of range");
        if (k < 2)
            throw parse_error(lineno, "truss number must be at least 2");
        Edge e(static_cast<VertexId>(u), static_cast<VertexId>(v));
        if (!l.phi.emplace(e, static_cast<int>(k)).second)
            throw parse_error(lineno, "duplicate edge in labeling");
    }
    if (!have_kmax) {
        l.k_max = 0;
        for (const auto& [e, k] : l.phi) {
            (void)e;
            l.k_max = std::max(l.k_max, k);
        }
    }
    return l;
}

void save_labeling_file(const std::string& path, const TrussLabeling& l) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot open " + path + " for writing");
    save_labeling(out, l);
}

TrussLabeling load_labeling_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path);
    return load_labeling(in);
}

} // namespace truss
