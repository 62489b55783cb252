#include "truss/support.hpp"

#include <algorithm>
#include <ostream>

#include "truss/errors.hpp"

namespace truss {

int SupportMap::at(const Edge& e) const {
    auto it = support.find(e);
    if (it == support.end())
        throw not_found_error("no support entry for edge (" +
                              std::to_string(e.u) + "," + std::to_string(e.v) +
                              ")");
    return it->second;
}

SupportMap compute_support(const Graph& g, ProbeCount* probes) {
    SupportMap s;
    s.support.reserve(g.m());
    std::unordered_map<VertexId, std::unordered_set<VertexId>> sets;
    sets.reserve(g.n());
    for (const auto& [u, nbrs] : g.adjacency())
        sets.emplace(u, std::unordered_set<VertexId>(nbrs.begin(), nbrs.end()));
    for (const Edge& e : g.edges()) {
        // Walk the neighbors of the lower-degree endpoint, testing membership
        // in the other endpoint's hash set.
        VertexId a = e.u, b = e.v;
        if (g.degree(a) > g.degree(b)) std::swap(a, b);
        const auto& bs = sets.at(b);
        int cnt = 0;
        for (VertexId w : g.neighbors(a)) {
            if (w == b) continue;
            if (probes) ++*probes;
            if (bs.count(w)) ++cnt;
        }
        s.support.emplace(e, cnt);
    }
    return s;
}

SupportMap compute_support_merge(const Graph& g, ProbeCount* probes) {
    SupportMap s;
    s.support.reserve(g.m());
    for (const Edge& e : g.edges()) {
        const auto& nu = g.neighbors(e.u);
        const auto& nv = g.neighbors(e.v);
        if (probes) *probes += nu.size() + nv.size();
        int cnt = 0;
        auto i = nu.begin();
        auto j = nv.begin();
        while (i != nu.end() && j != nv.end()) {
            if (*i < *j) {
                ++i;
            } else if (*j < *i) {
                ++j;
            } else {
                ++cnt;
                ++i;
                ++j;
            }
        }
        s.support.emplace(e, cnt);
    }
    return s;
}

std::vector<Triangle> enumerate_triangles_of_edge(const Graph& g,
                                                  const Edge& e) {
    if (!g.has_edge(e))
        throw not_found_error("edge (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ") is not in the graph");
    std::vector<Triangle> out;
    const auto& nu = g.neighbors(e.u);
    const auto& nv = g.neighbors(e.v);
    auto i = nu.begin();
    auto j = nv.begin();
    while (i != nu.end() && j != nv.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            out.emplace_back(e.u, e.v, *i);
            ++i;
            ++j;
        }
    }
    return out;
}

PeelOrder::PeelOrder(const SupportMap& s) {
    edges_.reserve(s.support.size());
    for (const auto& [e, sup] : s.support) {
        (void)sup;
        edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end(),
              [&s](const Edge& a, const Edge& b) {
                  int sa = s.support.at(a), sb = s.support.at(b);
                  if (sa != sb) return sa < sb;
                  return a < b;
              });
    sup_.resize(edges_.size());
    pos_.reserve(edges_.size());
    int max_sup = 0;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        sup_[i] = s.support.at(edges_[i]);
        pos_.emplace(edges_[i], i);
        max_sup = std::max(max_sup, sup_[i]);
    }
    bin_start_.assign(static_cast<std::size_t>(max_sup) + 2, edges_.size());
    for (std::size_t i = edges_.size(); i-- > 0;)
        bin_start_[static_cast<std::size_t>(sup_[i])] = i;
    // Empty bins start where the next nonempty one does.
    for (std::size_t b = bin_start_.size() - 1; b-- > 0;)
        bin_start_[b] = std::min(bin_start_[b], bin_start_[b + 1]);
}

const Edge& PeelOrder::min_edge() const {
    if (empty()) throw not_found_error("peel order is empty");
    return edges_[head_];
}

int PeelOrder::min_support() const {
    if (empty()) throw not_found_error("peel order is empty");
    return sup_[head_];
}

int PeelOrder::support(const Edge& e) const {
    auto it = pos_.find(e);
    if (it == pos_.end())
        throw not_found_error("edge (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ") is not in the peel order");
    return sup_[it->second];
}

bool PeelOrder::alive(const Edge& e) const {
    auto it = pos_.find(e);
    if (it == pos_.end())
        throw not_found_error("edge (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ") is not in the peel order");
    return it->second >= head_;
}

Edge PeelOrder::pop() {
    if (empty()) throw not_found_error("peel order is empty");
    Edge e = edges_[head_];
    // Its bin loses its first element.
    std::size_t b = static_cast<std::size_t>(sup_[head_]);
    bin_start_[b] = head_ + 1;
    ++head_;
    return e;
}

void PeelOrder::decrement(const Edge& e) {
    auto it = pos_.find(e);
    if (it == pos_.end())
        throw not_found_error("edge (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ") is not in the peel order");
    std::size_t i = it->second;
    if (i < head_)
        throw argument_error("cannot decrement a peeled edge");
    int s = sup_[i];
    if (s <= 0) throw argument_error("cannot decrement support below zero");
    // Swap e with the first unpeeled edge of its bin, then shrink the bin
    // from the left; e lands at the new start of bin s-1.
    std::size_t b = static_cast<std::size_t>(s);
    std::size_t t = std::max(bin_start_[b], head_);
    bin_start_[b] = t + 1;
    if (t != i) {
        std::swap(edges_[i], edges_[t]);
        std::swap(sup_[i], sup_[t]);
        pos_[edges_[i]] = i;
        pos_[edges_[t]] = t;
    }
    sup_[t] = s - 1;
}

std::string PeelOrder::audit() const {
    for (std::size_t i = head_; i + 1 < edges_.size(); ++i)
        if (sup_[i] > sup_[i + 1])
            return "array not sorted at index " + std::to_string(i);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        auto it = pos_.find(edges_[i]);
        if (it == pos_.end() || it->second != i)
            return "stale position for index " + std::to_string(i);
    }
    // Each live edge sits at or after its own bin's effective start and
    // strictly before the next bin's; stale starts below head are benign.
    auto eff = [this](std::size_t b) {
        return b < bin_start_.size() ? std::max(bin_start_[b], head_)
                                     : edges_.size();
    };
    for (std::size_t i = head_; i < edges_.size(); ++i) {
        if (sup_[i] < 0) return "negative support at index " + std::to_string(i);
        std::size_t b = static_cast<std::size_t>(sup_[i]);
        if (b + 1 >= bin_start_.size())
            return "support exceeds bin table at index " + std::to_string(i);
        if (eff(b) > i)
            return "bin " + std::to_string(b) + " starts after member " +
                   std::to_string(i);
        if (eff(b + 1) <= i)
            return "bin " + std::to_string(b + 1) + " overlaps member " +
                   std::to_string(i);
    }
    return "";
}

void dump_support(std::ostream& out, const SupportMap& s) {
    std::vector<Edge> es;
    es.reserve(s.support.size());
    for (const auto& [e, sup] : s.support) {
        (void)sup;
        es.push_back(e);
    }
    std::sort(es.begin(), es.end());
    for (const Edge& e : es)
        out << e.u << ' ' << e.v << ' ' << s.support.at(e) << '\n';
}

} // namespace truss
