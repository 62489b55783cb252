#include "truss/topdown.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>
#include <set>
#include <unordered_map>

#include "truss/errors.hpp"

namespace truss {

namespace {

int psi_at(const UpperBoundMap& ub, const Edge& e) {
    auto it = ub.psi.find(e);
    if (it == ub.psi.end())
        throw argument_error("edge has no upper-bound entry");
    return it->second;
}

// Drops every decided record whose store triangles all have both other
// edges decided: such a record can never again contribute to an undecided
// edge's support. Decided edges are processed in chunks whose endpoint
// adjacency fits in M, one collecting scan per chunk, then one batched
// removal.
std::size_t prune_decided(ExternalStore& store,
                          const std::unordered_set<Edge, EdgeHash>& decided,
                          const MemoryBudget& budget) {
    if (decided.empty() || store.empty()) return 0;
    std::map<VertexId, std::size_t> deg;
    std::vector<Edge> in_store;
    store.scan([&](const StoreRecord& r) {
        ++deg[r.e.u];
        ++deg[r.e.v];
        if (decided.count(r.e)) in_store.push_back(r.e);
    });
    if (in_store.empty()) return 0;
    std::sort(in_store.begin(), in_store.end());
    std::vector<Edge> prunable;
    std::size_t i = 0;
    while (i < in_store.size()) {
        std::set<VertexId> verts;
        std::size_t load = 0;
        std::size_t j = i;
        while (j < in_store.size()) {
            const Edge& e = in_store[j];
            std::size_t extra = 0;
            if (!verts.count(e.u)) extra += deg[e.u];
            if (!verts.count(e.v)) extra += deg[e.v];
            if (j > i && load + extra > budget.M) break;
            verts.insert(e.u);
            verts.insert(e.v);
            load += extra;
            ++j;
        }
        std::unordered_map<VertexId, std::vector<VertexId>> adj;
        store.scan([&](const StoreRecord& r) {
            if (verts.count(r.e.u)) adj[r.e.u].push_back(r.e.v);
            if (verts.count(r.e.v)) adj[r.e.v].push_back(r.e.u);
        });
        for (auto& [v, nv] : adj) std::sort(nv.begin(), nv.end());
        for (; i < j; ++i) {
            const Edge& e = in_store[i];
            const auto& nu = adj[e.u];
            const auto& nv = adj[e.v];
            bool keep = false;
            std::size_t a = 0;
            std::size_t b = 0;
            while (a < nu.size() && b < nv.size()) {
                if (nu[a] < nv[b]) {
                    ++a;
                } else if (nv[b] < nu[a]) {
                    ++b;
                } else {
                    VertexId w = nu[a];
                    if (!decided.count(Edge(e.u, w)) ||
                        !decided.count(Edge(e.v, w))) {
                        keep = true;
                        break;
                    }
                    ++a;
                    ++b;
                }
            }
            if (!keep) prunable.push_back(e);
        }
    }
    if (!prunable.empty()) rewrite_filtered(store, prunable, budget);
    return prunable.size();
}

} // namespace

int UpperBoundMap::at(const Edge& e) const {
    auto it = psi.find(e);
    if (it == psi.end()) throw not_found_error("no upper bound for edge");
    return it->second;
}

UpperBoundMap upper_bounding(const ExternalStore& store,
                             const MemoryBudget&) {
    std::vector<std::pair<Edge, int>> recs;
    store.scan([&recs](const StoreRecord& r) {
        if (!r.sup)
            throw argument_error(
                "store record is missing its support annotation");
        recs.emplace_back(r.e, *r.sup);
    });
    std::unordered_map<VertexId, std::vector<int>> incident;
    for (const auto& [e, s] : recs) {
        incident[e.u].push_back(s);
        incident[e.v].push_back(s);
    }
    // Per vertex: h = the largest x with at least x incident supports >= x,
    // cnt = how many incident supports reach h.
    struct HInfo {
        int h;
        int cnt;
    };
    std::unordered_map<VertexId, HInfo> hinfo;
    for (auto& [v, sups] : incident) {
        std::sort(sups.begin(), sups.end(), std::greater<int>());
        int h = 0;
        while (h < static_cast<int>(sups.size()) && sups[h] >= h + 1) ++h;
        int cnt = 0;
        while (cnt < static_cast<int>(sups.size()) && sups[cnt] >= h) ++cnt;
        hinfo.emplace(v, HInfo{h, cnt});
    }
    UpperBoundMap out;
    for (const auto& [e, s] : recs) {
        // Excluding e itself lowers the h-index exactly when e sits among a
        // bare-minimum count at the h level.
        auto x = [&hinfo, s](VertexId w) {
            const HInfo& hi = hinfo.at(w);
            return (s >= hi.h && hi.cnt == hi.h) ? hi.h - 1 : hi.h;
        };
        out.psi.emplace(e, std::min(s, std::min(x(e.u), x(e.v))) + 2);
    }
    return out;
}

std::vector<VertexId> candidate_vertices_topdown(
    const ExternalStore& store, const UpperBoundMap& ub, int k,
    const std::unordered_set<Edge, EdgeHash>& decided) {
    std::set<VertexId> uset;
    store.scan([&](const StoreRecord& r) {
        if (decided.count(r.e)) return;
        if (psi_at(ub, r.e) >= k) {
            uset.insert(r.e.u);
            uset.insert(r.e.v);
        }
    });
    return std::vector<VertexId>(uset.begin(), uset.end());
}

std::vector<Edge> topdown_class(const NeighborhoodSubgraph& h, int k,
                                ExternalStore& store,
                                std::unordered_set<Edge, EdgeHash>& decided,
                                const UpperBoundMap& ub,
                                const MemoryBudget& budget) {
    // The triangle universe: edges that can still sit in a k-truss, either
    // decided (class > k, or k itself from an earlier call) or undecided
    // with psi >= k. Supports count only triangles lying fully inside it.
    std::vector<Edge> sedges;
    std::set<Edge> cands;
    for (const Edge& e : h.graph.edges()) {
        bool dec = decided.count(e) != 0;
        if (!dec && psi_at(ub, e) < k) continue;
        sedges.push_back(e);
        if (!dec && h.is_internal(e)) cands.insert(e);
    }
    for (const Edge& e : peel_edges(
             sedges, [&cands](const Edge& e) { return cands.count(e) != 0; },
             k - 3))
        cands.erase(e);
    std::vector<Edge> cls(cands.begin(), cands.end());
    decided.insert(cls.begin(), cls.end());
    prune_decided(store, decided, budget);
    return cls;
}

std::vector<Edge> topdown_class_overbudget(
    const NeighborhoodSubgraph& h, int k, const MemoryBudget& budget,
    ExternalStore& store, std::unordered_set<Edge, EdgeHash>& decided,
    const UpperBoundMap& ub, const StoreEnv& env) {
    // H exceeds M, so it lives in its own store; an in-memory removed set
    // mirrors the peels so scans skip stale records. Records that the bound
    // already places below k can never join the triangle universe at this
    // level, so they are not spilled at all.
    ExternalStore hstore = env.make("h_class.tmp");
    hstore.preload({});
    {
        std::vector<StoreRecord> keep;
        for (const StoreRecord& r : h.records)
            if (decided.count(r.e) != 0 || psi_at(ub, r.e) >= k)
                keep.push_back(r);
        hstore.append(keep);
    }

    std::set<Edge> cands;
    for (const Edge& e : h.internal_edges)
        if (!decided.count(e) && psi_at(ub, e) >= k) cands.insert(e);
    std::unordered_set<Edge, EdgeHash> removed;
    auto is_alive = [&removed](const Edge& e) {
        return removed.count(e) == 0;
    };
    auto s_alive = [&](const Edge& e) {
        if (removed.count(e)) return false;
        return decided.count(e) != 0 || psi_at(ub, e) >= k;
    };

    int stalled_passes = 0;
    bool fall_back = false;
    for (;;) {
        std::set<Edge> untested;
        for (const Edge& e : cands)
            if (is_alive(e)) untested.insert(e);
        if (untested.empty()) break;

        std::size_t pass_removed = 0;
        bool aborted = false;
        std::size_t offset = 0;
        std::size_t stall = 0;
        while (!untested.empty()) {
            // Covering parts seeded from the untested edges co-locate their
            // endpoints; one scatter pass then hands every part its slice
            // of the surviving universe.
            std::map<VertexId, std::vector<VertexId>> adjmap;
            for (const Edge& e : h.graph.edges()) {
                if (!s_alive(e)) continue;
                adjmap[e.u].push_back(e.v);
                adjmap[e.v].push_back(e.u);
            }
            for (auto& [v, nv] : adjmap) std::sort(nv.begin(), nv.end());
            std::vector<Edge> targets(untested.begin(), untested.end());
            auto parts = partition_covering(adjmap, targets, budget, offset);
            auto buckets = scatter_records(
                hstore, parts,
                [&s_alive](const StoreRecord& r) { return s_alive(r.e); },
                env);
            std::size_t before = untested.size();
            for (std::size_t pi = 0; pi < parts.size(); ++pi) {
                std::unordered_set<VertexId> pset(parts[pi].begin(),
                                                  parts[pi].end());
                // The slice is re-filtered at use: an earlier part of this
                // round may have removed shared edges after the scatter.
                std::vector<Edge> fs;
                for (const StoreRecord& r : buckets[pi])
                    if (s_alive(r.e)) fs.push_back(r.e);
                auto f_cand = [&pset, &cands](const Edge& e) {
                    return pset.count(e.u) != 0 && pset.count(e.v) != 0 &&
                           cands.count(e) != 0;
                };
                for (const Edge& e : fs)
                    if (f_cand(e)) untested.erase(e);
                for (const Edge& e : peel_edges(fs, f_cand, k - 3)) {
                    removed.insert(e);
                    ++pass_removed;
                }
            }
            if (untested.size() == before) {
                ++offset;
                ++stall;
                if (stall > 8) {
                    aborted = true;
                    break;
                }
            } else {
                stall = 0;
            }
        }

        if (aborted) {
            if (pass_removed == 0)
                ++stalled_passes;
            else
                stalled_passes = 0;
            if (stalled_passes >= 5) {
                fall_back = true;
                break;
            }
        } else {
            if (pass_removed == 0) break; // complete pass, nothing removed
            stalled_passes = 0;
        }
        hstore.rewrite([&](const StoreRecord& r) -> std::optional<StoreRecord> {
            if (is_alive(r.e)) return r;
            return std::nullopt;
        });
    }

    if (fall_back) {
        // Naive strategy: one scan per support check, removals one by one.
        for (;;) {
            bool any = false;
            std::vector<Edge> todo;
            for (const Edge& e : cands)
                if (is_alive(e)) todo.push_back(e);
            for (const Edge& e : todo) {
                if (!is_alive(e)) continue;
                std::unordered_set<VertexId> su;
                std::unordered_set<VertexId> sv;
                hstore.scan([&](const StoreRecord& r) {
                    if (!s_alive(r.e)) return;
                    if (r.e.u == e.u) su.insert(r.e.v);
                    if (r.e.v == e.u) su.insert(r.e.u);
                    if (r.e.u == e.v) sv.insert(r.e.v);
                    if (r.e.v == e.v) sv.insert(r.e.u);
                });
                int sup = 0;
                for (VertexId w : su)
                    if (w != e.v && sv.count(w)) ++sup;
                if (sup < k - 2) {
                    removed.insert(e);
                    any = true;
                }
            }
            if (!any) break;
        }
    }

    std::vector<Edge> cls;
    for (const Edge& e : cands)
        if (is_alive(e)) cls.push_back(e);
    decided.insert(cls.begin(), cls.end());
    prune_decided(store, decided, budget);
    if (!env.dir.empty()) std::filesystem::remove(hstore.path());
    return cls;
}

TrussLabeling decompose_topdown(const Graph& g, int t,
                                const MemoryBudget& budget) {
    ScanCounter counter;
    StoreEnv env{&counter, ""};
    return decompose_topdown(g, t, budget, env);
}

TrussLabeling decompose_topdown(const Graph& g, int t,
                                const MemoryBudget& budget,
                                const StoreEnv& env, bool use_kinit,
                                const StoreObserver& observer) {
    TrussLabeling out;
    if (g.m() == 0) return out;
    long remaining = t < 0 ? std::numeric_limits<long>::max() : t;
    LowerBoundingResult stage1 = lower_bounding(g, budget, env, nullptr, true);
    ExternalStore& store = stage1.g_new;
    UpperBoundMap ub = upper_bounding(store, budget);
    int k1 = 0;
    for (const auto& [e, p] : ub.psi) k1 = std::max(k1, p);
    std::unordered_set<Edge, EdgeHash> decided;
    int k = k1;

    if (use_kinit && !store.empty() && remaining > 0) {
        // |NS(U_x)| = #(edges with score >= x) + #(vertices with an incident
        // score >= x), where score(e) = max of the endpoints' psi maxima; an
        // edge is in NS(U_x) exactly when one endpoint carries psi >= x.
        // Suffix counts give the smallest x whose neighborhood fits in M;
        // every class from there up falls out of one in-memory run.
        std::map<VertexId, int> psi_max;
        for (const auto& [e, p] : ub.psi) {
            auto bump = [&psi_max, p](VertexId v) {
                auto [it, fresh] = psi_max.try_emplace(v, p);
                if (!fresh && p > it->second) it->second = p;
            };
            bump(e.u);
            bump(e.v);
        }
        std::vector<std::size_t> cnt_e(k1 + 2, 0);
        std::vector<std::size_t> cnt_v(k1 + 2, 0);
        std::map<VertexId, int> tw;
        for (const auto& [e, p] : ub.psi) {
            int score = std::max(psi_max.at(e.u), psi_max.at(e.v));
            ++cnt_e[score];
            auto bump = [&tw, score](VertexId v) {
                auto [it, fresh] = tw.try_emplace(v, score);
                if (!fresh && score > it->second) it->second = score;
            };
            bump(e.u);
            bump(e.v);
        }
        for (const auto& [v, s] : tw) ++cnt_v[s];
        for (int x = k1 - 1; x >= 3; --x) {
            cnt_e[x] += cnt_e[x + 1];
            cnt_v[x] += cnt_v[x + 1];
        }
        int k_init = k1 + 1;
        for (int x = 3; x <= k1; ++x) {
            if (cnt_e[x] + cnt_v[x] <= budget.M) {
                k_init = x;
                break;
            }
        }
        if (k_init <= k1) {
            auto U = candidate_vertices_topdown(store, ub, k_init, decided);
            NeighborhoodSubgraph H = extract_neighborhood(store, U, budget);
            TrussLabeling local = decompose_improved(H.graph);
            // Within NS(U_x) every truss number >= x matches the full
            // graph's, so those classes can be read off directly.
            std::map<int, std::vector<Edge>> by_k;
            for (const auto& [e, p] : local.phi)
                if (p >= k_init) by_k[p].push_back(e);
            for (int kk = k1; kk >= k_init && remaining > 0; --kk) {
                auto it = by_k.find(kk);
                if (it == by_k.end()) continue;
                for (const Edge& e : it->second) {
                    out.phi.emplace(e, kk);
                    decided.insert(e);
                }
                --remaining;
            }
            prune_decided(store, decided, budget);
            if (observer) observer(k_init, store);
            k = k_init - 1;
        }
    }

    while (k >= 3 && remaining > 0 && !store.empty()) {
        auto U = candidate_vertices_topdown(store, ub, k, decided);
        if (U.empty()) {
            --k;
            continue;
        }
        NeighborhoodSubgraph H = extract_neighborhood(store, U, budget);
        std::vector<Edge> cls =
            H.overflow
                ? topdown_class_overbudget(H, k, budget, store, decided, ub,
                                           env)
                : topdown_class(H, k, store, decided, ub, budget);
        if (observer) observer(k, store);
        if (!cls.empty()) {
            for (const Edge& e : cls) out.phi.emplace(e, k);
            --remaining;
        }
        --k;
    }

    if (remaining > 0)
        for (const Edge& e : stage1.phi2) out.phi.emplace(e, 2);
    for (const auto& [e, p] : out.phi) out.k_max = std::max(out.k_max, p);
    return out;
}

} // namespace truss
