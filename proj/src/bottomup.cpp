#include "truss/bottomup.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "truss/errors.hpp"
#include "truss/support.hpp"

namespace truss {

std::vector<Edge> peel_edges(const std::vector<Edge>& edges,
                             const std::function<bool(const Edge&)>& peelable,
                             int max_sup) {
    std::unordered_map<VertexId, std::unordered_set<VertexId>> adj;
    for (const Edge& e : edges) {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    auto common = [&adj](const Edge& e) {
        const auto& su = adj.at(e.u);
        const auto& sv = adj.at(e.v);
        const auto& small = su.size() <= sv.size() ? su : sv;
        const auto& big = su.size() <= sv.size() ? sv : su;
        std::vector<VertexId> out;
        for (VertexId w : small)
            if (big.count(w)) out.push_back(w);
        return out;
    };
    std::unordered_map<Edge, int, EdgeHash> sup;
    for (const Edge& e : edges)
        if (peelable(e)) sup.emplace(e, static_cast<int>(common(e).size()));
    std::set<Edge> work;
    for (const auto& [e, s] : sup)
        if (s <= max_sup) work.insert(e);
    std::unordered_set<Edge, EdgeHash> gone;
    std::vector<Edge> out;
    while (!work.empty()) {
        Edge e = *work.begin();
        work.erase(work.begin());
        if (gone.count(e)) continue;
        for (VertexId w : common(e)) {
            for (const Edge& f : {Edge(e.u, w), Edge(e.v, w)}) {
                auto it = sup.find(f);
                if (it == sup.end() || gone.count(f)) continue;
                if (--it->second <= max_sup) work.insert(f);
            }
        }
        adj.at(e.u).erase(e.v);
        adj.at(e.v).erase(e.u);
        gone.insert(e);
        out.push_back(e);
    }
    std::sort(out.begin(), out.end());
    return out;
}

LowerBoundingResult lower_bounding(const Graph& g, const MemoryBudget& budget,
                                   const StoreEnv& env,
                                   const PartitionHook& hook,
                                   bool record_support) {
    ExternalStore cur = env.make("g_current.tmp");
    {
        std::vector<StoreRecord> init;
        init.reserve(g.m());
        for (const Edge& e : g.edges())
            init.emplace_back(e, 0,
                              record_support ? std::optional<int>{}
                                             : std::optional<int>{0});
        cur.preload(init);
    }
    LowerBoundingResult res{{}, env.make("g_new.current")};
    res.g_new.preload({});

    // Finish the remaining records edge by edge from per-vertex stores: the
    // two endpoint neighborhoods recover each record's remaining support,
    // and credit turns that into the exact original support. The trivial
    // bound 2 stands in for the unavailable local truss numbers, which
    // later stages only use as a lower bound.
    auto finish_remainder = [&]() {
        std::vector<StoreRecord> all;
        std::unordered_map<VertexId, std::vector<StoreRecord>> routed;
        cur.scan([&](const StoreRecord& r) {
            all.push_back(r);
            routed[r.e.u].push_back(r);
            routed[r.e.v].push_back(r);
        });
        std::map<VertexId, ExternalStore> buckets;
        for (auto& [v, recs] : routed) {
            auto [it, fresh] = buckets.emplace(
                v, env.make("adj_" + std::to_string(v) + ".tmp"));
            it->second.preload({});
            it->second.append(recs);
        }
        routed.clear();
        std::vector<StoreRecord> finished;
        for (const StoreRecord& r : all) {
            std::unordered_set<VertexId> nu, nv;
            buckets.at(r.e.u).scan([&](const StoreRecord& s) {
                if (s.e == r.e) return;
                nu.insert(s.e.u == r.e.u ? s.e.v : s.e.u);
            });
            buckets.at(r.e.v).scan([&](const StoreRecord& s) {
                if (s.e == r.e) return;
                nv.insert(s.e.u == r.e.v ? s.e.v : s.e.u);
            });
            int cursup = 0;
            for (VertexId w : nu)
                if (nv.count(w)) ++cursup;
            int orig_sup = r.sup.value_or(0) + cursup;
            if (orig_sup == 0)
                res.phi2.push_back(r.e);
            else if (record_support)
                finished.emplace_back(r.e, orig_sup, std::nullopt);
            else
                finished.emplace_back(r.e, orig_sup,
                                      std::max(r.lb.value_or(0), 2));
        }
        std::sort(finished.begin(), finished.end(),
                  [](const StoreRecord& a, const StoreRecord& b) {
                      return a.e < b.e;
                  });
        res.g_new.append(finished);
        cur.preload({});
        if (!env.dir.empty())
            for (auto& [v, b] : buckets)
                std::filesystem::remove(b.path());
    };

    // The id sweep goes first: it is the cheapest and its outcome is easy to
    // reason about. Once a few rotations in a row intern nothing, or a pass
    // interns only a sliver of the store, the run switches to covering parts
    // seeded from the remaining edges, which pack actual partners together
    // instead of id-adjacent vertices. When even those cannot pay for their
    // passes the run finishes the remainder edge by edge.
    constexpr std::size_t kSweepRetries = 3;
    constexpr std::size_t kCoverRetries = 4;
    std::size_t iteration = 0;
    std::size_t offset = 0;
    std::size_t stalls = 0;
    std::size_t feeble = 0;
    bool covering_mode = false;
    while (!cur.empty()) {
        std::vector<std::vector<VertexId>> parts;
        if (hook) {
            auto injected = hook(iteration);
            if (injected) parts = std::move(*injected);
        }
        if (parts.empty() && !covering_mode)
            parts = partition_vertices(cur, budget, offset);
        if (parts.empty()) {
            // One charged scan yields both the adjacency for the size caps
            // and the remaining edges the parts should make internal.
            std::map<VertexId, std::vector<VertexId>> adjmap;
            std::vector<Edge> targets;
            cur.scan([&](const StoreRecord& r) {
                adjmap[r.e.u].push_back(r.e.v);
                adjmap[r.e.v].push_back(r.e.u);
                targets.push_back(r.e);
            });
            for (auto& [v, nv] : adjmap) std::sort(nv.begin(), nv.end());
            parts = partition_covering(adjmap, targets, budget, offset);
        }
        // A partition of lone vertices cannot make any edge internal; skip
        // the extraction and go straight to the stall handling.
        bool pairable = false;
        for (const auto& p : parts)
            if (p.size() >= 2) pairable = true;
        std::size_t before = cur.record_count();

        std::unordered_map<Edge, int, EdgeHash> lb_seen;
        std::unordered_map<Edge, int, EdgeHash> credit_delta;
        std::unordered_set<Edge, EdgeHash> dropped;
        std::vector<StoreRecord> outgoing;
        std::vector<Edge> phi2_iter;

        std::vector<NeighborhoodSubgraph> nss;
        if (pairable) nss = extract_neighborhoods(cur, parts, budget, env);
        for (const NeighborhoodSubgraph& ns : nss) {
            if (ns.graph.m() == 0) continue;
            if (ns.overflow)
                throw budget_infeasible_error(
                    "vertex partition produced an over-budget part");
            TrussLabeling local = decompose_improved(ns.graph);
            SupportMap lsup = compute_support(ns.graph);
            for (const StoreRecord& rec : ns.records) {
                int lphi = local.at(rec.e);
                if (!record_support) {
                    auto [it, fresh] = lb_seen.try_emplace(rec.e, lphi);
                    if (!fresh && lphi > it->second) it->second = lphi;
                }
                if (!ns.is_internal(rec.e)) continue;
                dropped.insert(rec.e);
                // Credit plus the support inside the shrunken graph is the
                // edge's support in the original graph.
                int orig_sup = rec.sup.value_or(0) + lsup.at(rec.e);
                if (orig_sup == 0) {
                    phi2_iter.push_back(rec.e);
                } else if (record_support) {
                    outgoing.emplace_back(rec.e, orig_sup, std::nullopt);
                } else {
                    // Keeping the exact support beside the bound lets the
                    // class walk steer and maintain supports without ever
                    // recounting them.
                    outgoing.emplace_back(
                        rec.e, orig_sup,
                        std::max(rec.lb.value_or(0), lphi));
                }
                // A triangle with this as its only internal edge survives as
                // two cross edges; give each a credit for the lost triangle.
                const auto& nu = ns.graph.neighbors(rec.e.u);
                const auto& nv = ns.graph.neighbors(rec.e.v);
                std::size_t i = 0, j = 0;
                while (i < nu.size() && j < nv.size()) {
                    if (nu[i] < nv[j]) {
                        ++i;
                    } else if (nv[j] < nu[i]) {
                        ++j;
                    } else {
                        VertexId w = nu[i];
                        if (!ns.is_internal(w)) {
                            ++credit_delta[Edge(rec.e.u, w)];
                            ++credit_delta[Edge(rec.e.v, w)];
                        }
                        ++i;
                        ++j;
                    }
                }
            }
        }

        if (dropped.empty() && phi2_iter.empty()) {
            // Every part came out with cross edges only. Rotate the sweep a
            // few times, then move to covering parts; only when those also
            // keep failing does the budget leave no room to pair the stuck
            // vertices, so finish the remainder edge by edge.
            ++offset;
            ++stalls;
            if (stalls > kSweepRetries) covering_mode = true;
            if (stalls <= kSweepRetries + kCoverRetries) continue;
            finish_remainder();
            break;
        }
        stalls = 0;
        // A pass that interned only a sliver of the store keeps paying full
        // passes for little shrinkage; sweep rotations on such graphs never
        // regroup distant pairs. Covering parts regroup around whatever
        // edges remain, so switch over for the rest of the run.
        if (!covering_mode && dropped.size() * 8 < before)
            covering_mode = true;
        // When even covering parts cannot intern a worthwhile share - the
        // budget admits only degenerate parts - per-pass progress costs more
        // scanning than finishing each edge individually would.
        else if (covering_mode && dropped.size() * 16 < before)
            ++feeble;

        cur.rewrite([&](const StoreRecord& r) -> std::optional<StoreRecord> {
            if (dropped.count(r.e)) return std::nullopt;
            StoreRecord out = r;
            auto c = credit_delta.find(r.e);
            if (c != credit_delta.end())
                out.sup = out.sup.value_or(0) + c->second;
            if (!record_support) {
                auto l = lb_seen.find(r.e);
                if (l != lb_seen.end())
                    out.lb = std::max(out.lb.value_or(0), l->second);
            }
            return out;
        });
        std::sort(outgoing.begin(), outgoing.end(),
                  [](const StoreRecord& a, const StoreRecord& b) {
                      return a.e < b.e;
                  });
        res.g_new.append(outgoing);
        res.phi2.insert(res.phi2.end(), phi2_iter.begin(), phi2_iter.end());
        ++iteration;
        if (feeble >= 2) {
            finish_remainder();
            break;
        }
    }
    std::sort(res.phi2.begin(), res.phi2.end());
    if (!env.dir.empty()) std::filesystem::remove(cur.path());
    return res;
}

std::vector<VertexId> candidate_vertices_bottomup(const ExternalStore& store,
                                                  int k, int* min_lb_beyond) {
    std::set<VertexId> uset;
    int beyond = -1;
    store.scan([&](const StoreRecord& r) {
        if (!r.lb)
            throw argument_error("store record is missing its lb annotation");
        if (*r.lb <= k) {
            uset.insert(r.e.u);
            uset.insert(r.e.v);
        } else if (beyond == -1 || *r.lb < beyond) {
            beyond = *r.lb;
        }
    });
    if (min_lb_beyond) *min_lb_beyond = beyond;
    return std::vector<VertexId>(uset.begin(), uset.end());
}

std::vector<VertexId> candidate_vertices_bottomup(const ExternalStore& store,
                                                  int k) {
    return candidate_vertices_bottomup(store, k, nullptr);
}

namespace {

// Drops a peeled class from the store and refreshes the support
// annotations in the same pass. Every triangle of a removed internal edge
// lies inside H (its sides touch the candidate vertices), so the lost
// triangles - deduplicated, since one triangle may lose several edges at
// once - pinpoint exactly which surviving records shed support.
void apply_class_removal(ExternalStore& store, const Graph& hgraph,
                         const std::vector<Edge>& cls) {
    std::unordered_set<Edge, EdgeHash> dead(cls.begin(), cls.end());
    std::set<std::array<VertexId, 3>> lost;
    for (const Edge& e : cls) {
        const auto& nu = hgraph.neighbors(e.u);
        const auto& nv = hgraph.neighbors(e.v);
        std::size_t i = 0, j = 0;
        while (i < nu.size() && j < nv.size()) {
            if (nu[i] < nv[j]) {
                ++i;
            } else if (nv[j] < nu[i]) {
                ++j;
            } else {
                std::array<VertexId, 3> t{e.u, e.v, nu[i]};
                std::sort(t.begin(), t.end());
                lost.insert(t);
                ++i;
                ++j;
            }
        }
    }
    std::unordered_map<Edge, int, EdgeHash> delta;
    for (const auto& t : lost)
        for (const Edge& f :
             {Edge(t[0], t[1]), Edge(t[0], t[2]), Edge(t[1], t[2])})
            if (!dead.count(f)) ++delta[f];
    store.rewrite([&](const StoreRecord& r) -> std::optional<StoreRecord> {
        if (dead.count(r.e)) return std::nullopt;
        auto d = delta.find(r.e);
        if (d == delta.end() || !r.sup) return r;
        StoreRecord out = r;
        out.sup = *r.sup - d->second;
        return out;
    });
}

} // namespace

std::vector<Edge> bottomup_class(const NeighborhoodSubgraph& h, int k,
                                 ExternalStore& store,
                                 const MemoryBudget& budget) {
    (void)budget;
    std::vector<Edge> cls = peel_edges(
        h.graph.edges(), [&h](const Edge& e) { return h.is_internal(e); },
        k - 2);
    apply_class_removal(store, h.graph, cls);
    return cls;
}

std::vector<Edge> bottomup_class_overbudget(const NeighborhoodSubgraph& h,
                                            int k, const MemoryBudget& budget,
                                            ExternalStore& store,
                                            const StoreEnv& env) {
    (void)budget;
    // H exceeds M, so its records are split once into per-vertex adjacency
    // stores: bucket(v) holds every record incident to v. A single peel then
    // needs only the two endpoint buckets - at most two neighborhoods, which
    // the per-vertex feasibility floor keeps within budget - instead of a
    // pass over all of H. In-memory mirrors of the adjacency and the record
    // supports track the cascade between bucket reads, standing in for the
    // annotation rewrites a disk layout would fold into the same passes.
    std::unordered_map<VertexId, std::vector<StoreRecord>> routed;
    for (const StoreRecord& r : h.records) {
        routed[r.e.u].push_back(r);
        routed[r.e.v].push_back(r);
    }
    std::map<VertexId, ExternalStore> buckets;
    for (auto& [v, recs] : routed) {
        auto [it, fresh] =
            buckets.emplace(v, env.make("adj_" + std::to_string(v) + ".tmp"));
        it->second.preload({});
        it->second.append(recs);
    }
    routed.clear();

    std::unordered_map<VertexId, std::unordered_set<VertexId>> alive;
    for (const auto& [v, nv] : h.graph.adjacency())
        alive.emplace(v, std::unordered_set<VertexId>(nv.begin(), nv.end()));
    auto is_alive = [&alive](const Edge& e) {
        auto it = alive.find(e.u);
        return it != alive.end() && it->second.count(e.v) != 0;
    };

    std::unordered_map<Edge, int, EdgeHash> sup;
    for (const StoreRecord& r : h.records) {
        if (!r.sup)
            throw argument_error(
                "store record is missing its support annotation");
        sup.emplace(r.e, *r.sup);
    }
    std::unordered_set<Edge, EdgeHash> internal(h.internal_edges.begin(),
                                                h.internal_edges.end());

    // Every alive internal edge at or below the threshold must peel. The
    // store supports are exact for internal edges because all their
    // triangles lie inside H, so the worklist never peels an edge early and
    // is empty exactly when the class is complete.
    std::set<Edge> work;
    for (const Edge& e : h.internal_edges)
        if (sup.at(e) <= k - 2) work.insert(e);

    // Stale-record counts drive bucket compaction: once more than half of a
    // bucket is dead it is rewritten before the next read, so the charge for
    // reading a neighborhood tracks its live size at amortized constant
    // overhead per removal.
    std::unordered_map<VertexId, std::size_t> stale;
    std::vector<Edge> emitted;
    // Peel in waves: every currently violating edge forms the wave, the
    // wave's endpoint buckets are read once, and the wave is then processed
    // in order against the live adjacency, so one bucket read serves every
    // wave edge touching that vertex. Edges that start violating mid-wave
    // simply wait for the next wave. The outcome matches one-at-a-time
    // peeling because the loaded lists are rechecked against the live
    // adjacency at use.
    while (!work.empty()) {
        std::vector<Edge> wave(work.begin(), work.end());
        std::set<VertexId> wverts;
        for (const Edge& e : wave) {
            wverts.insert(e.u);
            wverts.insert(e.v);
        }
        std::unordered_map<VertexId, std::vector<VertexId>> fadj;
        for (VertexId v : wverts) {
            ExternalStore& bucket = buckets.at(v);
            if (2 * stale[v] > bucket.record_count()) {
                bucket.rewrite(
                    [&is_alive](const StoreRecord& r)
                        -> std::optional<StoreRecord> {
                        if (is_alive(r.e)) return r;
                        return std::nullopt;
                    });
                stale[v] = 0;
            }
            auto& nbrs = fadj[v];
            bucket.scan([&](const StoreRecord& r) {
                if (!is_alive(r.e)) return;
                nbrs.push_back(r.e.u == v ? r.e.v : r.e.u);
            });
        }
        for (const Edge& e : wave) {
            const auto& lu = fadj.at(e.u);
            const auto& lv = fadj.at(e.v);
            bool u_small = lu.size() <= lv.size();
            const auto& shorter = u_small ? lu : lv;
            const auto& an = alive.at(u_small ? e.u : e.v);
            const auto& bn = alive.at(u_small ? e.v : e.u);
            std::vector<VertexId> commons;
            for (VertexId w : shorter)
                if (w != e.u && w != e.v && an.count(w) && bn.count(w))
                    commons.push_back(w);
            // Each destroyed triangle costs its two surviving sides one
            // support; internal sides reaching the threshold join the
            // worklist.
            for (VertexId w : commons) {
                for (const Edge& f : {Edge(e.u, w), Edge(e.v, w)}) {
                    auto it = sup.find(f);
                    if (it == sup.end()) continue;
                    --it->second;
                    if (it->second <= k - 2 && internal.count(f) &&
                        is_alive(f))
                        work.insert(f);
                }
            }
            alive.at(e.u).erase(e.v);
            alive.at(e.v).erase(e.u);
            ++stale[e.u];
            ++stale[e.v];
            work.erase(e);
            sup.erase(e);
            emitted.push_back(e);
        }
    }

    // One rewrite drops the class and refreshes every surviving record's
    // support annotation from the maintained values.
    std::unordered_set<Edge, EdgeHash> dead(emitted.begin(), emitted.end());
    store.rewrite([&](const StoreRecord& r) -> std::optional<StoreRecord> {
        if (dead.count(r.e)) return std::nullopt;
        auto it = sup.find(r.e);
        if (it == sup.end() || !r.sup) return r;
        StoreRecord out = r;
        out.sup = it->second;
        return out;
    });
    if (!env.dir.empty())
        for (auto& [v, b] : buckets) std::filesystem::remove(b.path());
    std::sort(emitted.begin(), emitted.end());
    return emitted;
}

namespace {

// Everything the class walk needs to place k, gathered in one scan: the
// candidate vertices at the current value, the smallest bound past it, and
// the smallest surviving support annotation (or -1 when any is missing).
struct CandidateScan {
    std::vector<VertexId> u;
    int min_lb_beyond = -1;
    int min_sup = -1;
};

CandidateScan scan_candidates(const ExternalStore& store, int k) {
    CandidateScan out;
    std::set<VertexId> uset;
    bool all_sup = true;
    int msup = -1;
    store.scan([&](const StoreRecord& r) {
        if (!r.lb)
            throw argument_error("store record is missing its lb annotation");
        if (*r.lb <= k) {
            uset.insert(r.e.u);
            uset.insert(r.e.v);
        } else if (out.min_lb_beyond == -1 || *r.lb < out.min_lb_beyond) {
            out.min_lb_beyond = *r.lb;
        }
        if (!r.sup)
            all_sup = false;
        else if (msup == -1 || *r.sup < msup)
            msup = *r.sup;
    });
    out.u.assign(uset.begin(), uset.end());
    if (all_sup) out.min_sup = msup;
    return out;
}

} // namespace

TrussLabeling decompose_bottomup(const Graph& g, const MemoryBudget& budget) {
    ScanCounter counter;
    StoreEnv env{&counter, ""};
    return decompose_bottomup(g, budget, env, nullptr);
}

TrussLabeling decompose_bottomup(const Graph& g, const MemoryBudget& budget,
                                 const StoreEnv& env,
                                 const PartitionHook& hook) {
    TrussLabeling out;
    if (g.m() == 0) return out;
    LowerBoundingResult lb = lower_bounding(g, budget, env, hook, false);
    for (const Edge& e : lb.phi2) out.phi.emplace(e, 2);
    ExternalStore& store = lb.g_new;
    int k = 3;
    while (!store.empty()) {
        CandidateScan cand = scan_candidates(store, k);
        if (cand.u.empty()) {
            // Every stored edge is bounded past k; jump to the smallest
            // bound that still occurs, or further if the supports allow.
            k = cand.min_lb_beyond;
            if (cand.min_sup >= 0) k = std::max(k, cand.min_sup + 2);
            continue;
        }
        if (cand.min_sup >= 0 && cand.min_sup > k - 2) {
            // The store holds exactly the k-truss and its supports are
            // current, so an edge peeled at j would need support j-2 or
            // lower: every class before min_sup + 2 is empty.
            k = std::max(k + 1, cand.min_sup + 2);
            continue;
        }
        NeighborhoodSubgraph h = extract_neighborhood(store, cand.u, budget);
        std::vector<Edge> cls =
            h.overflow ? bottomup_class_overbudget(h, k, budget, store, env)
                       : bottomup_class(h, k, store, budget);
        for (const Edge& e : cls) out.phi.emplace(e, k);
        ++k;
    }
    for (const auto& [e, p] : out.phi) out.k_max = std::max(out.k_max, p);
    return out;
}

} // namespace truss
