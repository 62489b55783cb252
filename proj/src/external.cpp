#include "truss/external.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "truss/errors.hpp"

namespace truss {

MemoryBudget::MemoryBudget(std::size_t m, std::size_t b) : M(m), B(b) {
    if (b < 1)
        throw argument_error("block size must be at least 1");
    if (2 * b > m)
        throw argument_error("block size " + std::to_string(b) +
                             " exceeds half the memory budget " +
                             std::to_string(m));
}

std::string format_record(const StoreRecord& r) {
    std::string out =
        std::to_string(r.e.u) + ' ' + std::to_string(r.e.v);
    if (r.sup) out += " s=" + std::to_string(*r.sup);
    if (r.lb) out += " lb=" + std::to_string(*r.lb);
    return out;
}

StoreRecord parse_record(const std::string& line, std::size_t lineno) {
    std::istringstream fields(line);
    unsigned long long u = 0, v = 0;
    if (!(fields >> u >> v))
        throw parse_error(lineno, "expected \"u v\" at the start of a record");
    if (u > 0xffffffffULL || v > 0xffffffffULL)
        throw parse_error(lineno, "vertex id out of range");
    StoreRecord r(Edge(static_cast<VertexId>(u), static_cast<VertexId>(v)));
    std::string tok;
    while (fields >> tok) {
        int value = 0;
        try {
            if (tok.rfind("s=", 0) == 0)
                value = std::stoi(tok.substr(2));
            else if (tok.rfind("lb=", 0) == 0)
                value = std::stoi(tok.substr(3));
            else
                throw parse_error(lineno, "unknown record field \"" + tok + "\"");
        } catch (const parse_error&) {
            throw;
        } catch (const std::exception&) {
            throw parse_error(lineno, "malformed record field \"" + tok + "\"");
        }
        if (tok[0] == 's')
            r.sup = value;
        else
            r.lb = value;
    }
    return r;
}

ExternalStore ExternalStore::in_memory(ScanCounter* counter) {
    ExternalStore s;
    s.file_ = false;
    s.counter_ = counter;
    return s;
}

ExternalStore StoreEnv::make(const std::string& name) const {
    if (dir.empty()) return ExternalStore::in_memory(counter);
    std::filesystem::create_directories(dir);
    return ExternalStore::file_backed(dir + "/" + name, counter);
}

ExternalStore ExternalStore::file_backed(const std::string& path,
                                         ScanCounter* counter) {
    ExternalStore s;
    s.file_ = true;
    s.path_ = path;
    s.counter_ = counter;
    if (std::filesystem::exists(path)) {
        std::size_t n = 0;
        std::ifstream in(path, std::ios::binary);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) ++n;
        s.count_ = n;
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw error("cannot create store file " + path);
    }
    return s;
}

std::vector<StoreRecord> ExternalStore::read_all() const {
    if (!file_) return mem_;
    std::vector<StoreRecord> out;
    out.reserve(count_);
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw error("cannot open store file " + path_);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        out.push_back(parse_record(line, lineno));
    }
    return out;
}

void ExternalStore::write_all(const std::vector<StoreRecord>& records) {
    if (!file_) {
        mem_ = records;
        count_ = records.size();
        return;
    }
    std::string tmp = path_ + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw error("cannot open store file " + tmp);
        for (const auto& r : records) out << format_record(r) << '\n';
    }
    std::filesystem::rename(tmp, path_);
    count_ = records.size();
}

void ExternalStore::preload(const std::vector<StoreRecord>& records) {
    write_all(records);
}

void ExternalStore::scan(
    const std::function<void(const StoreRecord&)>& fn) const {
    std::vector<StoreRecord> all = read_all();
    if (counter_) {
        counter_->records_read += all.size();
        counter_->full_scans += 1;
    }
    for (const auto& r : all) fn(r);
}

void ExternalStore::append(const std::vector<StoreRecord>& records) {
    if (counter_) counter_->records_written += records.size();
    if (!file_) {
        mem_.insert(mem_.end(), records.begin(), records.end());
        count_ = mem_.size();
        return;
    }
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw error("cannot open store file " + path_);
    for (const auto& r : records) out << format_record(r) << '\n';
    count_ += records.size();
}

std::size_t ExternalStore::rewrite(
    const std::function<std::optional<StoreRecord>(const StoreRecord&)>& fn) {
    std::vector<StoreRecord> all = read_all();
    if (counter_) {
        counter_->records_read += all.size();
        counter_->full_scans += 1;
    }
    std::vector<StoreRecord> kept;
    kept.reserve(all.size());
    for (const auto& r : all) {
        auto out = fn(r);
        if (out) kept.push_back(*out);
    }
    if (counter_) counter_->records_written += kept.size();
    write_all(kept);
    return kept.size();
}

std::vector<StoreRecord> ExternalStore::snapshot() const { return read_all(); }

namespace {

// Shared sweep over (vertex, degree, neighbors) data.
std::vector<std::vector<VertexId>> sweep_partition(
    const std::vector<VertexId>& verts,
    const std::function<const std::vector<VertexId>&(VertexId)>& nbrs,
    std::size_t total_size, const MemoryBudget& budget, std::size_t offset) {
    if (total_size <= budget.M && !verts.empty())
        return {verts};
    std::vector<std::vector<VertexId>> parts;
    std::vector<VertexId> part;
    std::size_t edge_sum = 0;
    std::unordered_set<VertexId> closure;
    for (std::size_t idx = 0; idx < verts.size(); ++idx) {
        VertexId v = verts[(idx + offset) % verts.size()];
        const auto& nv = nbrs(v);
        if (2 * nv.size() + 1 > budget.M)
            throw budget_infeasible_error(
                v, "neighborhood of vertex " + std::to_string(v) + " needs " +
                       std::to_string(2 * nv.size() + 1) +
                       " units but the budget is " + std::to_string(budget.M));
        // Bound after adding v: incident-edge sum plus the closure's vertex
        // count, an upper bound on |NS(part)|.
        std::size_t cand_edges = edge_sum + nv.size();
        std::size_t cand_verts = closure.size() + (closure.count(v) ? 0 : 1);
        for (VertexId w : nv)
            if (!closure.count(w) && w != v) ++cand_verts;
        if (!part.empty() && cand_edges + cand_verts > budget.M) {
            parts.push_back(part);
            part.clear();
            edge_sum = 0;
            closure.clear();
        }
        part.push_back(v);
        edge_sum += nv.size();
        closure.insert(v);
        for (VertexId w : nv) closure.insert(w);
    }
    if (!part.empty()) parts.push_back(part);
    for (auto& p : parts) std::sort(p.begin(), p.end());
    return parts;
}

} // namespace

std::vector<std::vector<VertexId>> partition_vertices(
    const Graph& g, const MemoryBudget& budget, std::size_t offset) {
    std::vector<VertexId> verts = g.vertices();
    auto nbrs = [&g](VertexId v) -> const std::vector<VertexId>& {
        return g.neighbors(v);
    };
    return sweep_partition(verts, nbrs, g.size(), budget, offset);
}

std::vector<std::vector<VertexId>> partition_vertices(
    const ExternalStore& store, const MemoryBudget& budget,
    std::size_t offset) {
    // One charged scan builds the adjacency needed by the sweep.
    std::map<VertexId, std::vector<VertexId>> adj;
    store.scan([&adj](const StoreRecord& r) {
        adj[r.e.u].push_back(r.e.v);
        adj[r.e.v].push_back(r.e.u);
    });
    std::vector<VertexId> verts;
    verts.reserve(adj.size());
    for (auto& [v, nv] : adj) {
        std::sort(nv.begin(), nv.end());
        verts.push_back(v);
    }
    auto nbrs = [&adj](VertexId v) -> const std::vector<VertexId>& {
        return adj.at(v);
    };
    return sweep_partition(verts, nbrs, store.record_count() + adj.size(),
                           budget, offset);
}

std::vector<std::vector<VertexId>> partition_vertices(
    const std::map<VertexId, std::vector<VertexId>>& adj,
    const std::vector<VertexId>& verts, std::size_t total_size,
    const MemoryBudget& budget, std::size_t offset) {
    static const std::vector<VertexId> kNone;
    auto nbrs = [&adj](VertexId v) -> const std::vector<VertexId>& {
        auto it = adj.find(v);
        return it == adj.end() ? kNone : it->second;
    };
    return sweep_partition(verts, nbrs, total_size, budget, offset);
}

namespace {

NeighborhoodSubgraph build_ns(const std::vector<VertexId>& U,
                              std::vector<StoreRecord> selected,
                              const MemoryBudget& budget) {
    NeighborhoodSubgraph ns;
    ns.internal_vertices = U;
    std::sort(ns.internal_vertices.begin(), ns.internal_vertices.end());
    ns.internal_set.insert(U.begin(), U.end());
    std::sort(selected.begin(), selected.end(),
              [](const StoreRecord& a, const StoreRecord& b) {
                  return a.e < b.e;
              });
    ns.records = std::move(selected);
    for (const auto& r : ns.records) {
        ns.graph.add_edge(r.e.u, r.e.v);
        if (ns.is_internal(r.e))
            ns.internal_edges.push_back(r.e);
        else
            ns.external_edges.push_back(r.e);
    }
    // Internal vertices with no incident edge still belong to the subgraph.
    for (VertexId v : ns.internal_vertices) ns.graph.add_vertex(v);
    ns.overflow = ns.size() > budget.M;
    return ns;
}

} // namespace

NeighborhoodSubgraph extract_neighborhood(const Graph& g,
                                          const std::vector<VertexId>& U,
                                          const MemoryBudget& budget) {
    std::unordered_set<VertexId> in(U.begin(), U.end());
    std::vector<StoreRecord> selected;
    for (const Edge& e : g.edges())
        if (in.count(e.u) || in.count(e.v)) selected.emplace_back(e);
    return build_ns(U, std::move(selected), budget);
}

NeighborhoodSubgraph extract_neighborhood(const ExternalStore& store,
                                          const std::vector<VertexId>& U,
                                          const MemoryBudget& budget) {
    std::unordered_set<VertexId> in(U.begin(), U.end());
    std::vector<StoreRecord> selected;
    store.scan([&](const StoreRecord& r) {
        if (in.count(r.e.u) || in.count(r.e.v)) selected.push_back(r);
    });
    return build_ns(U, std::move(selected), budget);
}

std::vector<std::vector<StoreRecord>> scatter_records(
    const ExternalStore& store, const std::vector<std::vector<VertexId>>& parts,
    const std::function<bool(const StoreRecord&)>& keep, const StoreEnv& env) {
    std::unordered_map<VertexId, std::size_t> home;
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (VertexId v : parts[i]) home.emplace(v, i);
    std::vector<std::vector<StoreRecord>> routed(parts.size());
    store.scan([&](const StoreRecord& r) {
        if (keep && !keep(r)) return;
        auto iu = home.find(r.e.u);
        auto iv = home.find(r.e.v);
        if (iu != home.end()) routed[iu->second].push_back(r);
        if (iv != home.end() && (iu == home.end() || iv->second != iu->second))
            routed[iv->second].push_back(r);
    });
    // The round trip through real bucket stores charges the split the same
    // as the per-part files it stands for.
    static std::size_t serial = 0;
    std::vector<std::vector<StoreRecord>> out(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (routed[i].empty()) continue;
        ExternalStore bucket =
            env.make("bucket_" + std::to_string(serial++) + ".tmp");
        bucket.preload({});
        bucket.append(routed[i]);
        bucket.scan([&out, i](const StoreRecord& r) { out[i].push_back(r); });
        if (!env.dir.empty()) std::filesystem::remove(bucket.path());
    }
    return out;
}

std::vector<NeighborhoodSubgraph> extract_neighborhoods(
    const ExternalStore& store, const std::vector<std::vector<VertexId>>& parts,
    const MemoryBudget& budget, const StoreEnv& env) {
    std::vector<std::vector<StoreRecord>> buckets =
        scatter_records(store, parts, nullptr, env);
    std::vector<NeighborhoodSubgraph> out;
    out.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i)
        out.push_back(build_ns(parts[i], std::move(buckets[i]), budget));
    return out;
}

std::vector<std::vector<VertexId>> partition_covering(
    const std::map<VertexId, std::vector<VertexId>>& adj,
    const std::vector<Edge>& targets, const MemoryBudget& budget,
    std::size_t offset) {
    std::map<VertexId, std::vector<VertexId>> tadj;
    for (const Edge& e : targets) {
        tadj[e.u].push_back(e.v);
        tadj[e.v].push_back(e.u);
    }
    std::vector<VertexId> seeds;
    seeds.reserve(tadj.size());
    for (auto& [v, nv] : tadj) {
        std::sort(nv.begin(), nv.end());
        seeds.push_back(v);
    }
    // Heavy target endpoints first: their stars are the hardest to co-locate
    // once other parts have claimed their partners.
    std::stable_sort(seeds.begin(), seeds.end(),
                     [&tadj](VertexId a, VertexId b) {
                         return tadj.at(a).size() > tadj.at(b).size();
                     });
    static const std::vector<VertexId> kNone;
    auto nbrs = [&adj](VertexId v) -> const std::vector<VertexId>& {
        auto it = adj.find(v);
        return it == adj.end() ? kNone : it->second;
    };
    std::unordered_set<VertexId> assigned;
    std::vector<std::vector<VertexId>> parts;
    for (std::size_t idx = 0; idx < seeds.size(); ++idx) {
        VertexId u = seeds[(idx + offset) % seeds.size()];
        if (assigned.count(u)) continue;
        const auto& nu = nbrs(u);
        if (2 * nu.size() + 1 > budget.M)
            throw budget_infeasible_error(
                u, "neighborhood of vertex " + std::to_string(u) + " needs " +
                       std::to_string(2 * nu.size() + 1) +
                       " units but the budget is " + std::to_string(budget.M));
        std::vector<VertexId> part{u};
        assigned.insert(u);
        std::size_t edge_sum = nu.size();
        std::unordered_set<VertexId> closure(nu.begin(), nu.end());
        closure.insert(u);
        for (VertexId v : tadj.at(u)) {
            if (assigned.count(v)) continue;
            const auto& nv = nbrs(v);
            std::size_t cand_edges = edge_sum + nv.size();
            std::size_t cand_verts =
                closure.size() + (closure.count(v) ? 0 : 1);
            for (VertexId w : nv)
                if (!closure.count(w) && w != v) ++cand_verts;
            if (cand_edges + cand_verts > budget.M) continue;
            part.push_back(v);
            edge_sum += nv.size();
            closure.insert(v);
            for (VertexId w : nv) closure.insert(w);
            assigned.insert(v);
        }
        std::sort(part.begin(), part.end());
        parts.push_back(std::move(part));
    }
    return parts;
}

void rewrite_filtered(ExternalStore& store, const std::vector<Edge>& drop,
                      const MemoryBudget& budget) {
    std::size_t chunk = budget.M;
    std::size_t chunks = drop.empty() ? 1 : (drop.size() + chunk - 1) / chunk;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::unordered_set<Edge, EdgeHash> dead;
        std::size_t lo = c * chunk;
        std::size_t hi = std::min(drop.size(), lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) dead.insert(drop[i]);
        store.rewrite([&dead](const StoreRecord& r)
                          -> std::optional<StoreRecord> {
            if (dead.count(r.e)) return std::nullopt;
            return r;
        });
    }
}

ScanReport scan_report(const ScanCounter& c, std::size_t graph_size,
                       const MemoryBudget& budget) {
    ScanReport r;
    r.records_read = c.records_read;
    r.records_written = c.records_written;
    r.full_scans = c.full_scans;
    r.graph_size = graph_size;
    r.budget_m = budget.M;
    r.budget_b = budget.B;
    if (graph_size > 0)
        r.full_scan_equivalents =
            static_cast<double>(c.records_read) / static_cast<double>(graph_size);
    r.m_over_m_budget =
        static_cast<double>(graph_size) / static_cast<double>(budget.M);
    return r;
}

std::string ScanReport::to_text() const {
    std::ostringstream out;
    out << "records_read=" << records_read << '\n'
        << "records_written=" << records_written << '\n'
        << "full_scans=" << full_scans << '\n'
        << "graph_size=" << graph_size << '\n'
        << "budget_m=" << budget_m << '\n'
        << "budget_b=" << budget_b << '\n'
        << "full_scan_equivalents=" << full_scan_equivalents << '\n'
        << "m_over_budget=" << m_over_m_budget << '\n';
    return out.str();
}

} // namespace truss
