#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "kgcx/random.hpp"
#include "kgcx/structural.hpp"

namespace kgcx {

double modularity(const SimpleGraph& g, std::span<const std::uint32_t> community) {
    if (community.size() != g.num_nodes()) throw std::invalid_argument("partition size does not match graph");
    const double m = static_cast<double>(g.num_edges());
    if (m == 0.0) return 0.0;
    const std::uint32_t count = community.empty() ? 0 : *std::max_element(community.begin(), community.end()) + 1;
    std::vector<double> internal(count, 0.0);
    std::vector<double> degree(count, 0.0);
    for (std::uint32_t u = 0; u < g.num_nodes(); ++u) {
        degree[community[u]] += static_cast<double>(g.degree(u));
        for (auto v : g.neighbors(u)) {
            if (u < v && community[u] == community[v]) internal[community[u]] += 1.0;
        }
    }
    double q = 0.0;
    for (std::uint32_t c = 0; c < count; ++c) {
        const double frac = degree[c] / (2.0 * m);
        q += internal[c] / m - frac * frac;
    }
    return q;
}

double community_entropy(std::span<const std::uint32_t> community) {
    if (community.empty()) return 0.0;
    const std::uint32_t count = *std::max_element(community.begin(), community.end()) + 1;
    std::vector<std::size_t> size(count, 0);
    for (auto c : community) ++size[c];
    double h = 0.0;
    const auto n = static_cast<double>(community.size());
    for (auto s : size) {
        if (s == 0) continue;
        const double p = static_cast<double>(s) / n;
        h -= p * std::log2(p);
    }
    return h;
}

namespace {

/// Weighted graph of one Louvain level. self_weight[i] is A_ii (internal weight
/// counted from both ends); neighbors exclude i.
struct LevelGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self_weight;
    std::vector<double> strength;
    double total = 0.0;  // 2m

    std::size_t size() const { return adj.size(); }
};

LevelGraph level_from(const SimpleGraph& g) {
    LevelGraph lg;
    const std::size_t n = g.num_nodes();
    lg.adj.resize(n);
    lg.self_weight.assign(n, 0.0);
    lg.strength.assign(n, 0.0);
    for (std::uint32_t u = 0; u < n; ++u) {
        for (auto v : g.neighbors(u)) lg.adj[u].emplace_back(v, 1.0);
        lg.strength[u] = static_cast<double>(g.degree(u));
        lg.total += lg.strength[u];
    }
    return lg;
}

/// One round of local moving. Returns true when any node changed community.
bool local_moving(const LevelGraph& lg, std::vector<std::uint32_t>& comm, SplitMix64& rng) {
    const std::size_t n = lg.size();
    std::vector<double> tot(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += lg.strength[i];

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.bounded(i)]);

    std::vector<double> link(n, 0.0);
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<std::uint32_t> touched;
    bool any_move = false;
    constexpr double eps = 1e-12;
    for (bool improved = true; improved;) {
        improved = false;
        for (auto i : order) {
            const std::uint32_t own = comm[i];
            const double k_i = lg.strength[i];
            touched.clear();
            touched.push_back(own);
            seen[own] = 1;
            for (auto [j, w] : lg.adj[i]) {
                const auto c = comm[j];
                if (!seen[c]) {
                    seen[c] = 1;
                    touched.push_back(c);
                }
                link[c] += w;
            }
            tot[own] -= k_i;
            // Staying put wins ties; otherwise the first community met in adjacency order.
            std::uint32_t best = own;
            double best_gain = link[own] - tot[own] * k_i / lg.total;
            for (auto c : touched) {
                const double gain = link[c] - tot[c] * k_i / lg.total;
                if (gain > best_gain + eps) {
                    best = c;
                    best_gain = gain;
                }
            }
            tot[best] += k_i;
            if (best != own) {
                comm[i] = best;
                improved = true;
                any_move = true;
            }
            for (auto c : touched) {
                link[c] = 0.0;
                seen[c] = 0;
            }
        }
    }
    return any_move;
}

/// Renumbers labels 0..count-1 in order of first appearance.
std::size_t compact(std::vector<std::uint32_t>& labels) {
    std::unordered_map<std::uint32_t, std::uint32_t> remap;
    for (auto& l : labels) {
        auto [it, inserted] = remap.emplace(l, static_cast<std::uint32_t>(remap.size()));
        l = it->second;
    }
    return remap.size();
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm, std::size_t count) {
    LevelGraph out;
    out.adj.resize(count);
    out.self_weight.assign(count, 0.0);
    out.strength.assign(count, 0.0);
    out.total = lg.total;
    std::vector<std::unordered_map<std::uint32_t, double>> acc(count);
    for (std::size_t i = 0; i < lg.size(); ++i) {
        const auto ci = comm[i];
        out.strength[ci] += lg.strength[i];
        out.self_weight[ci] += lg.self_weight[i];
        for (auto [j, w] : lg.adj[i]) {
            const auto cj = comm[j];
            if (ci == cj) {
                out.self_weight[ci] += w;
            } else {
                acc[ci][cj] += w;
            }
        }
    }
    for (std::size_t c = 0; c < count; ++c) {
        out.adj[c].assign(acc[c].begin(), acc[c].end());
        std::sort(out.adj[c].begin(), out.adj[c].end());
    }
    return out;
}

}  // namespace

CommunityResult louvain(const SimpleGraph& g, std::uint64_t seed) {
    const std::size_t n = g.num_nodes();
    CommunityResult result;
    result.community.resize(n);
    std::iota(result.community.begin(), result.community.end(), 0u);
    if (n == 0) return result;

    SplitMix64 rng(seed);
    LevelGraph level = level_from(g);
    std::vector<std::uint32_t> node_comm = result.community;
    while (true) {
        std::vector<std::uint32_t> comm(level.size());
        std::iota(comm.begin(), comm.end(), 0u);
        if (level.total == 0.0 || !local_moving(level, comm, rng)) break;
        const std::size_t count = compact(comm);
        for (auto& c : node_comm) c = comm[c];
        if (count == level.size()) break;
        level = aggregate(level, comm, count);
    }
    result.community = std::move(node_comm);
    result.count = compact(result.community);
    result.modularity = modularity(g, result.community);
    result.structural_entropy = community_entropy(result.community);
    return result;
}

}  // namespace kgcx
