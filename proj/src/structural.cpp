#include "kgcx/structural.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include <omp.h>

#include "kgcx/eigensolvers.hpp"
#include "kgcx/format.hpp"
#include "kgcx/random.hpp"

namespace kgcx {

namespace {

int worker_count(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

double entropy_bits(const std::vector<std::size_t>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double average_degree(const SimpleGraph& g) {
    if (g.num_nodes() == 0) return 0.0;
    return 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(g.num_nodes());
}

double degree_entropy(const SimpleGraph& g) {
    std::size_t max_deg = 0;
    for (std::size_t v = 0; v < g.num_nodes(); ++v) max_deg = std::max(max_deg, g.degree(v));
    std::vector<std::size_t> hist(max_deg + 1, 0);
    for (std::size_t v = 0; v < g.num_nodes(); ++v) ++hist[g.degree(v)];
    return entropy_bits(hist, g.num_nodes());
}

std::vector<double> degree_centrality(const SimpleGraph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<double> c(n, 0.0);
    if (n < 2) return c;
    for (std::size_t v = 0; v < n; ++v) c[v] = static_cast<double>(g.degree(v)) / static_cast<double>(n - 1);
    return c;
}

std::vector<std::uint32_t> connected_components(const SimpleGraph& g) {
    const std::size_t n = g.num_nodes();
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> label(n, unset);
    std::vector<std::uint32_t> queue;
    std::uint32_t next = 0;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (label[s] != unset) continue;
        label[s] = next;
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (auto w : g.neighbors(queue[head])) {
                if (label[w] == unset) {
                    label[w] = next;
                    queue.push_back(w);
                }
            }
        }
        ++next;
    }
    return label;
}

std::vector<std::uint32_t> largest_component(const SimpleGraph& g) {
    if (g.num_nodes() == 0) return {};
    const auto label = connected_components(g);
    const std::uint32_t count = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::size_t> size(count, 0);
    for (auto l : label) ++size[l];
    const auto best = static_cast<std::uint32_t>(std::max_element(size.begin(), size.end()) - size.begin());
    std::vector<std::uint32_t> nodes;
    nodes.reserve(size[best]);
    for (std::uint32_t v = 0; v < g.num_nodes(); ++v) {
        if (label[v] == best) nodes.push_back(v);
    }
    return nodes;
}

SimpleGraph induced_subgraph(const SimpleGraph& g, std::span<const std::uint32_t> nodes) {
    constexpr auto absent = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> local(g.num_nodes(), absent);
    for (std::uint32_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = i;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
        const auto nbrs = g.neighbors(nodes[i]);
        const auto mult = g.multiplicities(nodes[i]);
        for (std::size_t j = 0; j < nbrs.size(); ++j) {
            const auto w = local[nbrs[j]];
            if (w == absent || w <= i) continue;
            for (std::uint32_t m = 0; m < mult[j]; ++m) edges.emplace_back(i, w);
        }
        if (g.has_self_loop(nodes[i])) edges.emplace_back(i, i);
    }
    return SimpleGraph::from_edges(nodes.size(), edges);
}

std::vector<double> closeness_centrality(const SimpleGraph& g, int threads) {
    const std::size_t n = g.num_nodes();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel num_threads(worker_count(threads))
    {
        std::vector<std::int64_t> dist(n, -1);
        std::vector<std::uint32_t> queue;
        queue.reserve(n);
#pragma omp for schedule(dynamic, 64)
        for (std::ptrdiff_t s = 0; s < count; ++s) {
            queue.assign(1, static_cast<std::uint32_t>(s));
            dist[static_cast<std::size_t>(s)] = 0;
            std::uint64_t total = 0;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const auto v = queue[head];
                for (auto w : g.neighbors(v)) {
                    if (dist[w] < 0) {
                        dist[w] = dist[v] + 1;
                        total += static_cast<std::uint64_t>(dist[w]);
                        queue.push_back(w);
                    }
                }
            }
            const double reach = static_cast<double>(queue.size() - 1);
            if (total > 0) {
                out[static_cast<std::size_t>(s)] =
                    (reach / static_cast<double>(n - 1)) * (reach / static_cast<double>(total));
            }
            for (auto v : queue) dist[v] = -1;
        }
    }
    return out;
}

namespace {

/// Edge id for every adjacency slot, matching the order of g.edge_list().
std::vector<std::uint32_t> slot_edge_ids(const SimpleGraph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<std::uint32_t> ids(2 * g.num_edges());
    std::uint32_t next = 0;
    for (std::uint32_t u = 0; u < n; ++u) {
        const auto nbrs = g.neighbors(u);
        for (std::size_t j = 0; j < nbrs.size(); ++j) {
            if (u < nbrs[j]) ids[g.adjacency_offset(u) + j] = next++;
        }
    }
    for (std::uint32_t u = 0; u < n; ++u) {
        const auto nbrs = g.neighbors(u);
        for (std::size_t j = 0; j < nbrs.size(); ++j) {
            const auto v = nbrs[j];
            if (u > v) {
                const auto back = g.neighbors(v);
                const auto pos = static_cast<std::size_t>(std::lower_bound(back.begin(), back.end(), u) - back.begin());
                ids[g.adjacency_offset(u) + j] = ids[g.adjacency_offset(v) + pos];
            }
        }
    }
    return ids;
}

struct BrandesWorkspace {
    std::vector<std::int64_t> dist;
    std::vector<double> sigma;
    std::vector<double> delta;
    std::vector<std::uint32_t> order;

    explicit BrandesWorkspace(std::size_t n) : dist(n, -1), sigma(n, 0.0), delta(n, 0.0) { order.reserve(n); }
};

void brandes_source(const SimpleGraph& g, const std::vector<std::uint32_t>& edge_ids, std::uint32_t s,
                    BrandesWorkspace& ws, double* node_acc, double* edge_acc) {
    ws.order.assign(1, s);
    ws.dist[s] = 0;
    ws.sigma[s] = 1.0;
    for (std::size_t head = 0; head < ws.order.size(); ++head) {
        const auto v = ws.order[head];
        for (auto w : g.neighbors(v)) {
            if (ws.dist[w] < 0) {
                ws.dist[w] = ws.dist[v] + 1;
                ws.order.push_back(w);
            }
            if (ws.dist[w] == ws.dist[v] + 1) ws.sigma[w] += ws.sigma[v];
        }
    }
    for (std::size_t i = ws.order.size(); i-- > 0;) {
        const auto w = ws.order[i];
        const auto nbrs = g.neighbors(w);
        const std::size_t base = g.adjacency_offset(w);
        for (std::size_t j = 0; j < nbrs.size(); ++j) {
            const auto v = nbrs[j];
            if (ws.dist[v] == ws.dist[w] - 1) {
                const double c = ws.sigma[v] / ws.sigma[w] * (1.0 + ws.delta[w]);
                edge_acc[edge_ids[base + j]] += c;
                ws.delta[v] += c;
            }
        }
        if (w != s) node_acc[w] += ws.delta[w];
    }
    for (auto v : ws.order) {
        ws.dist[v] = -1;
        ws.sigma[v] = 0.0;
        ws.delta[v] = 0.0;
    }
}

void rescale(Betweenness& b, std::size_t n, std::size_t sources) {
    b.sources = sources;
    if (sources == 0) return;
    const double sample = static_cast<double>(n) / static_cast<double>(sources);
    const double nd = static_cast<double>(n);
    const double node_scale = n > 2 ? sample / ((nd - 1.0) * (nd - 2.0)) : 0.0;
    const double edge_scale = n > 1 ? sample / (nd * (nd - 1.0)) : 0.0;
    for (double& x : b.node) x *= node_scale;
    for (double& x : b.edge) x *= edge_scale;
}

}  // namespace

Betweenness betweenness_serial(const SimpleGraph& g, std::span<const std::uint32_t> sources) {
    const std::size_t n = g.num_nodes();
    Betweenness b;
    b.node.assign(n, 0.0);
    b.edge.assign(g.num_edges(), 0.0);
    const auto edge_ids = slot_edge_ids(g);
    BrandesWorkspace ws(n);
    for (auto s : sources) brandes_source(g, edge_ids, s, ws, b.node.data(), b.edge.data());
    b.exact = sources.size() == n;
    rescale(b, n, sources.size());
    return b;
}

Betweenness betweenness_parallel(const SimpleGraph& g, std::span<const std::uint32_t> sources, int threads) {
    const std::size_t n = g.num_nodes();
    const std::size_t m = g.num_edges();
    // Fixed chunking keeps the floating-point summation order independent of threads.
    constexpr std::size_t max_chunks = 16;
    const std::size_t chunks = std::min<std::size_t>(max_chunks, std::max<std::size_t>(sources.size(), 1));
    const auto edge_ids = slot_edge_ids(g);
    std::vector<std::vector<double>> node_part(chunks);
    std::vector<std::vector<double>> edge_part(chunks);
    const auto chunk_count = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel num_threads(worker_count(threads))
    {
        BrandesWorkspace ws(n);
#pragma omp for schedule(dynamic, 1)
        for (std::ptrdiff_t c = 0; c < chunk_count; ++c) {
            const auto ci = static_cast<std::size_t>(c);
            node_part[ci].assign(n, 0.0);
            edge_part[ci].assign(m, 0.0);
            const std::size_t begin = sources.size() * ci / chunks;
            const std::size_t end = sources.size() * (ci + 1) / chunks;
            for (std::size_t i = begin; i < end; ++i) {
                brandes_source(g, edge_ids, sources[i], ws, node_part[ci].data(), edge_part[ci].data());
            }
        }
    }
    Betweenness b;
    b.node.assign(n, 0.0);
    b.edge.assign(m, 0.0);
    for (std::size_t c = 0; c < chunks; ++c) {
        for (std::size_t v = 0; v < n; ++v) b.node[v] += node_part[c][v];
        for (std::size_t e = 0; e < m; ++e) b.edge[e] += edge_part[c][e];
    }
    b.exact = sources.size() == n;
    rescale(b, n, sources.size());
    return b;
}

std::vector<std::uint32_t> pivot_sample(std::size_t num_nodes, std::size_t count, std::uint64_t seed) {
    count = std::min(count, num_nodes);
    std::vector<std::uint32_t> all(num_nodes);
    std::iota(all.begin(), all.end(), 0u);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + rng.bounded(num_nodes - i);
        std::swap(all[i], all[j]);
    }
    all.resize(count);
    std::sort(all.begin(), all.end());
    return all;
}

Betweenness betweenness(const SimpleGraph& g, const StructuralConfig& config) {
    const std::size_t n = g.num_nodes();
    if (!config.pivots && n <= config.exact_betweenness_limit) {
        std::vector<std::uint32_t> all(n);
        std::iota(all.begin(), all.end(), 0u);
        return betweenness_parallel(g, all, config.threads);
    }
    const std::size_t p = config.pivots.value_or(std::min(n, config.max_pivots));
    const auto sources = pivot_sample(n, p, derive_seed(config.seed, "pivots"));
    return betweenness_parallel(g, sources, config.threads);
}

EigenvectorCentrality eigenvector_centrality(const SimpleGraph& g, double tolerance, int max_iterations) {
    EigenvectorCentrality out;
    out.values.assign(g.num_nodes(), 0.0);
    const auto nodes = largest_component(g);
    out.component_size = nodes.size();
    if (nodes.empty()) return out;
    const SimpleGraph sub = induced_subgraph(g, nodes);
    const std::size_t n = sub.num_nodes();
    if (n == 1) {
        out.values[nodes[0]] = 1.0;
        return out;
    }
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(n);
    double change = std::numeric_limits<double>::infinity();
    int iter = 0;
    while (iter < max_iterations) {
        ++iter;
        // y = (A + I) x; the shift keeps bipartite components from oscillating.
        for (std::size_t v = 0; v < n; ++v) {
            double acc = x[v];
            for (auto w : sub.neighbors(v)) acc += x[w];
            y[v] = acc;
        }
        double norm = 0.0;
        for (double t : y) norm += t * t;
        norm = std::sqrt(norm);
        change = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            y[v] /= norm;
            change += (y[v] - x[v]) * (y[v] - x[v]);
        }
        change = std::sqrt(change);
        x.swap(y);
        if (change < tolerance) break;
    }
    // Rayleigh quotient and residual for A itself.
    double lambda = 0.0;
    std::vector<double> ax(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        for (auto w : sub.neighbors(v)) ax[v] += x[w];
        lambda += x[v] * ax[v];
    }
    double res = 0.0;
    for (std::size_t v = 0; v < n; ++v) res += (ax[v] - lambda * x[v]) * (ax[v] - lambda * x[v]);
    out.residual = std::sqrt(res);
    out.eigenvalue = lambda;
    out.iterations = iter;
    if (!(change < tolerance)) {
        throw ConvergenceError("eigenvector centrality power iteration did not converge", iter, out.residual);
    }
    for (std::size_t v = 0; v < n; ++v) out.values[nodes[v]] = std::abs(x[v]);
    return out;
}

PageRank pagerank(std::size_t num_nodes, std::span<const std::pair<std::uint32_t, std::uint32_t>> directed_edges,
                  double damping, double tolerance, int max_iterations) {
    PageRank out;
    if (num_nodes == 0) return out;
    const double n = static_cast<double>(num_nodes);
    std::vector<double> out_degree(num_nodes, 0.0);
    for (auto [u, v] : directed_edges) {
        if (u >= num_nodes || v >= num_nodes) throw std::invalid_argument("pagerank edge out of range");
        out_degree[u] += 1.0;
    }
    // Incoming CSR so each iteration is a pull over predecessors.
    std::vector<std::size_t> offsets(num_nodes + 1, 0);
    for (auto [u, v] : directed_edges) ++offsets[v + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<std::uint32_t> preds(directed_edges.size());
    {
        std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
        for (auto [u, v] : directed_edges) preds[cursor[v]++] = u;
    }
    std::vector<double> x(num_nodes, 1.0 / n);
    std::vector<double> next(num_nodes);
    std::vector<double> share(num_nodes);
    for (int iter = 1; iter <= max_iterations; ++iter) {
        double dangling = 0.0;
        for (std::size_t v = 0; v < num_nodes; ++v) {
            if (out_degree[v] > 0) {
                share[v] = x[v] / out_degree[v];
            } else {
                share[v] = 0.0;
                dangling += x[v];
            }
        }
        const double base = (1.0 - damping) / n + damping * dangling / n;
        double delta = 0.0;
        for (std::size_t v = 0; v < num_nodes; ++v) {
            double acc = 0.0;
            for (std::size_t i = offsets[v]; i < offsets[v + 1]; ++i) acc += share[preds[i]];
            next[v] = base + damping * acc;
            delta += std::abs(next[v] - x[v]);
        }
        x.swap(next);
        out.iterations = iter;
        out.delta = delta;
        if (delta < tolerance) break;
    }
    if (!(out.delta < tolerance)) {
        throw ConvergenceError("pagerank did not converge", out.iterations, out.delta);
    }
    out.values = std::move(x);
    return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> directed_edges(const KnowledgeGraph& kg) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(kg.num_triples());
    for (const auto& t : kg.triples()) edges.emplace_back(t.head, t.tail);
    return edges;
}

std::vector<std::uint64_t> triangles_per_node(const SimpleGraph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<std::uint64_t> tri(n, 0);
    // Each triangle u < v < w is found once from its smallest vertex.
    for (std::uint32_t u = 0; u < n; ++u) {
        const auto nu = g.neighbors(u);
        for (auto v : nu) {
            if (v <= u) continue;
            const auto nv = g.neighbors(v);
            auto a = std::upper_bound(nu.begin(), nu.end(), v);
            auto b = std::upper_bound(nv.begin(), nv.end(), v);
            while (a != nu.end() && b != nv.end()) {
                if (*a < *b) {
                    ++a;
                } else if (*b < *a) {
                    ++b;
                } else {
                    ++tri[u];
                    ++tri[v];
                    ++tri[*a];
                    ++a;
                    ++b;
                }
            }
        }
    }
    return tri;
}

Clustering clustering(const SimpleGraph& g) {
    const std::size_t n = g.num_nodes();
    Clustering c;
    c.local.assign(n, 0.0);
    const auto tri = triangles_per_node(g);
    double connected_triples = 0.0;
    std::uint64_t tri_sum = 0;
    for (std::size_t v = 0; v < n; ++v) {
        const double d = static_cast<double>(g.degree(v));
        tri_sum += tri[v];
        if (d >= 2) {
            c.local[v] = 2.0 * static_cast<double>(tri[v]) / (d * (d - 1.0));
            connected_triples += d * (d - 1.0) / 2.0;
        }
    }
    c.triangles = tri_sum / 3;
    c.local_mean = mean(c.local);
    c.global = c.local_mean;
    c.transitivity = connected_triples > 0 ? static_cast<double>(tri_sum) / connected_triples : 0.0;
    return c;
}

MaybeValue assortativity(const SimpleGraph& g) {
    const auto edges = g.edge_list();
    if (edges.size() < 2) return {std::nullopt, "fewer than 2 edges"};
    double sum_prod = 0.0;
    double sum_half = 0.0;
    double sum_sq = 0.0;
    for (auto [u, v] : edges) {
        const double j = static_cast<double>(g.degree(u));
        const double k = static_cast<double>(g.degree(v));
        sum_prod += j * k;
        sum_half += 0.5 * (j + k);
        sum_sq += 0.5 * (j * j + k * k);
    }
    const double m = static_cast<double>(edges.size());
    const double mean_half = sum_half / m;
    const double num = sum_prod / m - mean_half * mean_half;
    const double den = sum_sq / m - mean_half * mean_half;
    if (!(std::abs(den) > 1e-12 * std::max(1.0, sum_sq / m))) {
        return {std::nullopt, "zero variance in endpoint degrees"};
    }
    return {std::clamp(num / den, -1.0, 1.0), ""};
}

SpectralMeasures spectral_measures(const SimpleGraph& g, const StructuralConfig& config) {
    SpectralMeasures out;
    const auto nodes = largest_component(g);
    out.component_size = nodes.size();
    if (nodes.size() < 2) {
        out.method = "component has fewer than 2 nodes";
        return out;
    }
    const SimpleGraph sub = induced_subgraph(g, nodes);
    const auto n = static_cast<Eigen::Index>(sub.num_nodes());

    if (static_cast<std::size_t>(n) <= config.dense_spectral_limit) {
        Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index v = 0; v < n; ++v) {
            for (auto w : sub.neighbors(static_cast<std::size_t>(v))) adj(v, w) = 1.0;
        }
        Eigen::MatrixXd lap = -adj;
        lap.diagonal() = adj.rowwise().sum();
        const auto ls = dense_symmetric_eigen(lap, false);
        const auto as = dense_symmetric_eigen(adj, false);
        out.algebraic_connectivity = ls.values[1];
        out.adjacency_top = as.values[n - 1];
        out.adjacency_second = as.values[n - 2];
        out.method = "dense symmetric eigensolver on largest component";
    } else {
        std::size_t max_deg = 0;
        for (std::size_t v = 0; v < sub.num_nodes(); ++v) max_deg = std::max(max_deg, sub.degree(v));
        const double bound = std::max(1.0, 2.0 * static_cast<double>(max_deg));
        KrylovOptions opt;
        opt.tolerance = config.spectral_tolerance * bound;
        opt.max_basis = 80;
        opt.keep = 20;
        opt.max_iterations = 50000;
        opt.seed = derive_seed(config.seed, "spectral");
        SymmetricOperator lap_op = [&sub](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
            y.resize(x.size());
            for (Eigen::Index v = 0; v < x.size(); ++v) {
                const auto nb = sub.neighbors(static_cast<std::size_t>(v));
                double acc = static_cast<double>(nb.size()) * x[v];
                for (auto w : nb) acc -= x[w];
                y[v] = acc;
            }
        };
        SymmetricOperator adj_op = [&sub](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
            y.resize(x.size());
            for (Eigen::Index v = 0; v < x.size(); ++v) {
                double acc = 0.0;
                for (auto w : sub.neighbors(static_cast<std::size_t>(v))) acc += x[w];
                y[v] = acc;
            }
        };
        Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(n, 1, 1.0 / std::sqrt(static_cast<double>(n)));
        const auto low = krylov_extreme(lap_op, n, 1, SpectrumEnd::Smallest, constant, opt);
        const auto top = krylov_extreme(adj_op, n, 2, SpectrumEnd::Largest, {}, opt);
        out.algebraic_connectivity = low[0].value;
        out.adjacency_top = top[0].value;
        out.adjacency_second = top[1].value;
        out.residual = std::max({low[0].residual, top[0].residual, top[1].residual});
        out.method = "thick-restart Krylov on largest component, residual tolerance " +
                     format_double(opt.tolerance) + " (1e-6 x spectral norm bound)";
    }
    if (out.algebraic_connectivity < 0.0 && out.algebraic_connectivity > -1e-6) {
        out.algebraic_connectivity = 0.0;
        out.clamped = true;
    }
    out.spectral_gap = out.adjacency_top - out.adjacency_second;
    return out;
}

std::vector<std::uint32_t> greedy_coloring(const SimpleGraph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return g.degree(a) > g.degree(b); });
    constexpr auto none = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> color(n, none);
    std::vector<std::uint32_t> used_by;  // used_by[c] == v+1 when c is taken around v
    for (auto v : order) {
        used_by.resize(std::max<std::size_t>(used_by.size(), g.degree(v) + 1), 0);
        for (auto w : g.neighbors(v)) {
            if (color[w] != none && color[w] < used_by.size()) used_by[color[w]] = v + 1;
        }
        std::uint32_t c = 0;
        while (used_by[c] == v + 1) ++c;
        color[v] = c;
    }
    return color;
}

std::size_t chromatic_estimate(const SimpleGraph& g) {
    if (g.num_nodes() == 0) return 0;
    const auto color = greedy_coloring(g);
    return *std::max_element(color.begin(), color.end()) + 1;
}

std::optional<std::size_t> girth(const SimpleGraph& g) {
    if (g.any_self_loop()) return 1;
    if (g.any_parallel_edge()) return 2;
    const std::size_t n = g.num_nodes();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::vector<std::int64_t> dist(n, -1);
    std::vector<std::uint32_t> parent(n);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t s = 0; s < n && best > 3; ++s) {
        queue.assign(1, s);
        dist[s] = 0;
        parent[s] = s;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const auto v = queue[head];
            // Any cycle closed beyond this depth cannot beat the current best.
            if (2 * static_cast<std::size_t>(dist[v]) + 1 >= best) break;
            for (auto w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                } else if (parent[v] != w) {
                    best = std::min(best, static_cast<std::size_t>(dist[v] + dist[w] + 1));
                }
            }
        }
        for (auto v : queue) dist[v] = -1;
    }
    if (best == std::numeric_limits<std::size_t>::max()) return std::nullopt;
    return best;
}

namespace {

/// Rank of each entity in label order, so results do not depend on input order.
std::vector<std::uint32_t> canonical_ranks(const KnowledgeGraph& kg) {
    const auto& labels = kg.entities().labels();
    std::vector<std::uint32_t> order(labels.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return labels[a] < labels[b]; });
    std::vector<std::uint32_t> rank(labels.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    return rank;
}

}  // namespace

StructuralProfile structural_profile(const KnowledgeGraph& kg, const StructuralConfig& config) {
    const auto rank = canonical_ranks(kg);
    auto directed = directed_edges(kg);
    for (auto& [u, v] : directed) {
        u = rank[u];
        v = rank[v];
    }
    SimpleGraph g;
    {
        std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> distinct;
        distinct.reserve(kg.num_triples());
        for (const auto& t : kg.triples()) distinct.emplace_back(rank[t.head], t.relation, rank[t.tail]);
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        pairs.reserve(distinct.size());
        for (const auto& [h, r, t] : distinct) pairs.emplace_back(h, t);
        g = SimpleGraph::from_edges(kg.num_entities(), pairs);
    }
    StructuralProfile p;
    auto& notes = p.method_notes;
    p.nodes = g.num_nodes();
    p.edges = g.num_edges();

    p.average_degree = average_degree(g);
    notes["average_degree"] = "2|E|/|V| on the undirected simple view (all entities are nodes)";
    p.degree_entropy = degree_entropy(g);
    notes["degree_entropy"] = "Shannon entropy (bits) of the degree-value histogram";
    p.degree_centrality_mean = mean(degree_centrality(g));
    notes["degree_centrality"] = "deg(v)/(|V|-1), mean over all nodes";

    const auto bc = betweenness(g, config);
    p.betweenness_centrality_mean = mean(bc.node);
    p.edge_betweenness_mean = mean(bc.edge);
    notes["betweenness"] =
        std::string(bc.exact ? "exact Brandes" : "pivot-sampled Brandes") + ", sources=" + std::to_string(bc.sources) +
        (bc.exact ? "" : ", seed=" + std::to_string(derive_seed(config.seed, "pivots"))) +
        "; node values / ((n-1)(n-2)), edge values / (n(n-1))";

    p.closeness_centrality_mean = mean(closeness_centrality(g, config.threads));
    notes["closeness"] = "Wasserman-Faust corrected, per connected component, mean over all nodes";

    const auto ev = eigenvector_centrality(g, config.eigenvector_tolerance, config.eigenvector_max_iterations);
    p.eigenvector_centrality_mean = mean(ev.values);
    p.eigenvector_residual = ev.component_size > 0 ? ev.residual : 0.0;
    notes["eigenvector_centrality"] = "power iteration on A+I over the largest component (" +
                                      std::to_string(ev.component_size) + " nodes), tol " +
                                      format_double(config.eigenvector_tolerance) + ", iterations " +
                                      std::to_string(ev.iterations) + ", L2-normalized, zero elsewhere";

    const auto pr = pagerank(kg.num_entities(), directed, config.pagerank_damping, config.pagerank_tolerance,
                             config.pagerank_max_iterations);
    p.pagerank_sum = std::accumulate(pr.values.begin(), pr.values.end(), 0.0);
    p.pagerank_mean = mean(pr.values);
    notes["pagerank"] = "directed head->tail multigraph, damping " + format_double(config.pagerank_damping) +
                        ", L1 tol " + format_double(config.pagerank_tolerance) + ", iterations " +
                        std::to_string(pr.iterations) + ", dangling mass spread uniformly";

    const auto cl = clustering(g);
    p.local_clustering_mean = cl.local_mean;
    p.global_clustering = cl.global;
    p.transitivity = cl.transitivity;
    notes["clustering"] = "local mean over all nodes (c=0 for deg<2); global reported as the local mean; "
                          "transitivity = 3*triangles/connected triples";

    if (g.num_edges() > 0) {
        const auto comm = louvain(g, derive_seed(config.seed, "communities"));
        p.modularity = comm.modularity;
        p.communities = comm.count;
        p.structural_entropy = comm.structural_entropy;
    }
    notes["modularity"] = "Louvain multilevel, seed " + std::to_string(derive_seed(config.seed, "communities")) +
                          "; structural entropy = entropy (bits) of community size fractions";

    p.assortativity = assortativity(g);
    notes["assortativity"] = "Newman degree assortativity on the simple view";

    const auto sm = spectral_measures(g, config);
    p.algebraic_connectivity = sm.algebraic_connectivity;
    p.spectral_gap = sm.spectral_gap;
    notes["spectral"] = sm.method + "; spectral gap = lambda1(A) - lambda2(A)" +
                        (sm.clamped ? "; algebraic connectivity clamped from (-1e-6, 0) to 0" : "") +
                        "; residual " + format_double(sm.residual);

    p.chromatic_number_estimate = chromatic_estimate(g);
    notes["chromatic_number"] = "greedy coloring, largest degree first; upper bound estimate";
    p.girth = girth(g);
    notes["girth"] = "1 if a self-loop triple exists, 2 if an entity pair has >= 2 distinct triples, "
                     "else shortest cycle by truncated BFS";
    return p;
}

}  // namespace kgcx
