#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <string>

namespace oracle {

std::vector<double> jacobi_eigenvalues(Matrix a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i][i];
    std::sort(out.begin(), out.end());
    return out;
}

Edges simple_edges(const Edges& pairs) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> s;
    for (auto [u, v] : pairs) {
        if (u == v) continue;
        s.insert({std::min(u, v), std::max(u, v)});
    }
    return {s.begin(), s.end()};
}

Matrix adjacency(std::size_t n, const Edges& simple) {
    Matrix a(n, std::vector<double>(n, 0.0));
    for (auto [u, v] : simple) a[u][v] = a[v][u] = 1.0;
    return a;
}

std::vector<std::size_t> degrees(std::size_t n, const Edges& simple) {
    std::vector<std::size_t> d(n, 0);
    for (auto [u, v] : simple) {
        ++d[u];
        ++d[v];
    }
    return d;
}

namespace {

std::vector<std::vector<std::uint32_t>> adjacency_lists(std::size_t n, const Edges& simple) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto [u, v] : simple) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return adj;
}

}  // namespace

std::vector<std::vector<int>> bfs_distances(std::size_t n, const Edges& simple) {
    const auto adj = adjacency_lists(n, simple);
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    for (std::size_t s = 0; s < n; ++s) {
        std::deque<std::uint32_t> q{static_cast<std::uint32_t>(s)};
        dist[s][s] = 0;
        while (!q.empty()) {
            const auto u = q.front();
            q.pop_front();
            for (auto w : adj[u]) {
                if (dist[s][w] < 0) {
                    dist[s][w] = dist[s][u] + 1;
                    q.push_back(w);
                }
            }
        }
    }
    return dist;
}

std::vector<std::vector<int>> floyd_warshall(std::size_t n, const Edges& simple) {
    const int inf = 1 << 28;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (auto [u, v] : simple) d[u][v] = d[v][u] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    for (auto& row : d)
        for (int& x : row)
            if (x >= inf) x = -1;
    return d;
}

namespace {

/// Number of shortest paths between every ordered pair.
std::vector<std::vector<double>> path_counts(std::size_t n, const Edges& simple,
                                             const std::vector<std::vector<int>>& dist) {
    const auto adj = adjacency_lists(n, simple);
    std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return dist[s][a] < dist[s][b]; });
        sigma[s][s] = 1.0;
        for (auto v : order) {
            if (dist[s][v] <= 0) continue;
            for (auto u : adj[v]) {
                if (dist[s][u] == dist[s][v] - 1) sigma[s][v] += sigma[s][u];
            }
        }
    }
    return sigma;
}

}  // namespace

std::vector<double> node_betweenness(std::size_t n, const Edges& simple) {
    const auto dist = bfs_distances(n, simple);
    const auto sigma = path_counts(n, simple, dist);
    std::vector<double> b(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) {
            if (dist[s][t] <= 0) continue;
            for (std::size_t v = 0; v < n; ++v) {
                if (v == s || v == t || dist[s][v] < 0 || dist[v][t] < 0) continue;
                if (dist[s][v] + dist[v][t] == dist[s][t]) b[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
            }
        }
    }
    const double nd = static_cast<double>(n);
    for (double& x : b) x = n > 2 ? 2.0 * x / ((nd - 1.0) * (nd - 2.0)) : 0.0;
    return b;
}

std::vector<double> edge_betweenness(std::size_t n, const Edges& simple) {
    const auto dist = bfs_distances(n, simple);
    const auto sigma = path_counts(n, simple, dist);
    std::vector<double> b(simple.size(), 0.0);
    for (std::size_t e = 0; e < simple.size(); ++e) {
        const auto [u, v] = simple[e];
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t t = s + 1; t < n; ++t) {
                if (dist[s][t] <= 0) continue;
                for (auto [a, c] : {std::pair{u, v}, std::pair{v, u}}) {
                    if (dist[s][a] < 0 || dist[c][t] < 0) continue;
                    if (dist[s][a] + 1 + dist[c][t] == dist[s][t]) b[e] += sigma[s][a] * sigma[c][t] / sigma[s][t];
                }
            }
        }
    }
    const double nd = static_cast<double>(n);
    for (double& x : b) x = n > 1 ? 2.0 * x / (nd * (nd - 1.0)) : 0.0;
    return b;
}

std::vector<double> closeness(std::size_t n, const Edges& simple) {
    const auto d = floyd_warshall(n, simple);
    std::vector<double> c(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        double reach = 0.0;
        double total = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            if (u != v && d[v][u] > 0) {
                reach += 1.0;
                total += d[v][u];
            }
        }
        if (total > 0.0 && n > 1) c[v] = (reach / static_cast<double>(n - 1)) * (reach / total);
    }
    return c;
}

std::vector<double> local_clustering(std::size_t n, const Edges& simple) {
    const auto a = adjacency(n, simple);
    const auto deg = degrees(n, simple);
    std::vector<double> c(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        if (deg[v] < 2) continue;
        double links = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (a[v][i] > 0 && a[v][j] > 0 && a[i][j] > 0) links += 1.0;
        const double d = static_cast<double>(deg[v]);
        c[v] = 2.0 * links / (d * (d - 1.0));
    }
    return c;
}

std::uint64_t triangle_count(std::size_t n, const Edges& simple) {
    const auto a = adjacency(n, simple);
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                if (a[i][j] > 0 && a[j][k] > 0 && a[i][k] > 0) ++t;
    return t;
}

double transitivity(std::size_t n, const Edges& simple) {
    const auto deg = degrees(n, simple);
    double triples = 0.0;
    for (auto d : deg) triples += static_cast<double>(d) * (static_cast<double>(d) - 1.0) / 2.0;
    return triples > 0.0 ? 3.0 * static_cast<double>(triangle_count(n, simple)) / triples : 0.0;
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 1e-300 || syy <= 1e-300) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

std::optional<double> assortativity(std::size_t n, const Edges& simple) {
    const auto deg = degrees(n, simple);
    std::vector<double> x;
    std::vector<double> y;
    for (auto [u, v] : simple) {
        x.push_back(static_cast<double>(deg[u]));
        y.push_back(static_cast<double>(deg[v]));
        x.push_back(static_cast<double>(deg[v]));
        y.push_back(static_cast<double>(deg[u]));
    }
    if (simple.size() < 2) return std::nullopt;
    return pearson(x, y);
}

double modularity(std::size_t n, const Edges& simple, const std::vector<std::uint32_t>& community) {
    const auto a = adjacency(n, simple);
    const auto deg = degrees(n, simple);
    const double two_m = 2.0 * static_cast<double>(simple.size());
    if (two_m == 0.0) return 0.0;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (community[i] == community[j])
                q += a[i][j] - static_cast<double>(deg[i]) * static_cast<double>(deg[j]) / two_m;
    return q / two_m;
}

std::vector<std::uint32_t> largest_component(std::size_t n, const Edges& simple) {
    const auto d = floyd_warshall(n, simple);
    std::vector<std::uint32_t> best;
    std::vector<bool> seen(n, false);
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::uint32_t> comp;
        for (std::size_t v = 0; v < n; ++v) {
            if (d[s][v] >= 0) {
                comp.push_back(static_cast<std::uint32_t>(v));
                seen[v] = true;
            }
        }
        if (comp.size() > best.size()) best = comp;
    }
    return best;
}

Edges induced(const Edges& simple, const std::vector<std::uint32_t>& nodes) {
    Edges out;
    auto index = [&](std::uint32_t v) -> long {
        const auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
        return it != nodes.end() && *it == v ? it - nodes.begin() : -1;
    };
    for (auto [u, v] : simple) {
        const long a = index(u);
        const long b = index(v);
        if (a >= 0 && b >= 0) out.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
    }
    return out;
}

double algebraic_connectivity(std::size_t n, const Edges& simple) {
    const auto nodes = largest_component(n, simple);
    const auto sub = induced(simple, nodes);
    const std::size_t m = nodes.size();
    if (m < 2) return 0.0;
    Matrix l(m, std::vector<double>(m, 0.0));
    for (auto [u, v] : sub) {
        l[u][v] -= 1.0;
        l[v][u] -= 1.0;
        l[u][u] += 1.0;
        l[v][v] += 1.0;
    }
    return jacobi_eigenvalues(l)[1];
}

double spectral_gap(std::size_t n, const Edges& simple) {
    const auto nodes = largest_component(n, simple);
    const auto sub = induced(simple, nodes);
    if (nodes.size() < 2) return 0.0;
    const auto ev = jacobi_eigenvalues(adjacency(nodes.size(), sub));
    return ev[ev.size() - 1] - ev[ev.size() - 2];
}

std::vector<double> eigenvector_centrality(std::size_t n, const Edges& simple) {
    const auto nodes = largest_component(n, simple);
    const auto sub = induced(simple, nodes);
    const std::size_t m = nodes.size();
    std::vector<double> out(n, 0.0);
    if (m == 1) {
        out[nodes[0]] = 1.0;
        return out;
    }
    const auto a = adjacency(m, sub);
    const double top = jacobi_eigenvalues(a).back();
    // Null vector of (A - top I) by Gaussian elimination with full pivoting.
    Matrix b = a;
    for (std::size_t i = 0; i < m; ++i) b[i][i] -= top;
    std::vector<std::size_t> col(m);
    std::iota(col.begin(), col.end(), 0u);
    std::size_t rank = 0;
    for (; rank < m; ++rank) {
        double best = 0.0;
        std::size_t pr = rank;
        std::size_t pc = rank;
        for (std::size_t i = rank; i < m; ++i)
            for (std::size_t j = rank; j < m; ++j)
                if (std::abs(b[i][col[j]]) > best) {
                    best = std::abs(b[i][col[j]]);
                    pr = i;
                    pc = j;
                }
        if (best < 1e-9) break;
        std::swap(b[rank], b[pr]);
        std::swap(col[rank], col[pc]);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == rank) continue;
            const double f = b[i][col[rank]] / b[rank][col[rank]];
            for (std::size_t j = 0; j < m; ++j) b[i][j] -= f * b[rank][j];
        }
    }
    std::vector<double> x(m, 0.0);
    x[col[rank]] = 1.0;  // connected graph: the top eigenvalue is simple, so rank = m - 1
    for (std::size_t i = 0; i < rank; ++i) x[col[i]] = -b[i][col[rank]] / b[i][col[i]];
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    const double sign = std::accumulate(x.begin(), x.end(), 0.0) < 0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < m; ++i) out[nodes[i]] = sign * x[i] / norm;
    return out;
}

std::vector<double> pagerank(std::size_t n, const Edges& directed, double damping) {
    std::vector<double> outdeg(n, 0.0);
    for (auto [u, v] : directed) outdeg[u] += 1.0;
    // (I - d P^T) x = (1 - d)/n, P row-stochastic with dangling rows uniform.
    Matrix a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = 1.0;
        a[i][n] = (1.0 - damping) / static_cast<double>(n);
    }
    for (auto [u, v] : directed) a[v][u] -= damping / outdeg[u];
    for (std::size_t u = 0; u < n; ++u) {
        if (outdeg[u] > 0) continue;
        for (std::size_t v = 0; v < n; ++v) a[v][u] -= damping / static_cast<double>(n);
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        std::swap(a[c], a[p]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return x;
}

std::optional<std::size_t> girth(std::size_t n, const Edges& pairs) {
    for (auto [u, v] : pairs)
        if (u == v) return 1;
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (auto [u, v] : pairs)
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second) return 2;
    const Edges simple(seen.begin(), seen.end());
    std::optional<std::size_t> best;
    for (std::size_t e = 0; e < simple.size(); ++e) {
        Edges rest;
        for (std::size_t f = 0; f < simple.size(); ++f)
            if (f != e) rest.push_back(simple[f]);
        const auto adj = adjacency_lists(n, rest);
        std::vector<int> dist(n, -1);
        std::deque<std::uint32_t> q{simple[e].first};
        dist[simple[e].first] = 0;
        while (!q.empty()) {
            const auto u = q.front();
            q.pop_front();
            for (auto w : adj[u])
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
        }
        const int d = dist[simple[e].second];
        if (d > 0 && (!best || static_cast<std::size_t>(d + 1) < *best)) best = static_cast<std::size_t>(d + 1);
    }
    return best;
}

std::size_t greedy_colors(std::size_t n, const Edges& simple) {
    const auto deg = degrees(n, simple);
    const auto a = adjacency(n, simple);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return deg[x] > deg[y]; });
    std::vector<long> color(n, -1);
    long used = 0;
    for (auto v : order) {
        long c = 0;
        for (;; ++c) {
            bool clash = false;
            for (std::size_t u = 0; u < n; ++u)
                if (a[v][u] > 0 && color[u] == c) clash = true;
            if (!clash) break;
        }
        color[v] = c;
        used = std::max(used, c + 1);
    }
    return static_cast<std::size_t>(used);
}

namespace {

bool colorable(const Matrix& a, std::vector<int>& color, std::size_t v, int k) {
    if (v == a.size()) return true;
    for (int c = 0; c < k; ++c) {
        bool ok = true;
        for (std::size_t u = 0; u < v; ++u)
            if (a[v][u] > 0 && color[u] == c) ok = false;
        if (!ok) continue;
        color[v] = c;
        if (colorable(a, color, v + 1, k)) return true;
    }
    color[v] = -1;
    return false;
}

}  // namespace

std::size_t chromatic_number(std::size_t n, const Edges& simple) {
    if (n == 0) return 0;
    const auto a = adjacency(n, simple);
    for (int k = 1;; ++k) {
        std::vector<int> color(n, -1);
        if (colorable(a, color, 0, k)) return static_cast<std::size_t>(k);
    }
}

bool proper_coloring(const Edges& simple, const std::vector<std::uint32_t>& color) {
    return std::all_of(simple.begin(), simple.end(), [&](auto e) { return color[e.first] != color[e.second]; });
}

Edges random_pairs(std::size_t n, double p, std::mt19937_64& rng, bool noise) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Edges out;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (u(rng) < p) {
                out.emplace_back(i, j);
                if (noise && u(rng) < 0.05) out.emplace_back(j, i);
            }
    if (noise && n > 0 && u(rng) < 0.3) {
        const auto v = static_cast<std::uint32_t>(rng() % n);
        out.emplace_back(v, v);
    }
    return out;
}

NaiveCsg naive_csg(const std::vector<std::vector<std::vector<double>>>& classes, std::size_t k) {
    std::vector<const std::vector<double>*> pts;
    std::vector<std::size_t> cls;
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (const auto& v : classes[c]) {
            pts.push_back(&v);
            cls.push_back(c);
        }
    const std::size_t m = classes.size();
    Matrix s(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<std::pair<double, std::size_t>> d;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j == i) continue;
            double acc = 0.0;
            for (std::size_t t = 0; t < pts[i]->size(); ++t) {
                const double diff = (*pts[i])[t] - (*pts[j])[t];
                acc += diff * diff;
            }
            d.emplace_back(acc, j);
        }
        std::sort(d.begin(), d.end());
        for (std::size_t t = 0; t < k; ++t)
            s[cls[i]][cls[d[t].second]] += 1.0 / (static_cast<double>(classes[cls[i]].size()) * static_cast<double>(k));
    }
    Matrix l(m, std::vector<double>(m, 0.0));
    std::vector<double> deg(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) deg[i] += (s[i][j] + s[j][i]) / 2.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double sym = (s[i][j] + s[j][i]) / 2.0;
            const double scale = deg[i] > 0 && deg[j] > 0 ? 1.0 / std::sqrt(deg[i] * deg[j]) : 0.0;
            l[i][j] = (i == j ? 1.0 : 0.0) - sym * scale;
        }
    return {s, jacobi_eigenvalues(l)};
}

ClusteredKg clustered_kg(std::size_t m, std::size_t per_class, std::size_t dimension, double spread,
                         std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    kgcx::GraphBuilder builder;
    auto table = kgcx::EmbeddingTable::empty(dimension);
    table.insert("rel", std::vector<double>(dimension, 0.0));
    for (std::size_t c = 0; c < m; ++c) {
        std::vector<double> centre(dimension);
        for (double& x : centre) x = normal(rng);
        for (std::size_t j = 0; j < per_class; ++j) {
            const std::string head = "h" + std::to_string(c) + "_" + std::to_string(j);
            std::vector<double> v(dimension);
            for (std::size_t t = 0; t < dimension; ++t) v[t] = centre[t] + spread * normal(rng);
            table.insert(head, v);
            builder.add(head, "rel", "t" + std::to_string(c));
        }
    }
    return {std::move(builder).build(), std::move(table)};
}

}  // namespace oracle
