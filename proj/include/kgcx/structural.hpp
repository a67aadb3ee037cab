#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgcx/graph.hpp"

namespace kgcx {

/// A metric that may be undefined for the input (e.g. zero variance).
struct MaybeValue {
    std::optional<double> value;
    std::string reason;
};

struct StructuralConfig {
    std::uint64_t seed = 42;
    int threads = 0;
    std::size_t exact_betweenness_limit = 20000;  ///< exact Brandes up to this many nodes
    std::size_t max_pivots = 5000;
    std::optional<std::size_t> pivots;            ///< forces pivot sampling with this many sources
    double eigenvector_tolerance = 1e-8;
    int eigenvector_max_iterations = 1000;
    double pagerank_damping = 0.85;
    double pagerank_tolerance = 1e-10;
    int pagerank_max_iterations = 10000;
    std::size_t dense_spectral_limit = 1500;  ///< dense eigensolver up to this component size
    double spectral_tolerance = 1e-6;
};

double average_degree(const SimpleGraph& g);
/// Entropy (bits) of the distribution of degree values.
double degree_entropy(const SimpleGraph& g);
/// deg(v) / (|V| - 1).
std::vector<double> degree_centrality(const SimpleGraph& g);

/// Component label per node; labels are numbered by smallest member.
std::vector<std::uint32_t> connected_components(const SimpleGraph& g);
/// Nodes of the largest component, ascending (ties to the component with the smallest node).
std::vector<std::uint32_t> largest_component(const SimpleGraph& g);
/// Subgraph induced by `nodes` (ascending), relabelled 0..|nodes|-1.
SimpleGraph induced_subgraph(const SimpleGraph& g, std::span<const std::uint32_t> nodes);

/// Closeness with the Wasserman-Faust correction: (r/(n-1)) * (r / sum of
/// distances), r = nodes reachable from v. Zero for isolated nodes.
std::vector<double> closeness_centrality(const SimpleGraph& g, int threads = 0);

struct Betweenness {
    std::vector<double> node;  ///< normalized by (n-1)(n-2)
    std::vector<double> edge;  ///< aligned with g.edge_list(), normalized by n(n-1)
    std::size_t sources = 0;
    bool exact = true;
};

/// Brandes accumulation from the given sources, scaled by n / |sources|.
/// betweenness_serial is the reference; the parallel kernel reduces fixed
/// source chunks in order, so its output does not depend on the thread count.
Betweenness betweenness_serial(const SimpleGraph& g, std::span<const std::uint32_t> sources);
Betweenness betweenness_parallel(const SimpleGraph& g, std::span<const std::uint32_t> sources, int threads = 0);
/// Exact when |V| <= exact limit and no pivot count is forced, else seeded pivots.
Betweenness betweenness(const SimpleGraph& g, const StructuralConfig& config);
/// Seeded pivot sample of `count` distinct nodes, ascending.
std::vector<std::uint32_t> pivot_sample(std::size_t num_nodes, std::size_t count, std::uint64_t seed);

struct EigenvectorCentrality {
    std::vector<double> values;  ///< zero outside the largest component
    double eigenvalue = 0.0;
    double residual = 0.0;  ///< ||A v - lambda v|| / ||v|| on the component
    int iterations = 0;
    std::size_t component_size = 0;
};

/// Power iteration with A + I on the largest component, L2-normalized, positive.
/// Throws ConvergenceError when the iteration budget is exhausted.
EigenvectorCentrality eigenvector_centrality(const SimpleGraph& g, double tolerance = 1e-8, int max_iterations = 1000);

struct PageRank {
    std::vector<double> values;
    int iterations = 0;
    double delta = 0.0;  ///< L1 change of the last iteration
};

/// PageRank on a directed multigraph with uniform teleport; dangling mass is
/// spread uniformly. Parallel edges count with multiplicity.
PageRank pagerank(std::size_t num_nodes, std::span<const std::pair<std::uint32_t, std::uint32_t>> directed_edges,
                  double damping = 0.85, double tolerance = 1e-10, int max_iterations = 10000);
/// The head -> tail multigraph of all triples.
std::vector<std::pair<std::uint32_t, std::uint32_t>> directed_edges(const KnowledgeGraph& kg);

struct Clustering {
    std::vector<double> local;
    double local_mean = 0.0;
    double global = 0.0;  ///< same as local_mean
    double transitivity = 0.0;
    std::uint64_t triangles = 0;
};

std::vector<std::uint64_t> triangles_per_node(const SimpleGraph& g);
Clustering clustering(const SimpleGraph& g);

/// Newman degree assortativity over both orientations of every edge.
MaybeValue assortativity(const SimpleGraph& g);

struct SpectralMeasures {
    double algebraic_connectivity = 0.0;
    double spectral_gap = 0.0;
    double adjacency_top = 0.0;
    double adjacency_second = 0.0;
    double residual = 0.0;  ///< largest eigenpair residual among those used
    std::size_t component_size = 0;
    bool clamped = false;  ///< algebraic connectivity in (-1e-6, 0) set to 0
    std::string method;
};

/// Second-smallest combinatorial Laplacian eigenvalue and the gap between the two
/// largest adjacency eigenvalues, both on the largest component.
SpectralMeasures spectral_measures(const SimpleGraph& g, const StructuralConfig& config = {});

/// Greedy coloring, largest degree first (ties to smaller id), smallest free color.
std::vector<std::uint32_t> greedy_coloring(const SimpleGraph& g);
std::size_t chromatic_estimate(const SimpleGraph& g);

/// 1 with a self-loop, 2 with parallel edges, else the shortest simple cycle;
/// nullopt for forests.
std::optional<std::size_t> girth(const SimpleGraph& g);

struct CommunityResult {
    std::vector<std::uint32_t> community;  ///< dense labels in order of first appearance
    std::size_t count = 0;
    double modularity = 0.0;
    double structural_entropy = 0.0;
};

/// Newman-Girvan modularity of a node partition on the simple graph.
double modularity(const SimpleGraph& g, std::span<const std::uint32_t> community);
/// Entropy (bits) of community size fractions.
double community_entropy(std::span<const std::uint32_t> community);
/// Multilevel greedy modularity optimization (Louvain). Node visiting order is
/// a seeded permutation per pass, so the result is a function of (graph, seed).
CommunityResult louvain(const SimpleGraph& g, std::uint64_t seed);

struct StructuralProfile {
    double average_degree = 0.0;
    double degree_entropy = 0.0;
    double degree_centrality_mean = 0.0;
    double betweenness_centrality_mean = 0.0;
    double edge_betweenness_mean = 0.0;
    double closeness_centrality_mean = 0.0;
    double eigenvector_centrality_mean = 0.0;
    double eigenvector_residual = 0.0;
    double pagerank_mean = 0.0;
    double pagerank_sum = 0.0;
    double local_clustering_mean = 0.0;
    double global_clustering = 0.0;
    double transitivity = 0.0;
    double modularity = 0.0;
    std::size_t communities = 0;
    double structural_entropy = 0.0;
    MaybeValue assortativity;
    double algebraic_connectivity = 0.0;
    double spectral_gap = 0.0;
    std::size_t chromatic_number_estimate = 0;
    std::optional<std::size_t> girth;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::map<std::string, std::string> method_notes;
};

StructuralProfile structural_profile(const KnowledgeGraph& kg, const StructuralConfig& config = {});

}  // namespace kgcx
