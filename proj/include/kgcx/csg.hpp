#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kgcx/embeddings.hpp"
#include "kgcx/graph.hpp"
#include "kgcx/knn.hpp"

namespace kgcx {

/// Raised when a CSG run is infeasible for the data (too many classes, too
/// few vectors, bad parameters). Maps to CLI exit code 3.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ClassSelection {
    enum class Kind { All, TopFrequency, Random };
    Kind kind = Kind::All;
    std::size_t count = 0;  ///< ignored for All

    static ClassSelection all() { return {Kind::All, 0}; }
    static ClassSelection top(std::size_t m) { return {Kind::TopFrequency, m}; }
    static ClassSelection random(std::size_t m) { return {Kind::Random, m}; }
};

std::string to_string(const ClassSelection& selection);

/// One tail entity and the distinct (head, relation) pairs pointing at it.
struct TailClass {
    EntityId tail;
    std::vector<std::pair<EntityId, RelationId>> members;
    std::size_t incoming = 0;  ///< triples with this tail, duplicates included
};

struct ClassPartition {
    std::vector<TailClass> classes;
    ClassSelection selection;

    std::size_t size() const { return classes.size(); }
};

/// Groups triples by tail. Selected classes are ordered by tail id.
///   All            every distinct tail
///   TopFrequency   the M tails with most incoming triples, ties to smaller id
///   Random         M tails drawn uniformly without replacement from `seed`
ClassPartition partition_by_tail(const KnowledgeGraph& kg, ClassSelection selection, std::uint64_t seed);

struct CsgConfig {
    std::size_t k = 50;
    std::size_t n_samples = 120;
    std::optional<std::size_t> k_c;  ///< unset means M-1
    std::uint64_t seed = 42;
    int threads = 0;
    std::size_t dense_limit = 4096;  ///< above this M only the spectrum ends are computed
};

/// Composite vectors of every selected class, class-major, plus per-class counts.
struct SampledClasses {
    PointSet points;
    std::vector<std::size_t> class_sizes;
    std::vector<std::vector<std::size_t>> member_indices;  ///< which members were drawn, ascending

    std::size_t num_classes() const { return class_sizes.size(); }
};

/// Keeps min(n_samples, |class|) members per class, drawn without replacement
/// from a per-class stream derived from config.seed.
SampledClasses sample_class_vectors(const ClassPartition& partition, const KnowledgeGraph& kg,
                                    const EmbeddingTable& table, const CsgConfig& config);

/// Indices drawn from a class of `size` members (ascending); all of them if size <= cap.
std::vector<std::size_t> sample_indices(std::size_t size, std::size_t cap, std::uint64_t seed);

/// Row-major M x M class-overlap matrix. Row i is the fraction of the k
/// neighbors of class-i samples that fall in each class, over a pool made of
/// every sampled vector; each row sums to 1.
Eigen::MatrixXd similarity_from_neighbors(const SampledClasses& sampled, const std::vector<std::uint32_t>& neighbors,
                                          std::size_t neighbors_per_point, std::size_t k);
Eigen::MatrixXd build_similarity(const SampledClasses& sampled, std::size_t k, int threads = 0);

struct SpectralResult {
    Eigen::MatrixXd similarity;  ///< as given, before symmetrization
    Eigen::VectorXd degree;      ///< of the symmetrized matrix
    Eigen::MatrixXd laplacian;   ///< I - D^-1/2 S_sym D^-1/2
    std::vector<double> eigenvalues;  ///< non-decreasing; only {min, max} when partial
    bool partial = false;
    double max_residual = 0.0;

    std::size_t classes() const { return static_cast<std::size_t>(similarity.rows()); }
    double lambda_min() const { return eigenvalues.front(); }
    double lambda_max() const { return eigenvalues.back(); }
    /// lambda_{k_c} - lambda_0, for 1 <= k_c <= M-1.
    double csg_at(std::size_t k_c) const;
    double csg_full() const { return lambda_max() - lambda_min(); }
};

/// Symmetrizes S, forms the normalized Laplacian (zero-degree rows get a zero
/// inverse square root) and returns its sorted spectrum.
SpectralResult laplacian_spectrum(const Eigen::MatrixXd& similarity, std::size_t dense_limit = 4096);

/// Sum of the first k_c eigenvalue gaps.
double csg(const SpectralResult& result, std::size_t k_c);

struct CsgRecord {
    std::size_t k = 0;
    std::size_t classes = 0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    std::string selection;
    std::size_t k_c = 0;
    double csg_at_kc = 0.0;
    double csg_full = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::size_t total_vectors = 0;
};

/// Full pipeline: partition, sample, k-NN, similarity, spectrum.
CsgRecord run_csg(const KnowledgeGraph& kg, const EmbeddingTable& table, ClassSelection selection,
                  const CsgConfig& config, SpectralResult* spectrum_out = nullptr);

struct SweepRow {
    std::size_t k;
    std::size_t classes;
    std::size_t n_samples;
    std::uint64_t seed;
    double csg_full;
    double lambda_min;
    double lambda_max;
};

/// CSG over a grid of k and M. For a given M the class selection and the
/// sampled vectors are fixed, so only k varies along a row group. Rows are
/// ordered by M (as given) then k (as given).
std::vector<SweepRow> sweep(const KnowledgeGraph& kg, const EmbeddingTable& table, const std::vector<std::size_t>& ks,
                            const std::vector<std::size_t>& class_counts, const CsgConfig& base,
                            ClassSelection::Kind kind = ClassSelection::Kind::TopFrequency);

/// Plot-ready CSV with header dataset,k,M,n_samples,seed,csg_full,lambda_min,lambda_max.
std::string sweep_csv(const std::string& dataset, const std::vector<SweepRow>& rows);

}  // namespace kgcx
