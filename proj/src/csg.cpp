#include "kgcx/csg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kgcx/eigensolvers.hpp"
#include "kgcx/format.hpp"
#include "kgcx/random.hpp"

namespace kgcx {

std::string to_string(const ClassSelection& selection) {
    switch (selection.kind) {
        case ClassSelection::Kind::All: return "all";
        case ClassSelection::Kind::TopFrequency: return "top:" + std::to_string(selection.count);
        case ClassSelection::Kind::Random: return "random:" + std::to_string(selection.count);
    }
    return "all";
}

ClassPartition partition_by_tail(const KnowledgeGraph& kg, ClassSelection selection, std::uint64_t seed) {
    if (kg.num_triples() == 0) throw ComputationError("cannot partition an empty graph");

    std::vector<EntityId> tails;
    for (EntityId e = 0; e < kg.num_entities(); ++e) {
        if (!kg.in_edges(e).empty()) tails.push_back(e);
    }
    if (selection.kind != ClassSelection::Kind::All) {
        if (selection.count == 0) throw ComputationError("class count M must be at least 1");
        if (selection.count > tails.size()) {
            throw ComputationError("requested M=" + std::to_string(selection.count) + " classes but the graph has only " +
                                   std::to_string(tails.size()) + " distinct tail entities");
        }
    }

    if (selection.kind == ClassSelection::Kind::TopFrequency) {
        std::stable_sort(tails.begin(), tails.end(), [&](EntityId a, EntityId b) {
            return kg.in_edges(a).size() > kg.in_edges(b).size();
        });
        tails.resize(selection.count);
        std::sort(tails.begin(), tails.end());
    } else if (selection.kind == ClassSelection::Kind::Random) {
        SplitMix64 rng(derive_seed(seed, "partition"));
        // Partial Fisher-Yates: the first M slots become the sample.
        for (std::size_t i = 0; i < selection.count; ++i) {
            const std::size_t j = i + rng.bounded(tails.size() - i);
            std::swap(tails[i], tails[j]);
        }
        tails.resize(selection.count);
        std::sort(tails.begin(), tails.end());
    }

    ClassPartition partition;
    partition.selection = selection;
    partition.classes.reserve(tails.size());
    for (EntityId tail : tails) {
        TailClass c;
        c.tail = tail;
        const auto incoming = kg.in_edges(tail);
        c.incoming = incoming.size();
        c.members.reserve(incoming.size());
        for (const auto& inc : incoming) c.members.emplace_back(inc.other, inc.relation);
        std::sort(c.members.begin(), c.members.end());
        c.members.erase(std::unique(c.members.begin(), c.members.end()), c.members.end());
        partition.classes.push_back(std::move(c));
    }
    return partition;
}

std::vector<std::size_t> sample_indices(std::size_t size, std::size_t cap, std::uint64_t seed) {
    std::vector<std::size_t> idx(size);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (size <= cap) return idx;
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < cap; ++i) {
        const std::size_t j = i + rng.bounded(size - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    return idx;
}

SampledClasses sample_class_vectors(const ClassPartition& partition, const KnowledgeGraph& kg,
                                    const EmbeddingTable& table, const CsgConfig& config) {
    if (config.n_samples == 0) throw ComputationError("n_samples must be at least 1");
    const std::uint64_t sampling_seed = derive_seed(config.seed, "sampling");
    const std::size_t d = table.dimension();

    SampledClasses out;
    out.points.dimension = 2 * d;
    std::size_t total = 0;
    for (const auto& c : partition.classes) total += std::min(c.members.size(), config.n_samples);
    out.points.coords.resize(total * 2 * d);
    out.points.class_of.reserve(total);

    std::size_t row = 0;
    for (std::size_t ci = 0; ci < partition.classes.size(); ++ci) {
        const auto& c = partition.classes[ci];
        auto picked = sample_indices(c.members.size(), config.n_samples, mix64(sampling_seed ^ mix64(c.tail)));
        for (std::size_t m : picked) {
            const auto [head, relation] = c.members[m];
            std::span<double> dst(out.points.coords.data() + row * 2 * d, 2 * d);
            table.lookup(kg.entities().label(head), dst.first(d));
            table.lookup(kg.relations().label(relation), dst.subspan(d));
            out.points.class_of.push_back(static_cast<std::uint32_t>(ci));
            ++row;
        }
        out.class_sizes.push_back(picked.size());
        out.member_indices.push_back(std::move(picked));
    }
    return out;
}

Eigen::MatrixXd similarity_from_neighbors(const SampledClasses& sampled, const std::vector<std::uint32_t>& neighbors,
                                          std::size_t neighbors_per_point, std::size_t k) {
    const auto m = static_cast<Eigen::Index>(sampled.num_classes());
    if (k == 0 || k > neighbors_per_point) throw ComputationError("invalid neighbor count");
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(m, m);
    const auto& cls = sampled.points.class_of;
    for (std::size_t q = 0; q < cls.size(); ++q) {
        const std::uint32_t* row = neighbors.data() + q * neighbors_per_point;
        for (std::size_t j = 0; j < k; ++j) counts(cls[q], cls[row[j]]) += 1.0;
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto n_i = static_cast<double>(sampled.class_sizes[static_cast<std::size_t>(i)]);
        if (n_i > 0) counts.row(i) /= n_i * static_cast<double>(k);
    }
    return counts;
}

Eigen::MatrixXd build_similarity(const SampledClasses& sampled, std::size_t k, int threads) {
    if (k == 0) throw ComputationError("k must be at least 1");
    if (sampled.points.size() < k + 1) {
        throw ComputationError("k-NN needs at least k+1 sampled vectors (k=" + std::to_string(k) +
                               ", vectors=" + std::to_string(sampled.points.size()) + ")");
    }
    const auto neighbors = knn_parallel(sampled.points, k, threads);
    return similarity_from_neighbors(sampled, neighbors, k, k);
}

double SpectralResult::csg_at(std::size_t k_c) const {
    const std::size_t m = partial ? classes() : eigenvalues.size();
    if (m < 2 || k_c < 1 || k_c > m - 1) {
        throw ComputationError("k_c=" + std::to_string(k_c) + " outside [1, " + std::to_string(m == 0 ? 0 : m - 1) +
                               "]");
    }
    if (partial) {
        if (k_c != m - 1) throw ComputationError("only the full CSG is available for a partial spectrum");
        return csg_full();
    }
    return eigenvalues[k_c] - eigenvalues[0];
}

double csg(const SpectralResult& result, std::size_t k_c) { return result.csg_at(k_c); }

SpectralResult laplacian_spectrum(const Eigen::MatrixXd& similarity, std::size_t dense_limit) {
    if (similarity.rows() != similarity.cols()) throw ComputationError("similarity matrix must be square");
    if (!similarity.allFinite()) throw ComputationError("similarity matrix has non-finite entries");
    if ((similarity.array() < 0.0).any()) throw ComputationError("similarity matrix has negative entries");
    const Eigen::Index m = similarity.rows();

    SpectralResult out;
    out.similarity = similarity;
    if (m == 0) {
        out.eigenvalues = {0.0};
        return out;
    }
    const Eigen::MatrixXd sym = 0.5 * (similarity + similarity.transpose());
    out.degree = sym.rowwise().sum();
    Eigen::VectorXd inv_sqrt(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        inv_sqrt[i] = out.degree[i] > 0.0 ? 1.0 / std::sqrt(out.degree[i]) : 0.0;
    }
    out.laplacian = -(inv_sqrt.asDiagonal() * sym * inv_sqrt.asDiagonal());
    out.laplacian.diagonal().array() += 1.0;

    if (static_cast<std::size_t>(m) <= dense_limit) {
        const auto spectrum = dense_symmetric_eigen(out.laplacian);
        out.eigenvalues.assign(spectrum.values.data(), spectrum.values.data() + m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double r = (out.laplacian * spectrum.vectors.col(i) - spectrum.values[i] * spectrum.vectors.col(i)).norm();
            out.max_residual = std::max(out.max_residual, r);
        }
        return out;
    }

    const Eigen::MatrixXd& lap = out.laplacian;
    SymmetricOperator op = [&lap](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = lap * x; };
    KrylovOptions opt;
    opt.tolerance = 1e-9;
    const auto low = krylov_extreme(op, m, 1, SpectrumEnd::Smallest, {}, opt);
    const auto high = krylov_extreme(op, m, 1, SpectrumEnd::Largest, {}, opt);
    out.eigenvalues = {low[0].value, high[0].value};
    out.partial = true;
    out.max_residual = std::max(low[0].residual, high[0].residual);
    return out;
}

namespace {

SampledClasses sample_for(const KnowledgeGraph& kg, const EmbeddingTable& table, ClassSelection selection,
                          const CsgConfig& config) {
    const auto partition = partition_by_tail(kg, selection, config.seed);
    if (partition.size() < 2) throw ComputationError("CSG needs at least 2 classes");
    return sample_class_vectors(partition, kg, table, config);
}

}  // namespace

CsgRecord run_csg(const KnowledgeGraph& kg, const EmbeddingTable& table, ClassSelection selection,
                  const CsgConfig& config, SpectralResult* spectrum_out) {
    const auto sampled = sample_for(kg, table, selection, config);
    const std::size_t m = sampled.num_classes();
    const std::size_t k_c = config.k_c.value_or(m - 1);
    if (k_c < 1 || k_c > m - 1) {
        throw ComputationError("k_c=" + std::to_string(k_c) + " outside [1, " + std::to_string(m - 1) + "]");
    }
    const auto similarity = build_similarity(sampled, config.k, config.threads);
    auto spectrum = laplacian_spectrum(similarity, config.dense_limit);

    CsgRecord rec;
    rec.k = config.k;
    rec.classes = m;
    rec.n_samples = config.n_samples;
    rec.seed = config.seed;
    rec.selection = to_string(selection);
    rec.k_c = k_c;
    rec.csg_at_kc = spectrum.csg_at(k_c);
    rec.csg_full = spectrum.csg_full();
    rec.lambda_min = spectrum.lambda_min();
    rec.lambda_max = spectrum.lambda_max();
    rec.total_vectors = sampled.points.size();
    if (spectrum_out) *spectrum_out = std::move(spectrum);
    return rec;
}

std::vector<SweepRow> sweep(const KnowledgeGraph& kg, const EmbeddingTable& table, const std::vector<std::size_t>& ks,
                            const std::vector<std::size_t>& class_counts, const CsgConfig& base,
                            ClassSelection::Kind kind) {
    if (ks.empty() || class_counts.empty()) throw ComputationError("sweep ranges must be non-empty");
    const std::size_t k_max = *std::max_element(ks.begin(), ks.end());
    if (*std::min_element(ks.begin(), ks.end()) == 0) throw ComputationError("k must be at least 1");

    std::vector<SweepRow> rows;
    for (std::size_t m : class_counts) {
        const ClassSelection selection =
            kind == ClassSelection::Kind::Random ? ClassSelection::random(m) : ClassSelection::top(m);
        const auto sampled = sample_for(kg, table, selection, base);
        if (sampled.points.size() < k_max + 1) {
            throw ComputationError("k-NN needs at least k+1 sampled vectors (k=" + std::to_string(k_max) +
                                   ", vectors=" + std::to_string(sampled.points.size()) + ")");
        }
        // Neighbor lists for the largest k; smaller k use their prefixes.
        const auto neighbors = knn_parallel(sampled.points, k_max, base.threads);
        for (std::size_t k : ks) {
            const auto spectrum = laplacian_spectrum(similarity_from_neighbors(sampled, neighbors, k_max, k),
                                                     base.dense_limit);
            rows.push_back({k, sampled.num_classes(), base.n_samples, base.seed, spectrum.csg_full(),
                            spectrum.lambda_min(), spectrum.lambda_max()});
        }
    }
    return rows;
}

std::string sweep_csv(const std::string& dataset, const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "dataset,k,M,n_samples,seed,csg_full,lambda_min,lambda_max\n";
    for (const auto& r : rows) {
        out << dataset << ',' << r.k << ',' << r.classes << ',' << r.n_samples << ',' << r.seed << ','
            << format_double(r.csg_full) << ',' << format_double(r.lambda_min) << ',' << format_double(r.lambda_max)
            << '\n';
    }
    return out.str();
}

}  // namespace kgcx
