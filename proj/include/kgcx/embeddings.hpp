#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgcx/graph.hpp"

namespace kgcx {

/// A label requested from a file-backed table that the file does not contain.
class MissingLabelError : public std::runtime_error {
public:
    explicit MissingLabelError(const std::string& label)
        : std::runtime_error("no embedding for label '" + label + "'"), label_(label) {}
    const std::string& label() const { return label_; }

private:
    std::string label_;
};

/// Deterministic unit vector for `label`: approximately standard-normal
/// components keyed by (hash(label), seed, index), then L2-normalized.
std::vector<double> fallback_embed(std::string_view label, std::size_t dimension, std::uint64_t seed);

/// Label -> dense vector of fixed dimension, backed by a vector file or by
/// fallback_embed. Immutable after construction apart from the fill counter.
class EmbeddingTable {
public:
    /// Reads the text vector format: a "<count> <dimension>" header followed
    /// by "<label> v1 ... vd" rows.
    static EmbeddingTable load(const std::filesystem::path& path);
    static EmbeddingTable fallback(std::size_t dimension, std::uint64_t seed);

    std::size_t dimension() const { return dimension_; }
    bool is_fallback() const { return !stored_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t size() const { return rows_.size(); }
    bool contains(std::string_view label) const;

    /// Lets a file table answer unknown labels from fallback_embed(label, d, seed)
    /// instead of throwing. Each such answer is counted.
    void allow_fallback_fill(std::uint64_t seed);
    std::size_t fallback_fill_count() const { return fill_count_; }

    /// Copies the vector for `label` into `out` (length dimension()).
    void lookup(std::string_view label, std::span<double> out) const;
    std::vector<double> vector(std::string_view label) const;

    /// Writes the table in the text format (labels sorted for a canonical file).
    void save(const std::filesystem::path& path) const;

    /// Adds a row to a file-backed table. Used by tools and tests that build tables.
    void insert(std::string label, std::vector<double> values);
    static EmbeddingTable empty(std::size_t dimension);

private:
    std::size_t dimension_ = 0;
    bool stored_ = false;
    std::uint64_t seed_ = 0;
    bool fill_ = false;
    mutable std::size_t fill_count_ = 0;
    std::unordered_map<std::string, std::size_t> rows_;
    std::vector<double> values_;
};

/// phi(h, r) = e_h concatenated with e_r.
struct CompositeVector {
    EntityId head;
    RelationId relation;
    std::vector<double> values;
};

CompositeVector composite(const EmbeddingTable& table, const KnowledgeGraph& kg, EntityId head, RelationId relation);
std::vector<double> composite(const EmbeddingTable& table, std::string_view head, std::string_view relation);

}  // namespace kgcx
