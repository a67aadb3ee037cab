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
#include <utility>
#include <vector>

namespace kgcx {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
    EntityId head;
    RelationId relation;
    EntityId tail;

    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

enum class Split : std::uint8_t { Train = 0, Valid = 1, Test = 2 };
enum class SplitSelection : std::uint8_t { TrainOnly, All };

std::string_view to_string(Split split);
std::string_view to_string(SplitSelection selection);
SplitSelection parse_split_selection(std::string_view text);

/// Raised for unreadable or malformed input files. Maps to CLI exit code 2.
class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Insertion-ordered label dictionary with dense ids.
class Dictionary {
public:
    std::uint32_t intern(std::string_view label);
    std::optional<std::uint32_t> find(std::string_view label) const;
    const std::string& label(std::uint32_t id) const { return labels_[id]; }
    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> ids_;
};

/// One adjacency entry: the relation and the entity at the other end.
struct Incidence {
    RelationId relation;
    EntityId other;
};

/// Compressed adjacency: entries of node v are entries[offsets[v] .. offsets[v+1]).
template <class T>
struct Csr {
    std::vector<std::size_t> offsets;
    std::vector<T> entries;

    std::span<const T> row(std::size_t v) const {
        return {entries.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }
    std::size_t rows() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

/// Interned, immutable triple store. Triples keep file order within each split
/// and splits are concatenated train, valid, test. Duplicates are retained.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;
    KnowledgeGraph(Dictionary entities, Dictionary relations, std::vector<Triple> triples,
                   std::vector<Split> splits, SplitSelection selection);

    const Dictionary& entities() const { return entities_; }
    const Dictionary& relations() const { return relations_; }
    std::span<const Triple> triples() const { return triples_; }
    Split split_of(std::size_t triple_index) const { return splits_[triple_index]; }
    std::size_t split_size(Split split) const;
    SplitSelection selection() const { return selection_; }

    std::size_t num_entities() const { return entities_.size(); }
    std::size_t num_relations() const { return relations_.size(); }
    std::size_t num_triples() const { return triples_.size(); }

    /// (relation, tail) for every triple whose head is v.
    std::span<const Incidence> out_edges(EntityId v) const { return out_.row(v); }
    /// (relation, head) for every triple whose tail is v.
    std::span<const Incidence> in_edges(EntityId v) const { return in_.row(v); }

private:
    Dictionary entities_;
    Dictionary relations_;
    std::vector<Triple> triples_;
    std::vector<Split> splits_;
    SplitSelection selection_ = SplitSelection::All;
    Csr<Incidence> out_;
    Csr<Incidence> in_;
};

/// Accumulates labelled triples and interns them in first-seen order.
class GraphBuilder {
public:
    void add(std::string_view head, std::string_view relation, std::string_view tail,
             Split split = Split::Train);
    KnowledgeGraph build(SplitSelection selection = SplitSelection::All) &&;

private:
    Dictionary entities_;
    Dictionary relations_;
    std::vector<Triple> triples_;
    std::vector<Split> splits_;
};

/// Parses one `head<TAB>relation<TAB>tail` file into the builder. Empty lines are
/// skipped; a trailing carriage return is dropped.
void parse_triple_file(const std::filesystem::path& file, Split split, GraphBuilder& builder);

/// Loads train.txt, and valid.txt + test.txt when `selection` is All.
KnowledgeGraph load_dataset(const std::filesystem::path& dir, SplitSelection selection);

/// Writes train.txt / valid.txt / test.txt reproducing the loaded triples.
void write_dataset(const KnowledgeGraph& kg, const std::filesystem::path& dir);

/// Normalized dump: a header record with the label tables, then one triple per line.
void write_jsonl(const KnowledgeGraph& kg, const std::filesystem::path& file);
KnowledgeGraph read_jsonl(const std::filesystem::path& file);

/// Undirected simple graph over entity ids with the multigraph annotations the
/// girth computation needs.
class SimpleGraph {
public:
    SimpleGraph() = default;

    /// Builds from undirected pairs. Self-pairs set the self-loop flag, repeated
    /// pairs raise the multiplicity of the edge.
    static SimpleGraph from_edges(std::size_t num_nodes,
                                  std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

    std::size_t num_nodes() const { return adjacency_.rows(); }
    std::size_t num_edges() const { return adjacency_.entries.size() / 2; }
    std::span<const std::uint32_t> neighbors(std::size_t v) const { return adjacency_.row(v); }
    std::size_t degree(std::size_t v) const { return adjacency_.offsets[v + 1] - adjacency_.offsets[v]; }
    /// Multiplicities aligned with neighbors(v).
    std::span<const std::uint32_t> multiplicities(std::size_t v) const {
        return {multiplicity_.data() + adjacency_.offsets[v], degree(v)};
    }
    std::size_t adjacency_offset(std::size_t v) const { return adjacency_.offsets[v]; }
    bool has_self_loop(std::size_t v) const { return self_loop_[v] != 0; }
    bool any_self_loop() const;
    bool any_parallel_edge() const;

    /// Edges as (u, v) with u < v, ordered by u then v.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list() const;

private:
    Csr<std::uint32_t> adjacency_;
    std::vector<std::uint32_t> multiplicity_;
    std::vector<std::uint8_t> self_loop_;
};

/// Collapses the triple multiset: one edge per unordered entity pair, distinct
/// triples counted as multiplicity, self-loop triples flagged.
SimpleGraph undirected_view(const KnowledgeGraph& kg);

}  // namespace kgcx
