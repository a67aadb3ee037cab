#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "kgcx/graph.hpp"

namespace kgcx {

struct SemanticProfile {
    std::size_t relation_count = 0;
    double relation_entropy = 0.0;  ///< bits
    std::size_t max_relation_diversity = 0;
    EntityId max_diversity_entity = 0;
    std::vector<double> relation_frequency;     ///< p(r) over the triple multiset
    std::vector<std::size_t> entity_diversity;  ///< distinct relations incident to e, both directions
};

/// Number of interned relations.
std::size_t relation_count(const KnowledgeGraph& kg);

/// Shannon entropy (bits) of relation frequencies over the triple multiset.
/// Throws std::invalid_argument for an empty graph.
double relation_entropy(const KnowledgeGraph& kg);

std::vector<double> relation_frequencies(const KnowledgeGraph& kg);
std::vector<std::size_t> entity_relation_diversity(const KnowledgeGraph& kg);

/// (max Div(e), smallest arg-max entity).
std::pair<std::size_t, EntityId> max_relation_diversity(const KnowledgeGraph& kg);

SemanticProfile semantic_profile(const KnowledgeGraph& kg);

}  // namespace kgcx
