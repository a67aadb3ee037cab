#include "kgcx/semantic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kgcx {

std::size_t relation_count(const KnowledgeGraph& kg) { return kg.num_relations(); }

std::vector<double> relation_frequencies(const KnowledgeGraph& kg) {
    std::vector<std::size_t> counts(kg.num_relations(), 0);
    for (const auto& t : kg.triples()) ++counts[t.relation];
    std::vector<double> p(counts.size(), 0.0);
    const auto total = static_cast<double>(kg.num_triples());
    for (std::size_t r = 0; r < counts.size(); ++r) p[r] = static_cast<double>(counts[r]) / total;
    return p;
}

double relation_entropy(const KnowledgeGraph& kg) {
    if (kg.num_triples() == 0) throw std::invalid_argument("relation entropy of an empty triple set");
    double h = 0.0;
    for (double p : relation_frequencies(kg)) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

std::vector<std::size_t> entity_relation_diversity(const KnowledgeGraph& kg) {
    std::vector<std::size_t> div(kg.num_entities(), 0);
    // Stamp array: seen[r] == e+1 when relation r was already counted for e.
    std::vector<std::size_t> seen(kg.num_relations(), 0);
    for (EntityId e = 0; e < kg.num_entities(); ++e) {
        std::size_t n = 0;
        for (const auto& inc : kg.out_edges(e)) {
            if (seen[inc.relation] != e + 1u) {
                seen[inc.relation] = e + 1u;
                ++n;
            }
        }
        for (const auto& inc : kg.in_edges(e)) {
            if (seen[inc.relation] != e + 1u) {
                seen[inc.relation] = e + 1u;
                ++n;
            }
        }
        div[e] = n;
    }
    return div;
}

std::pair<std::size_t, EntityId> max_relation_diversity(const KnowledgeGraph& kg) {
    const auto div = entity_relation_diversity(kg);
    if (div.empty()) return {0, 0};
    const auto it = std::max_element(div.begin(), div.end());
    return {*it, static_cast<EntityId>(it - div.begin())};
}

SemanticProfile semantic_profile(const KnowledgeGraph& kg) {
    SemanticProfile p;
    p.relation_count = relation_count(kg);
    p.relation_frequency = relation_frequencies(kg);
    p.relation_entropy = kg.num_triples() == 0 ? 0.0 : relation_entropy(kg);
    p.entity_diversity = entity_relation_diversity(kg);
    if (!p.entity_diversity.empty()) {
        const auto it = std::max_element(p.entity_diversity.begin(), p.entity_diversity.end());
        p.max_relation_diversity = *it;
        p.max_diversity_entity = static_cast<EntityId>(it - p.entity_diversity.begin());
    }
    return p;
}

}  // namespace kgcx
