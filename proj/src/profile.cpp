#include "kgcx/profile.hpp"

#include <cmath>
#include <cstdio>

#include "kgcx/random.hpp"

namespace kgcx {

using nlohmann::json;

ComplexityProfile build_profile(const KnowledgeGraph& kg, const std::string& dataset, const StructuralConfig& config) {
    ComplexityProfile p;
    p.dataset = dataset;
    p.split_selection = kg.selection();
    p.entities = kg.num_entities();
    p.relations = kg.num_relations();
    p.triples = kg.num_triples();
    for (Split s : {Split::Train, Split::Valid, Split::Test}) p.split_sizes[std::string(to_string(s))] = kg.split_size(s);
    p.semantic = semantic_profile(kg);
    if (kg.num_entities() > 0) p.max_diversity_label = kg.entities().label(p.semantic.max_diversity_entity);
    p.relation_labels = kg.relations().labels();
    p.structural = structural_profile(kg, config);
    p.config = {
        {"split_selection", std::string(to_string(kg.selection()))},
        {"seed", config.seed},
        {"exact_betweenness_limit", config.exact_betweenness_limit},
        {"max_pivots", config.max_pivots},
        {"pivots", config.pivots ? json(*config.pivots) : json(nullptr)},
        {"eigenvector_tolerance", config.eigenvector_tolerance},
        {"eigenvector_max_iterations", config.eigenvector_max_iterations},
        {"pagerank_damping", config.pagerank_damping},
        {"pagerank_tolerance", config.pagerank_tolerance},
        {"dense_spectral_limit", config.dense_spectral_limit},
        {"spectral_tolerance", config.spectral_tolerance},
    };
    return p;
}

std::string config_hash(const json& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
    return buf;
}

namespace {

json maybe(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const CsgRecord& r) {
    return {
        {"k", r.k},
        {"M", r.classes},
        {"n_samples", r.n_samples},
        {"seed", r.seed},
        {"class_selection", r.selection},
        {"k_c", r.k_c},
        {"csg_at_k_c", maybe(r.csg_at_kc)},
        {"csg_full", maybe(r.csg_full)},
        {"lambda_min", maybe(r.lambda_min)},
        {"lambda_max", maybe(r.lambda_max)},
        {"total_vectors", r.total_vectors},
    };
}

json to_json(const ComplexityProfile& p) {
    json freq = json::object();
    for (std::size_t r = 0; r < p.relation_labels.size(); ++r) freq[p.relation_labels[r]] = p.semantic.relation_frequency[r];

    const auto& s = p.structural;
    json structural = {
        {"nodes", s.nodes},
        {"edges", s.edges},
        {"average_degree", s.average_degree},
        {"degree_entropy", s.degree_entropy},
        {"degree_centrality_mean", s.degree_centrality_mean},
        {"betweenness_centrality_mean", s.betweenness_centrality_mean},
        {"edge_betweenness_mean", s.edge_betweenness_mean},
        {"closeness_centrality_mean", s.closeness_centrality_mean},
        {"eigenvector_centrality_mean", s.eigenvector_centrality_mean},
        {"eigenvector_residual", s.eigenvector_residual},
        {"pagerank_mean", s.pagerank_mean},
        {"pagerank_sum", s.pagerank_sum},
        {"local_clustering_mean", s.local_clustering_mean},
        {"global_clustering", s.global_clustering},
        {"transitivity", s.transitivity},
        {"modularity", s.modularity},
        {"communities", s.communities},
        {"structural_entropy", s.structural_entropy},
        {"assortativity", s.assortativity.value ? json(*s.assortativity.value) : json(nullptr)},
        {"algebraic_connectivity", s.algebraic_connectivity},
        {"spectral_gap", s.spectral_gap},
        {"chromatic_number_estimate", s.chromatic_number_estimate},
        {"chromatic_estimate", true},
        {"girth", s.girth ? json(*s.girth) : json(nullptr)},
        {"girth_infinite", !s.girth.has_value()},
        {"method_notes", s.method_notes},
    };
    if (!s.assortativity.value) structural["assortativity_undefined_reason"] = s.assortativity.reason;

    json csg = json::array();
    for (const auto& r : p.csg_records) csg.push_back(to_json(r));

    json doc = {
        {"profile_version", kProfileVersion},
        {"dataset", p.dataset},
        {"split_selection", std::string(to_string(p.split_selection))},
        {"counts",
         {{"entities", p.entities}, {"relations", p.relations}, {"triples", p.triples}, {"splits", p.split_sizes}}},
        {"semantic",
         {{"relation_count", p.semantic.relation_count},
          {"relation_entropy", p.semantic.relation_entropy},
          {"max_relation_diversity", p.semantic.max_relation_diversity},
          {"max_diversity_entity", p.max_diversity_label},
          {"relation_frequency", freq}}},
        {"structural", structural},
        {"csg_records", csg},
        {"provenance",
         {{"tool", "kgcx"}, {"tool_version", kToolVersion}, {"config", p.config}, {"config_hash", config_hash(p.config)}}},
    };
    return doc;
}

void append_csg_record(json& profile, const CsgRecord& record) {
    profile["csg_records"].push_back(to_json(record));
    auto& prov = profile["provenance"];
    prov["config"]["csg_records"] = profile["csg_records"].size();
    json params = json::array();
    for (const auto& r : profile["csg_records"]) {
        params.push_back({r["k"], r["M"], r["n_samples"], r["seed"], r["class_selection"], r["k_c"]});
    }
    prov["config"]["csg_parameters"] = params;
    prov["config_hash"] = config_hash(prov["config"]);
}

const std::vector<std::string>& profile_metric_names() {
    static const std::vector<std::string> names = {
        "csg_full",
        "relation_entropy",
        "relation_count",
        "max_relation_diversity",
        "edge_betweenness_mean",
        "modularity",
        "structural_entropy",
        "assortativity",
        "average_degree",
        "degree_centrality_mean",
        "betweenness_centrality_mean",
        "closeness_centrality_mean",
        "eigenvector_centrality_mean",
        "pagerank_mean",
        "local_clustering_mean",
        "global_clustering",
        "transitivity",
        "algebraic_connectivity",
        "spectral_gap",
        "degree_entropy",
        "chromatic_number_estimate",
        "girth",
    };
    return names;
}

ProfileSummary summarize_profile(const json& profile) {
    ProfileSummary s;
    s.dataset = profile.at("dataset").get<std::string>();
    const auto& sem = profile.at("semantic");
    const auto& st = profile.at("structural");
    const json empty = json::array();
    const json& recs = profile.contains("csg_records") ? profile.at("csg_records") : empty;
    for (const auto& name : profile_metric_names()) {
        const json* value = nullptr;
        if (name == "csg_full") {
            if (!recs.empty()) value = &recs.back().at("csg_full");
        } else if (sem.contains(name)) {
            value = &sem.at(name);
        } else if (st.contains(name)) {
            value = &st.at(name);
        }
        if (value && value->is_number()) s.metrics.emplace_back(name, value->get<double>());
    }
    return s;
}

}  // namespace kgcx
