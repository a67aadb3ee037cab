#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgcx/csg.hpp"
#include "kgcx/graph.hpp"
#include "kgcx/semantic.hpp"
#include "kgcx/structural.hpp"

namespace kgcx {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kProfileVersion = 1;

struct ComplexityProfile {
    std::string dataset;
    SplitSelection split_selection = SplitSelection::All;
    std::size_t entities = 0;
    std::size_t relations = 0;
    std::size_t triples = 0;
    std::map<std::string, std::size_t> split_sizes;
    SemanticProfile semantic;
    std::string max_diversity_label;
    std::vector<std::string> relation_labels;
    StructuralProfile structural;
    std::vector<CsgRecord> csg_records;
    nlohmann::json config;  ///< every parameter that affects a value
};

ComplexityProfile build_profile(const KnowledgeGraph& kg, const std::string& dataset, const StructuralConfig& config);

/// Hex digest of the canonical config JSON.
std::string config_hash(const nlohmann::json& config);

/// Versioned profile document (profile_version 1). Contains no timestamps, so
/// identical inputs give byte-identical output.
nlohmann::json to_json(const ComplexityProfile& profile);
nlohmann::json to_json(const CsgRecord& record);

/// Appends a CSG record to a profile document and refreshes its config hash.
void append_csg_record(nlohmann::json& profile, const CsgRecord& record);

/// Dataset name plus the scalar complexity metrics of a profile document, in a fixed order.
struct ProfileSummary {
    std::string dataset;
    std::vector<std::pair<std::string, double>> metrics;
};

/// Metric names extracted from profiles, in report order.
const std::vector<std::string>& profile_metric_names();
ProfileSummary summarize_profile(const nlohmann::json& profile);

}  // namespace kgcx
