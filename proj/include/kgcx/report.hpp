#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgcx/profile.hpp"
#include "kgcx/structural.hpp"

namespace kgcx {

/// Bad performance rows, too little dataset overlap, or other analysis-stage
/// failures. Maps to CLI exit code 4.
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PerformanceRow {
    std::string model;
    std::string dataset;
    double mrr = 0.0;
    double hits1 = 0.0;
    std::optional<double> hits3;
    double hits10 = 0.0;
};

struct PerformanceTable {
    std::vector<PerformanceRow> rows;
};

/// Parses `model,dataset,mrr,hits1,hits3,hits10` (hits3 may be empty). All row
/// problems are collected and reported together in one IngestError.
PerformanceTable parse_performance(const std::string& csv_text, const std::string& source = "<input>");
PerformanceTable load_performance(const std::filesystem::path& path);

struct MeanPerformance {
    double mrr = 0.0;
    double hits1 = 0.0;
    double hits10 = 0.0;
    std::size_t models = 0;
};

/// Unweighted mean across models, keyed by dataset.
std::map<std::string, MeanPerformance> mean_performance(const PerformanceTable& table);

/// Pearson r. Undefined (with reason) for length mismatch, n < 3 or zero variance.
MaybeValue pearson(std::span<const double> x, std::span<const double> y);

enum class Scaling { MinMax, ZScore };

struct NormalizedFeature {
    std::string metric;
    std::vector<double> values;  ///< aligned with the input profile order
    bool constant = false;       ///< all inputs equal; min-max maps them to 0.5
};

/// Per-metric scaling across profiles. Only metrics present in every profile are kept.
std::vector<NormalizedFeature> normalize_features(const std::vector<ProfileSummary>& profiles,
                                                  Scaling scaling = Scaling::MinMax);

struct CorrelationEntry {
    std::string metric;
    std::string target;  ///< mean_mrr, mean_hits1, mean_hits10
    MaybeValue r;
    std::size_t n = 0;
};

struct CorrelationReport {
    std::vector<std::string> datasets;  ///< sorted
    std::vector<CorrelationEntry> entries;
    std::map<std::string, std::string> files;  ///< file name -> contents
};

/// Correlates every metric with mean MRR, Hits@1 and Hits@10 over the datasets
/// present in both inputs. Output is independent of input order.
CorrelationReport build_report(const std::vector<ProfileSummary>& profiles, const PerformanceTable& performance,
                               Scaling scaling = Scaling::MinMax);

void write_report(const CorrelationReport& report, const std::filesystem::path& dir);

}  // namespace kgcx
