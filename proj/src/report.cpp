#include "kgcx/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "kgcx/format.hpp"
#include "kgcx/graph.hpp"

namespace kgcx {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_number(const std::string& text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

PerformanceTable parse_performance(const std::string& csv_text, const std::string& source) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw IngestError(source + ": empty performance file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "model,dataset,mrr,hits1,hits3,hits10") {
        throw IngestError(source + ": header must be model,dataset,mrr,hits1,hits3,hits10");
    }
    PerformanceTable table;
    std::vector<std::string> problems;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        const auto fields = split_commas(line);
        if (fields.size() != 6) {
            problems.push_back(where + "expected 6 fields");
            continue;
        }
        PerformanceRow row;
        row.model = fields[0];
        row.dataset = fields[1];
        if (row.model.empty() || row.dataset.empty()) {
            problems.push_back(where + "model and dataset must be non-empty");
            continue;
        }
        bool ok = true;
        auto read = [&](const std::string& text, const char* name, double& out) {
            const auto v = parse_number(text);
            if (!v) {
                problems.push_back(where + name + " is not a number");
                ok = false;
            } else if (*v < 0.0 || *v > 1.0) {
                problems.push_back(where + name + "=" + text + " outside [0, 1]");
                ok = false;
            } else {
                out = *v;
            }
        };
        read(fields[2], "mrr", row.mrr);
        read(fields[3], "hits1", row.hits1);
        if (!fields[4].empty()) {
            double h3 = 0.0;
            read(fields[4], "hits3", h3);
            row.hits3 = h3;
        }
        read(fields[5], "hits10", row.hits10);
        if (!ok) continue;
        const double upper = row.hits3.value_or(row.hits10);
        if (row.hits1 > upper || upper > row.hits10) {
            problems.push_back(where + "ordering violation: requires hits1 <= hits3 <= hits10");
            continue;
        }
        if (row.mrr < row.hits1) {
            problems.push_back(where + "ordering violation: requires mrr >= hits1");
            continue;
        }
        table.rows.push_back(std::move(row));
    }
    if (!problems.empty()) {
        std::string msg = "invalid performance rows:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw IngestError(msg);
    }
    return table;
}

PerformanceTable load_performance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open performance file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_performance(buf.str(), path.string());
}

std::map<std::string, MeanPerformance> mean_performance(const PerformanceTable& table) {
    std::map<std::string, MeanPerformance> means;
    for (const auto& row : table.rows) {
        auto& m = means[row.dataset];
        m.mrr += row.mrr;
        m.hits1 += row.hits1;
        m.hits10 += row.hits10;
        ++m.models;
    }
    for (auto& [name, m] : means) {
        const auto n = static_cast<double>(m.models);
        m.mrr /= n;
        m.hits1 /= n;
        m.hits10 /= n;
    }
    return means;
}

MaybeValue pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) return {std::nullopt, "length mismatch"};
    if (x.size() < 3) return {std::nullopt, "fewer than 3 observations"};
    // Welford co-moment updates.
    double mean_x = 0.0;
    double mean_y = 0.0;
    double m2x = 0.0;
    double m2y = 0.0;
    double cxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        mean_x += dx / n;
        mean_y += dy / n;
        m2x += dx * (x[i] - mean_x);
        m2y += dy * (y[i] - mean_y);
        cxy += dx * (y[i] - mean_y);
    }
    if (!(m2x > 0.0) || !(m2y > 0.0)) return {std::nullopt, "zero variance"};
    const double r = cxy / std::sqrt(m2x * m2y);
    return {std::clamp(r, -1.0, 1.0), ""};
}

std::vector<NormalizedFeature> normalize_features(const std::vector<ProfileSummary>& profiles, Scaling scaling) {
    std::vector<NormalizedFeature> out;
    if (profiles.empty()) return out;
    for (const auto& name : profile_metric_names()) {
        std::vector<double> raw;
        for (const auto& p : profiles) {
            const auto it = std::find_if(p.metrics.begin(), p.metrics.end(), [&](const auto& m) { return m.first == name; });
            if (it == p.metrics.end()) break;
            raw.push_back(it->second);
        }
        if (raw.size() != profiles.size()) continue;
        NormalizedFeature f{name, raw, false};
        const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
        if (*hi - *lo == 0.0) {
            f.constant = true;
            std::fill(f.values.begin(), f.values.end(), scaling == Scaling::MinMax ? 0.5 : 0.0);
        } else if (scaling == Scaling::MinMax) {
            for (double& v : f.values) v = (v - *lo) / (*hi - *lo);
        } else {
            const double mu = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
            double var = 0.0;
            for (double v : raw) var += (v - mu) * (v - mu);
            const double sd = std::sqrt(var / static_cast<double>(raw.size()));
            for (double& v : f.values) v = (v - mu) / sd;
        }
        out.push_back(std::move(f));
    }
    return out;
}

namespace {

std::string fmt(const MaybeValue& v) { return v.value ? format_double(*v.value) : std::string(); }

}  // namespace

CorrelationReport build_report(const std::vector<ProfileSummary>& profiles, const PerformanceTable& performance,
                               Scaling scaling) {
    const auto means = mean_performance(performance);
    std::vector<ProfileSummary> used;
    for (const auto& p : profiles) {
        if (means.count(p.dataset) == 0) continue;
        if (std::any_of(used.begin(), used.end(), [&](const auto& u) { return u.dataset == p.dataset; })) {
            throw AnalysisError("duplicate profile for dataset '" + p.dataset + "'");
        }
        used.push_back(p);
    }
    if (used.size() < 3) {
        throw AnalysisError("correlation needs at least 3 datasets present in both profiles and performance table; found " +
                            std::to_string(used.size()));
    }
    std::sort(used.begin(), used.end(), [](const auto& a, const auto& b) { return a.dataset < b.dataset; });

    CorrelationReport report;
    for (const auto& p : used) report.datasets.push_back(p.dataset);
    const auto features = normalize_features(used, scaling);

    struct Target {
        const char* name;
        const char* file;
        double MeanPerformance::*field;
    };
    const Target targets[] = {{"mean_mrr", "features_vs_mrr.csv", &MeanPerformance::mrr},
                              {"mean_hits1", "features_vs_hits1.csv", &MeanPerformance::hits1},
                              {"mean_hits10", "features_vs_hits10.csv", &MeanPerformance::hits10}};

    std::ostringstream corr;
    corr << "metric,target,pearson_r,n,note\n";
    for (const auto& f : features) {
        std::vector<double> raw;
        for (const auto& p : used) {
            for (const auto& [name, value] : p.metrics) {
                if (name == f.metric) raw.push_back(value);
            }
        }
        for (const auto& t : targets) {
            std::vector<double> y;
            for (const auto& p : used) y.push_back(means.at(p.dataset).*(t.field));
            CorrelationEntry e{f.metric, t.name, pearson(raw, y), used.size()};
            corr << e.metric << ',' << e.target << ',' << fmt(e.r) << ',' << e.n << ',' << e.r.reason << '\n';
            report.entries.push_back(std::move(e));
        }
    }
    report.files["correlations.csv"] = corr.str();

    for (const auto& t : targets) {
        std::ostringstream out;
        out << "dataset,metric,normalized_value,raw_value," << t.name << '\n';
        for (std::size_t d = 0; d < used.size(); ++d) {
            for (const auto& f : features) {
                double raw = 0.0;
                for (const auto& [name, value] : used[d].metrics) {
                    if (name == f.metric) raw = value;
                }
                out << used[d].dataset << ',' << f.metric << ',' << format_double(f.values[d]) << ','
                    << format_double(raw) << ',' << format_double(means.at(used[d].dataset).*(t.field)) << '\n';
            }
        }
        report.files[t.file] = out.str();
    }

    std::ostringstream md;
    md << "# Complexity vs. performance\n\n";
    md << "Datasets (n = " << used.size() << "):";
    for (const auto& d : report.datasets) md << ' ' << d;
    md << "\n\nPearson r between each complexity metric and the per-dataset mean over models. "
          "Rows are ranked by |r|; undefined correlations are listed last.\n";
    for (const auto& t : targets) {
        std::vector<const CorrelationEntry*> rows;
        for (const auto& e : report.entries) {
            if (e.target == t.name) rows.push_back(&e);
        }
        std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
            const double ra = a->r.value ? std::abs(*a->r.value) : -1.0;
            const double rb = b->r.value ? std::abs(*b->r.value) : -1.0;
            return ra > rb;
        });
        md << "\n## " << t.name << "\n\n| rank | metric | r |\n|---:|---|---:|\n";
        std::size_t rank = 1;
        for (const auto* e : rows) {
            md << "| " << rank++ << " | " << e->metric << " | "
               << (e->r.value ? format_double(*e->r.value) : "undefined (" + e->r.reason + ")") << " |\n";
        }
    }
    report.files["report.md"] = md.str();
    return report;
}

void write_report(const CorrelationReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, contents] : report.files) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw AnalysisError("cannot write " + (dir / name).string());
        out << contents;
    }
}

}  // namespace kgcx
