// kgcx: knowledge-graph complexity profiler.
//
// Exit codes: 0 ok, 2 input error, 3 computation error, 4 analysis error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>
#include <openssl/evp.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kgcx/csg.hpp"
#include "kgcx/eigensolvers.hpp"
#include "kgcx/embeddings.hpp"
#include "kgcx/graph.hpp"
#include "kgcx/profile.hpp"
#include "kgcx/random.hpp"
#include "kgcx/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitCompute = 3;
constexpr int kExitAnalysis = 4;

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw kgcx::IngestError("cannot read " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw kgcx::IngestError("cannot write " + path.string());
    out << text;
}

std::string dataset_name(const fs::path& dir) {
    auto p = dir;
    if (p.filename().empty()) p = p.parent_path();
    return p.filename().string();
}

/// Parses "start:stop:step" (inclusive) or a comma-separated list.
std::vector<std::size_t> parse_range(const std::string& text) {
    std::vector<std::size_t> out;
    if (text.find(':') != std::string::npos) {
        std::size_t start = 0, stop = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step == 0 || stop < start ||
            !in.eof()) {
            throw CLI::ValidationError("range", "expected start:stop:step with step > 0, got '" + text + "'");
        }
        for (std::size_t v = start; v <= stop; v += step) out.push_back(v);
        return out;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stoul(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError("range", "not a number: '" + item + "'");
        }
    }
    if (out.empty()) throw CLI::ValidationError("range", "empty range");
    return out;
}

struct Globals {
    std::uint64_t seed = 42;
    int threads = 0;
    std::string out = ".";
};

class Manifest {
public:
    Manifest(std::string command, const Globals& g) {
        doc_["tool"] = "kgcx";
        doc_["tool_version"] = kgcx::kToolVersion;
        doc_["command"] = std::move(command);
        doc_["seed"] = g.seed;
        doc_["threads"] = g.threads;
        doc_["inputs"] = json::object();
        doc_["outputs"] = json::array();
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        doc_["started_at"] = buf;
        start_ = std::chrono::steady_clock::now();
    }
    void config(const std::string& key, json value) { doc_["config"][key] = std::move(value); }
    void input(const fs::path& p) { doc_["inputs"][p.string()] = {{"sha256", sha256_file(p)}}; }
    void dataset_inputs(const fs::path& dir, kgcx::SplitSelection sel) {
        input(dir / "train.txt");
        if (sel == kgcx::SplitSelection::All) {
            input(dir / "valid.txt");
            input(dir / "test.txt");
        }
    }
    void output(const fs::path& p) { doc_["outputs"].push_back(p.string()); }
    void write(const fs::path& dir) {
        doc_["elapsed_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        write_text(dir / "run_manifest.json", doc_.dump(2) + "\n");
    }

private:
    json doc_;
    std::chrono::steady_clock::time_point start_;
};

kgcx::EmbeddingTable make_table(const std::string& embeddings, std::size_t dim, bool allow_fill, std::uint64_t seed) {
    const std::uint64_t embed_seed = kgcx::derive_seed(seed, "embeddings");
    if (embeddings.empty()) return kgcx::EmbeddingTable::fallback(dim, embed_seed);
    auto table = kgcx::EmbeddingTable::load(embeddings);
    if (allow_fill) table.allow_fallback_fill(embed_seed);
    return table;
}

kgcx::ClassSelection parse_classes(const std::string& classes, const std::string& selection) {
    if (classes == "all") return kgcx::ClassSelection::all();
    std::size_t m = 0;
    try {
        m = std::stoul(classes);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--classes", "expected 'all' or a positive integer");
    }
    return selection == "random" ? kgcx::ClassSelection::random(m) : kgcx::ClassSelection::top(m);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kgcx - spectral, semantic and structural complexity profiles for knowledge graphs"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Master seed; every stage derives a named sub-seed")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (default: KGCX_THREADS or all cores)");

    // profile
    auto* profile = app.add_subcommand("profile", "Semantic + structural profile of one dataset");
    std::string profile_dir;
    std::string profile_splits = "all";
    std::string profile_out = ".";
    std::optional<std::size_t> pivots;
    bool dump_jsonl = false;
    profile->add_option("dataset-dir", profile_dir, "Directory with train.txt/valid.txt/test.txt")->required();
    profile->add_option("--splits", profile_splits, "train|all")->check(CLI::IsMember({"train", "all"}))->capture_default_str();
    profile->add_option("--out", profile_out, "Output directory")->capture_default_str();
    profile->add_option("--pivots", pivots, "Force pivot-sampled betweenness with this many sources");
    profile->add_flag("--dump-jsonl", dump_jsonl, "Also write the normalized dataset.jsonl dump");

    // csg
    auto* csg_cmd = app.add_subcommand("csg", "Cumulative spectral gradient of one dataset");
    std::string csg_dir;
    std::string csg_out = ".";
    std::size_t k = 50;
    std::size_t samples = 120;
    std::string classes = "100";
    std::string selection = "top";
    std::string embeddings;
    std::size_t dim = 768;
    bool allow_fill = false;
    std::optional<std::size_t> k_c;
    std::string csg_splits = "all";
    std::string append_to;
    bool dump_spectrum = false;
    csg_cmd->add_option("dataset-dir", csg_dir)->required();
    csg_cmd->add_option("--k", k, "Nearest neighbors per sample")->capture_default_str();
    csg_cmd->add_option("--samples", samples, "Sample cap per class")->capture_default_str();
    csg_cmd->add_option("--classes", classes, "all or the number of tail classes M")->capture_default_str();
    csg_cmd->add_option("--selection", selection, "top|random class selection when M is a number")
        ->check(CLI::IsMember({"top", "random"}))
        ->capture_default_str();
    csg_cmd->add_option("--embeddings", embeddings, "Text vector file; omitted means the fallback embedder");
    csg_cmd->add_option("--dim", dim, "Fallback embedding dimension")->capture_default_str();
    csg_cmd->add_flag("--allow-fallback-fill", allow_fill, "Fill labels missing from --embeddings with fallback vectors");
    csg_cmd->add_option("--kc", k_c, "Gap-summation cutoff (default M-1)");
    csg_cmd->add_option("--splits", csg_splits, "train|all")->check(CLI::IsMember({"train", "all"}))->capture_default_str();
    csg_cmd->add_option("--out", csg_out, "Output directory")->capture_default_str();
    csg_cmd->add_option("--profile", append_to, "Append the record to this profile JSON instead of a standalone file");
    csg_cmd->add_flag("--dump-spectrum", dump_spectrum, "Write S and the eigenvalues as JSON");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "CSG over a grid of k and M");
    std::string sweep_dir;
    std::string sweep_out = ".";
    std::string k_range = "5:100:5";
    std::string m_range = "100";
    sweep_cmd->add_option("dataset-dir", sweep_dir)->required();
    sweep_cmd->add_option("--k", k_range, "start:stop:step (inclusive) or a list")->capture_default_str();
    sweep_cmd->add_option("--classes", m_range, "Class counts M, same syntax")->capture_default_str();
    sweep_cmd->add_option("--samples", samples, "Sample cap per class")->capture_default_str();
    sweep_cmd->add_option("--selection", selection, "top|random")->check(CLI::IsMember({"top", "random"}))->capture_default_str();
    sweep_cmd->add_option("--embeddings", embeddings);
    sweep_cmd->add_option("--dim", dim)->capture_default_str();
    sweep_cmd->add_flag("--allow-fallback-fill", allow_fill);
    sweep_cmd->add_option("--splits", csg_splits)->check(CLI::IsMember({"train", "all"}))->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out)->capture_default_str();

    // correlate
    auto* corr_cmd = app.add_subcommand("correlate", "Correlate profiles with model performance");
    std::vector<std::string> profiles;
    std::string perf;
    std::string corr_out = ".";
    bool zscore = false;
    corr_cmd->add_option("--profiles", profiles, "Profile JSON files")->required();
    corr_cmd->add_option("--perf", perf, "Performance CSV")->required();
    corr_cmd->add_option("--out", corr_out)->capture_default_str();
    corr_cmd->add_flag("--zscore", zscore, "Z-score features instead of min-max");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    if (g.threads <= 0) {
        if (const char* env = std::getenv("KGCX_THREADS")) g.threads = std::atoi(env);
    }
    if (g.threads <= 0) g.threads = omp_get_max_threads();
    omp_set_num_threads(g.threads);

    try {
        if (*profile) {
            const auto sel = kgcx::parse_split_selection(profile_splits);
            Manifest manifest("profile", g);
            const auto kg = kgcx::load_dataset(profile_dir, sel);
            manifest.dataset_inputs(profile_dir, sel);
            kgcx::StructuralConfig cfg;
            cfg.seed = g.seed;
            cfg.threads = g.threads;
            cfg.pivots = pivots;
            const auto name = dataset_name(profile_dir);
            const auto p = kgcx::build_profile(kg, name, cfg);
            const fs::path out = fs::path(profile_out) / (name + ".profile.json");
            write_text(out, kgcx::to_json(p).dump(2) + "\n");
            manifest.output(out);
            if (dump_jsonl) {
                const fs::path dump = fs::path(profile_out) / "dataset.jsonl";
                kgcx::write_jsonl(kg, dump);
                manifest.output(dump);
            }
            manifest.config("splits", profile_splits);
            manifest.write(profile_out);
            std::cerr << "wrote " << out.string() << "\n";
        } else if (*csg_cmd) {
            const auto sel = kgcx::parse_split_selection(csg_splits);
            Manifest manifest("csg", g);
            const auto kg = kgcx::load_dataset(csg_dir, sel);
            manifest.dataset_inputs(csg_dir, sel);
            if (!embeddings.empty()) manifest.input(embeddings);
            const auto table = make_table(embeddings, dim, allow_fill, g.seed);
            kgcx::CsgConfig cfg;
            cfg.k = k;
            cfg.n_samples = samples;
            cfg.k_c = k_c;
            cfg.seed = g.seed;
            cfg.threads = g.threads;
            kgcx::SpectralResult spectrum;
            const auto rec = kgcx::run_csg(kg, table, parse_classes(classes, selection), cfg, &spectrum);
            if (table.fallback_fill_count() > 0) {
                std::cerr << "filled " << table.fallback_fill_count() << " missing labels with fallback vectors\n";
            }
            const auto name = dataset_name(csg_dir);
            fs::path out;
            if (!append_to.empty()) {
                std::ifstream in(append_to);
                if (!in) throw kgcx::IngestError("cannot open profile " + append_to);
                json doc;
                try {
                    doc = json::parse(in);
                } catch (const json::exception& e) {
                    throw kgcx::IngestError(append_to + ": " + e.what());
                }
                kgcx::append_csg_record(doc, rec);
                out = append_to;
                write_text(out, doc.dump(2) + "\n");
            } else {
                json doc = {{"dataset", name},
                            {"split_selection", csg_splits},
                            {"embeddings", embeddings.empty() ? json{{"source", "fallback"}, {"dimension", dim}}
                                                              : json{{"source", "file"},
                                                                     {"dimension", table.dimension()},
                                                                     {"fallback_filled", table.fallback_fill_count()}}},
                            {"csg_record", kgcx::to_json(rec)}};
                out = fs::path(csg_out) / (name + ".csg.json");
                write_text(out, doc.dump(2) + "\n");
            }
            manifest.output(out);
            if (dump_spectrum) {
                json s;
                std::vector<double> flat;
                for (Eigen::Index i = 0; i < spectrum.similarity.rows(); ++i) {
                    for (Eigen::Index j = 0; j < spectrum.similarity.cols(); ++j) flat.push_back(spectrum.similarity(i, j));
                }
                s["M"] = spectrum.similarity.rows();
                s["S"] = flat;
                s["eigenvalues"] = spectrum.eigenvalues;
                s["partial"] = spectrum.partial;
                const fs::path sp = fs::path(csg_out) / (name + ".spectrum.json");
                write_text(sp, s.dump() + "\n");
                manifest.output(sp);
            }
            manifest.config("k", k);
            manifest.config("samples", samples);
            manifest.config("classes", classes);
            manifest.config("selection", selection);
            manifest.config("dim", dim);
            manifest.write(csg_out);
            std::cout << "csg_full=" << rec.csg_full << " M=" << rec.classes << " k=" << rec.k << "\n";
        } else if (*sweep_cmd) {
            const auto sel = kgcx::parse_split_selection(csg_splits);
            const auto ks = parse_range(k_range);
            const auto ms = parse_range(m_range);
            Manifest manifest("sweep", g);
            const auto kg = kgcx::load_dataset(sweep_dir, sel);
            manifest.dataset_inputs(sweep_dir, sel);
            if (!embeddings.empty()) manifest.input(embeddings);
            const auto table = make_table(embeddings, dim, allow_fill, g.seed);
            kgcx::CsgConfig cfg;
            cfg.n_samples = samples;
            cfg.seed = g.seed;
            cfg.threads = g.threads;
            const auto kind = selection == "random" ? kgcx::ClassSelection::Kind::Random
                                                    : kgcx::ClassSelection::Kind::TopFrequency;
            const auto rows = kgcx::sweep(kg, table, ks, ms, cfg, kind);
            const auto name = dataset_name(sweep_dir);
            const fs::path out = fs::path(sweep_out) / (name + ".sweep.csv");
            write_text(out, kgcx::sweep_csv(name, rows));
            manifest.output(out);
            manifest.config("k", k_range);
            manifest.config("classes", m_range);
            manifest.config("samples", samples);
            manifest.config("selection", selection);
            manifest.config("dim", dim);
            manifest.write(sweep_out);
            std::cerr << "wrote " << out.string() << "\n";
        } else if (*corr_cmd) {
            Manifest manifest("correlate", g);
            std::vector<kgcx::ProfileSummary> summaries;
            for (const auto& path : profiles) {
                std::ifstream in(path);
                if (!in) throw kgcx::IngestError("cannot open profile " + path);
                try {
                    summaries.push_back(kgcx::summarize_profile(json::parse(in)));
                } catch (const json::exception& e) {
                    throw kgcx::IngestError(path + ": " + e.what());
                }
                manifest.input(path);
            }
            const auto table = kgcx::load_performance(perf);
            manifest.input(perf);
            const auto report =
                kgcx::build_report(summaries, table, zscore ? kgcx::Scaling::ZScore : kgcx::Scaling::MinMax);
            kgcx::write_report(report, corr_out);
            for (const auto& [file, _] : report.files) manifest.output(fs::path(corr_out) / file);
            manifest.config("scaling", zscore ? "zscore" : "minmax");
            manifest.write(corr_out);
            std::cerr << "wrote report for " << report.datasets.size() << " datasets to " << corr_out << "\n";
        }
    } catch (const kgcx::IngestError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitInput;
    } catch (const kgcx::MissingLabelError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const kgcx::AnalysisError& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const kgcx::ComputationError& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return kExitCompute;
    } catch (const kgcx::ConvergenceError& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return kExitCompute;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return kExitCompute;
    }
    return 0;
}
