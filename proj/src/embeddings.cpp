#include "kgcx/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include "kgcx/random.hpp"

namespace kgcx {

std::vector<double> fallback_embed(std::string_view label, std::size_t dimension, std::uint64_t seed) {
    std::vector<double> v(dimension);
    const std::uint64_t key = mix64(fnv1a64(label) ^ mix64(seed));
    // Box-Muller on pairs; component i uses pair i/2 of the keyed stream.
    for (std::size_t i = 0; i < dimension; i += 2) {
        SplitMix64 gen(key ^ mix64(i / 2 + 1));
        double u1 = gen.uniform();
        const double u2 = gen.uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        v[i] = radius * std::cos(angle);
        if (i + 1 < dimension) v[i + 1] = radius * std::sin(angle);
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        v[0] = 1.0;
        return v;
    }
    for (double& x : v) x /= norm;
    return v;
}

EmbeddingTable EmbeddingTable::empty(std::size_t dimension) {
    if (dimension == 0) throw std::invalid_argument("embedding dimension must be positive");
    EmbeddingTable t;
    t.dimension_ = dimension;
    t.stored_ = true;
    return t;
}

EmbeddingTable EmbeddingTable::fallback(std::size_t dimension, std::uint64_t seed) {
    if (dimension == 0) throw std::invalid_argument("embedding dimension must be positive");
    EmbeddingTable t;
    t.dimension_ = dimension;
    t.seed_ = seed;
    return t;
}

void EmbeddingTable::insert(std::string label, std::vector<double> values) {
    if (values.size() != dimension_) {
        throw IngestError("dimension mismatch for label '" + label + "': expected " + std::to_string(dimension_) +
                          " values, got " + std::to_string(values.size()));
    }
    const std::size_t row = rows_.size();
    if (!rows_.emplace(label, row).second) {
        throw IngestError("duplicate embedding label '" + label + "'");
    }
    values_.insert(values_.end(), values.begin(), values.end());
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open embeddings file " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IngestError(path.string() + ": missing header line");
    std::size_t count = 0;
    std::size_t dimension = 0;
    {
        const char* p = line.data();
        const char* end = p + line.size();
        auto r1 = std::from_chars(p, end, count);
        if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ' ') {
            throw IngestError(path.string() + ": header must be \"<count> <dimension>\"");
        }
        auto r2 = std::from_chars(r1.ptr + 1, end, dimension);
        if (r2.ec != std::errc{} || r2.ptr != end || dimension == 0) {
            throw IngestError(path.string() + ": header must be \"<count> <dimension>\"");
        }
    }
    EmbeddingTable table = empty(dimension);
    table.values_.reserve(count * dimension);
    std::vector<double> row;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto space = line.find(' ');
        std::string label = line.substr(0, space);
        row.clear();
        if (space != std::string::npos) {
            const char* p = line.data() + space + 1;
            const char* end = line.data() + line.size();
            while (p < end) {
                double value = 0.0;
                auto res = std::from_chars(p, end, value);
                if (res.ec != std::errc{}) {
                    throw IngestError(path.string() + ":" + std::to_string(line_no) + ": bad value for label '" +
                                      label + "'");
                }
                row.push_back(value);
                p = res.ptr;
                if (p < end && *p == ' ') ++p;
            }
        }
        table.insert(std::move(label), row);
    }
    if (table.size() != count) {
        throw IngestError(path.string() + ": header announces " + std::to_string(count) + " rows, found " +
                          std::to_string(table.size()));
    }
    return table;
}

bool EmbeddingTable::contains(std::string_view label) const {
    return !stored_ || rows_.count(std::string(label)) != 0;
}

void EmbeddingTable::allow_fallback_fill(std::uint64_t seed) {
    fill_ = true;
    seed_ = seed;
}

void EmbeddingTable::lookup(std::string_view label, std::span<double> out) const {
    if (stored_) {
        if (auto it = rows_.find(std::string(label)); it != rows_.end()) {
            const double* src = values_.data() + it->second * dimension_;
            std::copy(src, src + dimension_, out.begin());
            return;
        }
        if (!fill_) throw MissingLabelError(std::string(label));
        ++fill_count_;
    }
    const auto v = fallback_embed(label, dimension_, seed_);
    std::copy(v.begin(), v.end(), out.begin());
}

std::vector<double> EmbeddingTable::vector(std::string_view label) const {
    std::vector<double> v(dimension_);
    lookup(label, v);
    return v;
}

void EmbeddingTable::save(const std::filesystem::path& path) const {
    if (!stored_) throw std::logic_error("fallback tables have no stored rows");
    std::vector<std::pair<std::string, std::size_t>> sorted(rows_.begin(), rows_.end());
    std::sort(sorted.begin(), sorted.end());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write " + path.string());
    out << sorted.size() << ' ' << dimension_ << '\n';
    char buf[32];
    for (const auto& [label, row] : sorted) {
        out << label;
        for (std::size_t i = 0; i < dimension_; ++i) {
            auto res = std::to_chars(buf, buf + sizeof buf, values_[row * dimension_ + i]);
            out << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
        }
        out << '\n';
    }
}

std::vector<double> composite(const EmbeddingTable& table, std::string_view head, std::string_view relation) {
    const std::size_t d = table.dimension();
    std::vector<double> v(2 * d);
    table.lookup(head, std::span(v).first(d));
    table.lookup(relation, std::span(v).subspan(d));
    return v;
}

CompositeVector composite(const EmbeddingTable& table, const KnowledgeGraph& kg, EntityId head, RelationId relation) {
    return {head, relation, composite(table, kg.entities().label(head), kg.relations().label(relation))};
}

}  // namespace kgcx
