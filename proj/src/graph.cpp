#include "kgcx/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

namespace kgcx {

namespace fs = std::filesystem;

std::string_view to_string(Split split) {
    switch (split) {
        case Split::Train: return "train";
        case Split::Valid: return "valid";
        case Split::Test: return "test";
    }
    return "train";
}

std::string_view to_string(SplitSelection selection) {
    return selection == SplitSelection::TrainOnly ? "train" : "all";
}

SplitSelection parse_split_selection(std::string_view text) {
    if (text == "train") return SplitSelection::TrainOnly;
    if (text == "all") return SplitSelection::All;
    throw std::invalid_argument("unknown split selection '" + std::string(text) + "' (expected train|all)");
}

std::uint32_t Dictionary::intern(std::string_view label) {
    if (auto it = ids_.find(label); it != ids_.end()) {
        return it->second;
    }
    const auto id = static_cast<std::uint32_t>(labels_.size());
    labels_.emplace_back(label);
    ids_.emplace(labels_.back(), id);
    return id;
}

std::optional<std::uint32_t> Dictionary::find(std::string_view label) const {
    if (auto it = ids_.find(label); it != ids_.end()) {
        return it->second;
    }
    return std::nullopt;
}

namespace {

template <class Key>
Csr<Incidence> build_index(std::size_t rows, std::span<const Triple> triples, Key key) {
    Csr<Incidence> csr;
    csr.offsets.assign(rows + 1, 0);
    for (const auto& t : triples) {
        ++csr.offsets[key(t).first + 1];
    }
    std::partial_sum(csr.offsets.begin(), csr.offsets.end(), csr.offsets.begin());
    csr.entries.resize(triples.size());
    std::vector<std::size_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
    for (const auto& t : triples) {
        const auto [row, inc] = key(t);
        csr.entries[cursor[row]++] = inc;
    }
    return csr;
}

}  // namespace

KnowledgeGraph::KnowledgeGraph(Dictionary entities, Dictionary relations, std::vector<Triple> triples,
                               std::vector<Split> splits, SplitSelection selection)
    : entities_(std::move(entities)),
      relations_(std::move(relations)),
      triples_(std::move(triples)),
      splits_(std::move(splits)),
      selection_(selection) {
    const std::size_t n = entities_.size();
    for (const auto& t : triples_) {
        if (t.head >= n || t.tail >= n || t.relation >= relations_.size()) {
            throw std::invalid_argument("triple references an id outside the dictionaries");
        }
    }
    out_ = build_index(n, triples_, [](const Triple& t) {
        return std::pair{t.head, Incidence{t.relation, t.tail}};
    });
    in_ = build_index(n, triples_, [](const Triple& t) {
        return std::pair{t.tail, Incidence{t.relation, t.head}};
    });
}

std::size_t KnowledgeGraph::split_size(Split split) const {
    return static_cast<std::size_t>(std::count(splits_.begin(), splits_.end(), split));
}

void GraphBuilder::add(std::string_view head, std::string_view relation, std::string_view tail, Split split) {
    const EntityId h = entities_.intern(head);
    const RelationId r = relations_.intern(relation);
    const EntityId t = entities_.intern(tail);
    triples_.push_back({h, r, t});
    splits_.push_back(split);
}

KnowledgeGraph GraphBuilder::build(SplitSelection selection) && {
    return KnowledgeGraph(std::move(entities_), std::move(relations_), std::move(triples_), std::move(splits_),
                          selection);
}

void parse_triple_file(const fs::path& file, Split split, GraphBuilder& builder) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw IngestError("cannot open " + file.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto first = line.find('\t');
        const auto second = first == std::string::npos ? std::string::npos : line.find('\t', first + 1);
        if (second == std::string::npos || line.find('\t', second + 1) != std::string::npos) {
            throw IngestError(file.string() + ":" + std::to_string(line_no) + ": expected 3 tab-separated fields");
        }
        const std::string_view view(line);
        builder.add(view.substr(0, first), view.substr(first + 1, second - first - 1), view.substr(second + 1),
                    split);
    }
    if (in.bad()) {
        throw IngestError("read error on " + file.string());
    }
}

KnowledgeGraph load_dataset(const fs::path& dir, SplitSelection selection) {
    if (!fs::is_directory(dir)) {
        throw IngestError("dataset directory not found: " + dir.string());
    }
    GraphBuilder builder;
    std::vector<std::pair<const char*, Split>> files{{"train.txt", Split::Train}};
    if (selection == SplitSelection::All) {
        files.emplace_back("valid.txt", Split::Valid);
        files.emplace_back("test.txt", Split::Test);
    }
    for (const auto& [name, split] : files) {
        const fs::path file = dir / name;
        if (!fs::exists(file)) {
            throw IngestError("missing split file " + file.string());
        }
        parse_triple_file(file, split, builder);
    }
    return std::move(builder).build(selection);
}

void write_dataset(const KnowledgeGraph& kg, const fs::path& dir) {
    fs::create_directories(dir);
    for (Split split : {Split::Train, Split::Valid, Split::Test}) {
        if (split != Split::Train && kg.selection() == SplitSelection::TrainOnly) {
            continue;
        }
        std::ofstream out(dir / (std::string(to_string(split)) + ".txt"), std::ios::binary);
        const auto triples = kg.triples();
        for (std::size_t i = 0; i < triples.size(); ++i) {
            if (kg.split_of(i) != split) continue;
            const auto& t = triples[i];
            out << kg.entities().label(t.head) << '\t' << kg.relations().label(t.relation) << '\t'
                << kg.entities().label(t.tail) << '\n';
        }
    }
}

void write_jsonl(const KnowledgeGraph& kg, const fs::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw IngestError("cannot write " + file.string());
    }
    nlohmann::json header;
    header["format_version"] = 1;
    header["split_selection"] = std::string(to_string(kg.selection()));
    header["entities"] = kg.entities().labels();
    header["relations"] = kg.relations().labels();
    out << header.dump() << '\n';
    const auto triples = kg.triples();
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const auto& t = triples[i];
        nlohmann::json rec = {{"h", t.head}, {"r", t.relation}, {"t", t.tail},
                              {"split", std::string(to_string(kg.split_of(i)))}};
        out << rec.dump() << '\n';
    }
}

KnowledgeGraph read_jsonl(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw IngestError("cannot open " + file.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IngestError(file.string() + ": missing header record");
    }
    try {
        const auto header = nlohmann::json::parse(line);
        if (header.at("format_version").get<int>() != 1) {
            throw IngestError(file.string() + ": unsupported format_version");
        }
        Dictionary entities;
        Dictionary relations;
        for (const auto& l : header.at("entities")) entities.intern(l.get<std::string>());
        for (const auto& l : header.at("relations")) relations.intern(l.get<std::string>());
        std::vector<Triple> triples;
        std::vector<Split> splits;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto rec = nlohmann::json::parse(line);
            triples.push_back({rec.at("h").get<EntityId>(), rec.at("r").get<RelationId>(), rec.at("t").get<EntityId>()});
            const auto s = rec.at("split").get<std::string>();
            splits.push_back(s == "train" ? Split::Train : s == "valid" ? Split::Valid : Split::Test);
        }
        return KnowledgeGraph(std::move(entities), std::move(relations), std::move(triples), std::move(splits),
                              parse_split_selection(header.at("split_selection").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
        throw IngestError(file.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw IngestError(file.string() + ": " + e.what());
    }
}

SimpleGraph SimpleGraph::from_edges(std::size_t num_nodes,
                                    std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
    SimpleGraph g;
    g.self_loop_.assign(num_nodes, 0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> directed;
    directed.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
        if (u >= num_nodes || v >= num_nodes) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        if (u == v) {
            g.self_loop_[u] = 1;
            continue;
        }
        directed.emplace_back(u, v);
        directed.emplace_back(v, u);
    }
    std::sort(directed.begin(), directed.end());

    g.adjacency_.offsets.assign(num_nodes + 1, 0);
    for (std::size_t i = 0; i < directed.size();) {
        std::size_t j = i;
        while (j < directed.size() && directed[j] == directed[i]) ++j;
        g.adjacency_.entries.push_back(directed[i].second);
        g.multiplicity_.push_back(static_cast<std::uint32_t>(j - i));
        ++g.adjacency_.offsets[directed[i].first + 1];
        i = j;
    }
    std::partial_sum(g.adjacency_.offsets.begin(), g.adjacency_.offsets.end(), g.adjacency_.offsets.begin());
    return g;
}

bool SimpleGraph::any_self_loop() const {
    return std::any_of(self_loop_.begin(), self_loop_.end(), [](auto f) { return f != 0; });
}

bool SimpleGraph::any_parallel_edge() const {
    return std::any_of(multiplicity_.begin(), multiplicity_.end(), [](auto m) { return m > 1; });
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> SimpleGraph::edge_list() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(num_edges());
    for (std::uint32_t u = 0; u < num_nodes(); ++u) {
        for (auto v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

SimpleGraph undirected_view(const KnowledgeGraph& kg) {
    std::vector<Triple> distinct(kg.triples().begin(), kg.triples().end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(distinct.size());
    for (const auto& t : distinct) {
        pairs.emplace_back(t.head, t.tail);
    }
    return SimpleGraph::from_edges(kg.num_entities(), pairs);
}

}  // namespace kgcx
