#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "kgcx/csg.hpp"
#include "oracles.hpp"

namespace {

/// Random KG whose tail classes are all smaller than the sample cap.
kgcx::KnowledgeGraph small_kg(std::mt19937_64& rng, std::size_t tails, std::size_t triples) {
    kgcx::GraphBuilder b;
    for (std::size_t i = 0; i < triples; ++i) {
        b.add("h" + std::to_string(rng() % 60), "r" + std::to_string(rng() % 5), "t" + std::to_string(rng() % tails));
    }
    return std::move(b).build();
}

/// Composite vectors grouped by tail id, members in (head, relation) order.
std::vector<std::vector<std::vector<double>>> class_vectors(const kgcx::KnowledgeGraph& kg,
                                                            const kgcx::EmbeddingTable& table) {
    std::map<kgcx::EntityId, std::set<std::pair<kgcx::EntityId, kgcx::RelationId>>> by_tail;
    for (const auto& t : kg.triples()) by_tail[t.tail].insert({t.head, t.relation});
    std::vector<std::vector<std::vector<double>>> out;
    for (const auto& [tail, members] : by_tail) {
        auto& cls = out.emplace_back();
        for (auto [h, r] : members) {
            auto v = table.vector(kg.entities().label(h));
            const auto e = table.vector(kg.relations().label(r));
            v.insert(v.end(), e.begin(), e.end());
            cls.push_back(std::move(v));
        }
    }
    return out;
}

Eigen::MatrixXd from_rows(const std::vector<std::vector<double>>& rows) {
    Eigen::MatrixXd m(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace

TEST_SUITE("csg") {
    TEST_CASE("all-ones 2x2 similarity gives spectrum {0, 1}") {
        // Rows of S must sum to 1 for a neighbor-fraction matrix; the scale does not matter for L.
        const auto r = kgcx::laplacian_spectrum(Eigen::MatrixXd::Constant(2, 2, 0.5));
        CHECK(r.eigenvalues[0] == doctest::Approx(0.0));
        CHECK(r.eigenvalues[1] == doctest::Approx(1.0));
        CHECK(r.csg_full() == doctest::Approx(1.0));
    }

    TEST_CASE("identity similarity gives a zero spectrum") {
        const auto r = kgcx::laplacian_spectrum(Eigen::MatrixXd::Identity(5, 5));
        for (double v : r.eigenvalues) CHECK(v == doctest::Approx(0.0));
        CHECK(r.csg_full() == doctest::Approx(0.0));
    }

    TEST_CASE("gap sum telescopes") {
        kgcx::SpectralResult r;
        r.eigenvalues = {0.0, 0.5, 1.5};
        CHECK(kgcx::csg(r, 2) == doctest::Approx(1.5));
        CHECK(kgcx::csg(r, 1) == doctest::Approx(0.5));
    }

    TEST_CASE("invalid similarity is rejected") {
        Eigen::MatrixXd s = Eigen::MatrixXd::Identity(3, 3);
        s(0, 1) = -0.1;
        CHECK_THROWS_AS(kgcx::laplacian_spectrum(s), kgcx::ComputationError);
        CHECK_THROWS_AS(kgcx::laplacian_spectrum(Eigen::MatrixXd::Identity(2, 3)), kgcx::ComputationError);
    }

    TEST_CASE("spectrum is invariant under class relabelling") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Eigen::MatrixXd s(7, 7);
        for (int i = 0; i < 7; ++i) {
            for (int j = 0; j < 7; ++j) s(i, j) = u(rng);
            s.row(i) /= s.row(i).sum();
        }
        std::vector<int> perm = {3, 0, 6, 1, 5, 2, 4};
        Eigen::MatrixXd p(7, 7);
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) p(i, j) = s(perm[i], perm[j]);
        const auto a = kgcx::laplacian_spectrum(s);
        const auto b = kgcx::laplacian_spectrum(p);
        for (int i = 0; i < 7; ++i) CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i]).epsilon(1e-12));
    }

    TEST_CASE("partition by tail") {
        kgcx::GraphBuilder b;
        b.add("a", "r", "x");
        b.add("b", "r", "x");
        b.add("b", "r", "x");
        b.add("a", "s", "y");
        b.add("c", "r", "z");
        b.add("d", "r", "z");
        const auto kg = std::move(b).build();
        const auto all = kgcx::partition_by_tail(kg, kgcx::ClassSelection::all(), 1);
        REQUIRE(all.size() == 3);
        CHECK(all.classes[0].members.size() == 2);
        CHECK(all.classes[0].incoming == 3);
        const auto top = kgcx::partition_by_tail(kg, kgcx::ClassSelection::top(2), 1);
        REQUIRE(top.size() == 2);
        CHECK(kg.entities().label(top.classes[0].tail) == "x");
        CHECK(kg.entities().label(top.classes[1].tail) == "z");
        CHECK_THROWS_AS(kgcx::partition_by_tail(kg, kgcx::ClassSelection::top(4), 1), kgcx::ComputationError);
        const auto r1 = kgcx::partition_by_tail(kg, kgcx::ClassSelection::random(2), 9);
        const auto r2 = kgcx::partition_by_tail(kg, kgcx::ClassSelection::random(2), 9);
        CHECK(r1.classes[0].tail == r2.classes[0].tail);
        CHECK(r1.classes[1].tail == r2.classes[1].tail);
    }

    TEST_CASE("sampling draws distinct sorted indices") {
        const auto s = kgcx::sample_indices(1000, 120, 77);
        CHECK(s.size() == 120);
        CHECK(std::is_sorted(s.begin(), s.end()));
        CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
        CHECK(s == kgcx::sample_indices(1000, 120, 77));
        CHECK(kgcx::sample_indices(50, 120, 77).size() == 50);
    }

    TEST_CASE("similarity matches brute-force counts and rows sum to one") {
        std::mt19937_64 rng(2);
        const auto kg = small_kg(rng, 6, 150);
        const auto table = kgcx::EmbeddingTable::fallback(8, 3);
        const auto classes = class_vectors(kg, table);
        kgcx::CsgConfig cfg;
        cfg.n_samples = 1000;
        const auto part = kgcx::partition_by_tail(kg, kgcx::ClassSelection::all(), cfg.seed);
        const auto sampled = kgcx::sample_class_vectors(part, kg, table, cfg);
        const auto s = kgcx::build_similarity(sampled, 7, 2);
        const auto ref = oracle::naive_csg(classes, 7);
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            CHECK(s.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
            for (Eigen::Index j = 0; j < s.cols(); ++j) CHECK(s(i, j) == doctest::Approx(ref.similarity[i][j]).epsilon(1e-12));
        }
    }

    TEST_CASE("full pipeline equals the naive implementation") {
        std::mt19937_64 rng(123);
        for (int rep = 0; rep < 5; ++rep) {
            const auto kg = small_kg(rng, 3 + rep, 60 + 25 * rep);
            const auto table = kgcx::EmbeddingTable::fallback(6, rep);
            const auto ref = oracle::naive_csg(class_vectors(kg, table), 5);
            kgcx::CsgConfig cfg;
            cfg.k = 5;
            cfg.n_samples = 1000;
            kgcx::SpectralResult spec;
            const auto rec = kgcx::run_csg(kg, table, kgcx::ClassSelection::all(), cfg, &spec);
            REQUIRE(spec.eigenvalues.size() == ref.eigenvalues.size());
            for (std::size_t i = 0; i < ref.eigenvalues.size(); ++i) CHECK(std::abs(spec.eigenvalues[i] - ref.eigenvalues[i]) < 1e-8);
            CHECK(rec.csg_full == doctest::Approx(ref.eigenvalues.back() - ref.eigenvalues.front()));
        }
    }

    TEST_CASE("well separated clusters have smaller csg than overlapping ones") {
        const auto sep = oracle::clustered_kg(3, 60, 4, 0.05, 1);
        const auto mix = oracle::clustered_kg(3, 60, 4, 2.0, 1);
        kgcx::CsgConfig cfg;
        cfg.k = 10;
        const auto a = kgcx::run_csg(sep.kg, sep.table, kgcx::ClassSelection::all(), cfg);
        const auto b = kgcx::run_csg(mix.kg, mix.table, kgcx::ClassSelection::all(), cfg);
        CHECK(a.csg_full < b.csg_full);
        CHECK(a.csg_full == doctest::Approx(0.0));
    }

    TEST_CASE("partial spectrum matches dense ends") {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const int m = 300;
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            for (int t = 0; t < 6; ++t) s(i, static_cast<int>(rng() % m)) += u(rng);
            s(i, i) += 1.0;
            s.row(i) /= s.row(i).sum();
        }
        const auto dense = kgcx::laplacian_spectrum(s, 4096);
        const auto part = kgcx::laplacian_spectrum(s, 100);
        CHECK(part.partial);
        CHECK(part.lambda_min() == doctest::Approx(dense.lambda_min()).epsilon(1e-7));
        CHECK(part.lambda_max() == doctest::Approx(dense.lambda_max()).epsilon(1e-7));
    }

    TEST_CASE("sweep reuses neighbors and matches single runs") {
        const auto data = oracle::clustered_kg(5, 40, 3, 0.8, 4);
        kgcx::CsgConfig base;
        base.n_samples = 30;
        const auto rows = kgcx::sweep(data.kg, data.table, {5, 10, 20}, {3, 5}, base);
        REQUIRE(rows.size() == 6);
        for (const auto& row : rows) {
            auto cfg = base;
            cfg.k = row.k;
            const auto rec = kgcx::run_csg(data.kg, data.table, kgcx::ClassSelection::top(row.classes), cfg);
            CHECK(rec.csg_full == row.csg_full);
        }
        CHECK(rows[0].classes == 3);
        CHECK(rows[3].classes == 5);
    }
}
