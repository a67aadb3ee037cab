#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "kgcx/semantic.hpp"

TEST_SUITE("semantic") {
    TEST_CASE("four equally used relations give two bits") {
        kgcx::GraphBuilder b;
        for (int i = 0; i < 8; ++i) b.add("e" + std::to_string(i), "r" + std::to_string(i % 4), "e" + std::to_string(i + 1));
        const auto kg = std::move(b).build();
        CHECK(kgcx::relation_entropy(kg) == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(kgcx::relation_count(kg) == 4);
    }

    TEST_CASE("single relation has zero entropy and empty graph throws") {
        kgcx::GraphBuilder b;
        b.add("a", "r", "b");
        b.add("b", "r", "c");
        CHECK(kgcx::relation_entropy(std::move(b).build()) == 0.0);
        CHECK_THROWS_AS(kgcx::relation_entropy(kgcx::KnowledgeGraph{}), std::invalid_argument);
    }

    TEST_CASE("diversity counts both directions") {
        kgcx::GraphBuilder b;
        b.add("hub", "r1", "a");
        b.add("b", "r2", "hub");
        b.add("hub", "r3", "c");
        b.add("hub", "r1", "d");
        const auto kg = std::move(b).build();
        const auto [best, who] = kgcx::max_relation_diversity(kg);
        CHECK(best == 3);
        CHECK(kg.entities().label(who) == "hub");
    }

    TEST_CASE("entropy and diversity match a direct recount") {
        std::mt19937_64 rng(6);
        kgcx::GraphBuilder b;
        std::map<std::string, double> count;
        std::map<std::string, std::set<std::string>> div;
        for (int i = 0; i < 2000; ++i) {
            const auto h = "e" + std::to_string(rng() % 100);
            const auto r = "r" + std::to_string(rng() % 13);
            const auto t = "e" + std::to_string(rng() % 100);
            b.add(h, r, t);
            count[r] += 1;
            div[h].insert(r);
            div[t].insert(r);
        }
        const auto kg = std::move(b).build();
        double h = 0.0;
        for (const auto& [r, c] : count) h -= (c / 2000.0) * std::log2(c / 2000.0);
        CHECK(kgcx::relation_entropy(kg) == doctest::Approx(h).epsilon(1e-12));
        const auto d = kgcx::entity_relation_diversity(kg);
        for (std::size_t e = 0; e < kg.num_entities(); ++e) CHECK(d[e] == div[kg.entities().label(static_cast<kgcx::EntityId>(e))].size());
    }
}
