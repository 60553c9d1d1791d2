#include <doctest.h>

#include <cmath>
#include <random>

#include "cmdseer/kb.hpp"
#include "helpers.hpp"

using namespace cmdseer::kb;

TEST_CASE("clean_doc drops short surface words") {
    TermBag bag = clean_doc({"x", "a an the"});
    CHECK(bag.empty());
}

TEST_CASE("clean_doc stems after the length filter") {
    // "copy" has 4 characters so it survives the filter and stems to "copi"
    TermBag bag = clean_doc({"cp", "copying copied copy!!"});
    REQUIRE(bag.size() == 1);
    CHECK(bag.at("copi") == 3);
}

TEST_CASE("clean_doc on empty body") {
    CHECK(clean_doc({"x", ""}).empty());
}

TEST_CASE("clean_doc strips specials and case-folds") {
    TermBag bag = clean_doc({"x", "List... LISTS,\tlisting; (list)"});
    REQUIRE(bag.count("list"));
    CHECK(bag.at("list") == 4);
}

TEST_CASE("clean_doc filter applies to the pre-stem surface form") {
    // "ties" (4 chars) survives and stems to "ti"; "tie" (3 chars) is dropped
    TermBag bag = clean_doc({"x", "ties tie"});
    REQUIRE(bag.size() == 1);
    CHECK(bag.count("ti") == 1);
}

TEST_CASE("vectorize computes tf * ln(N/df)") {
    std::vector<std::pair<std::string, TermBag>> bags = {
        {"a", {{"copi", 3}, {"share", 1}}},
        {"b", {{"move", 2}, {"share", 5}}},
    };
    auto vecs = vectorize(bags);
    REQUIRE(vecs.size() == 2);
    // "copi" in 1 of 2 docs with tf 3
    CHECK(vecs[0].weights.at("copi") == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
    // "share" is in every doc, weight 0, omitted
    CHECK(vecs[0].weights.count("share") == 0);
    CHECK(vecs[1].weights.count("share") == 0);
    CHECK(vecs[1].weights.at("move") == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("vectorize of identical docs gives empty vectors") {
    std::vector<std::pair<std::string, TermBag>> bags = {
        {"a", {{"same", 2}}},
        {"b", {{"same", 7}}},
    };
    auto vecs = vectorize(bags);
    CHECK(vecs[0].weights.empty());
    CHECK(vecs[0].norm == 0.0);
}

TEST_CASE("vectorize requires two docs") {
    std::vector<std::pair<std::string, TermBag>> one = {{"a", {{"x", 1}}}};
    CHECK_THROWS_AS(vectorize(one), std::runtime_error);
}

TEST_CASE("cosine of identical and disjoint vectors") {
    std::vector<std::pair<std::string, TermBag>> bags = {
        {"a", {{"alpha", 2}, {"beta", 1}}},
        {"b", {{"alpha", 2}, {"beta", 1}}},
        {"c", {{"gamma", 4}}},
        {"d", {{"delta", 1}}},
    };
    auto vecs = vectorize(bags);
    CHECK(cosine(vecs[0], vecs[1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine(vecs[0], vecs[2]) == 0.0);
}

TEST_CASE("cosine is exactly symmetric and in [0,1]") {
    std::mt19937_64 rng(11);
    std::vector<std::pair<std::string, TermBag>> bags;
    const char* terms[] = {"alpha", "beta", "gamma", "delta", "epsilon", "zeta", "etaa", "theta"};
    for (int d = 0; d < 12; ++d) {
        TermBag bag;
        int n = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) bag[terms[rng() % 8]] += 1 + static_cast<int>(rng() % 4);
        bags.emplace_back("cmd" + std::to_string(d), std::move(bag));
    }
    auto vecs = vectorize(bags);
    for (std::size_t i = 0; i < vecs.size(); ++i)
        for (std::size_t j = 0; j < vecs.size(); ++j) {
            double ij = cosine(vecs[i], vecs[j]);
            double ji = cosine(vecs[j], vecs[i]);
            CHECK(ij == ji);  // bitwise
            CHECK(ij >= 0.0);
            CHECK(ij <= 1.0 + 1e-12);
        }
}

TEST_CASE("top_k_synonyms: identical vectors are mutual top-1 at cosine 1") {
    std::vector<std::pair<std::string, TermBag>> bags = {
        {"cp", {{"copi", 3}, {"file", 2}}},
        {"mv", {{"copi", 3}, {"file", 2}}},
        {"ls", {{"list", 5}}},
        {"pwd", {{"print", 1}}},
    };
    KnowledgeBase kb = top_k_synonyms(vectorize(bags), 1);
    REQUIRE(kb.neighbors.count("cp"));
    CHECK(kb.neighbors.at("cp")[0].first == "mv");
    CHECK(kb.neighbors.at("cp")[0].second == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kb.neighbors.at("mv")[0].first == "cp");
}

TEST_CASE("top_k_synonyms is deterministic under input reordering") {
    std::vector<std::pair<std::string, TermBag>> bags = {
        {"a", {{"alpha", 1}, {"beta", 2}}},
        {"b", {{"alpha", 2}, {"gamma", 1}}},
        {"c", {{"beta", 1}, {"gamma", 3}}},
        {"d", {{"alpha", 1}, {"gamma", 1}}},
    };
    auto forward = top_k_synonyms(vectorize(bags), 2);
    std::reverse(bags.begin(), bags.end());
    auto reversed = top_k_synonyms(vectorize(bags), 2);
    REQUIRE(forward.neighbors.size() == reversed.neighbors.size());
    for (const auto& [cmd, lst] : forward.neighbors) {
        REQUIRE(reversed.neighbors.count(cmd));
        const auto& other = reversed.neighbors.at(cmd);
        REQUIRE(other.size() == lst.size());
        for (std::size_t i = 0; i < lst.size(); ++i) {
            CHECK(lst[i].first == other[i].first);
            CHECK(lst[i].second == other[i].second);
        }
    }
}

TEST_CASE("empty-vector commands get no neighbors") {
    std::vector<std::pair<std::string, TermBag>> bags = {
        {"a", {{"alpha", 1}}},
        {"b", {{"beta", 1}}},
        {"ghost", {}},
    };
    KnowledgeBase kb = top_k_synonyms(vectorize(bags), 5);
    CHECK(kb.neighbors.count("ghost") == 0);
}

TEST_CASE("no self pairs and out-degree is capped") {
    std::vector<std::pair<std::string, TermBag>> bags;
    const char* terms[] = {"one", "two", "three", "four"};
    std::mt19937_64 rng(5);
    for (int i = 0; i < 9; ++i) {
        TermBag bag;
        bag[terms[rng() % 4]] = 1 + static_cast<int>(rng() % 3);
        bag[terms[rng() % 4]] += 1;
        bags.emplace_back("cmd" + std::to_string(i), std::move(bag));
    }
    KnowledgeBase kb = top_k_synonyms(vectorize(bags), 5);
    for (const auto& [cmd, lst] : kb.neighbors) {
        CHECK(lst.size() <= 5);
        for (const auto& [other, score] : lst) CHECK(other != cmd);
    }
    for (const auto& p : kb.pairs) {
        CHECK(p.a != p.b);
        CHECK(p.a < p.b);
        CHECK(p.score >= 0.0);
        CHECK(p.score <= 1.0 + 1e-12);
    }
}

TEST_CASE("build_kb intersects with the vocabulary") {
    std::vector<ManDoc> docs = {
        {"ls", "lists directory contents entries"},
        {"dir", "lists directory contents entries"},
        {"zz-not-in-vocab", "lists directory contents entries"},
    };
    std::set<std::string> commands = {"ls", "dir"};
    KnowledgeBase kb = build_kb(docs, &commands, 5);
    CHECK(kb.neighbors.count("zz-not-in-vocab") == 0);
    for (const auto& p : kb.pairs) {
        CHECK(commands.count(p.a));
        CHECK(commands.count(p.b));
    }
}

TEST_CASE("kb artifact round trips and validates") {
    std::vector<std::pair<std::string, TermBag>> bags = {
        {"cp", {{"copi", 3}, {"file", 2}}},
        {"mv", {{"copi", 2}, {"file", 2}, {"renam", 4}}},
        {"ls", {{"list", 5}, {"file", 1}}},
    };
    KnowledgeBase kb = top_k_synonyms(vectorize(bags), 2);

    testutil::TempDir dir("kb");
    save_kb(kb, dir.path() / "kb.txt");
    KnowledgeBase back = load_kb(dir.path() / "kb.txt", 2);
    REQUIRE(back.neighbors.size() == kb.neighbors.size());
    for (const auto& [cmd, lst] : kb.neighbors) {
        const auto& other = back.neighbors.at(cmd);
        REQUIRE(other.size() == lst.size());
        for (std::size_t i = 0; i < lst.size(); ++i) {
            CHECK(other[i].first == lst[i].first);
            CHECK(other[i].second == lst[i].second);  // %.17g round-trips exactly
        }
    }
    REQUIRE(back.pairs.size() == kb.pairs.size());

    testutil::write_file(dir.path() / "self.txt", "ls ls 0.5\n");
    CHECK_THROWS_AS(load_kb(dir.path() / "self.txt"), std::runtime_error);
    testutil::write_file(dir.path() / "range.txt", "ls cp 1.5\n");
    CHECK_THROWS_AS(load_kb(dir.path() / "range.txt"), std::runtime_error);
    testutil::write_file(dir.path() / "degree.txt",
                         "a b 0.1\na c 0.1\na d 0.1\na e 0.1\na f 0.1\na g 0.1\n");
    CHECK_THROWS_AS(load_kb(dir.path() / "degree.txt", 5), std::runtime_error);
}
