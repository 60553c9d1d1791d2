#include <doctest.h>

#include <map>
#include <random>
#include <stdexcept>

#include "cmdseer/cooccurrence.hpp"

using namespace cmdseer::emb;

namespace {

// brute-force double loop over all ordered pairs within the window
std::map<std::pair<int, int>, double> brute_force(const std::vector<std::vector<int>>& streams,
                                                  int window) {
    std::map<std::pair<int, int>, double> x;
    for (const auto& s : streams)
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < s.size(); ++j) {
                if (i == j) continue;
                std::size_t dist = i < j ? j - i : i - j;
                if (dist <= static_cast<std::size_t>(window))
                    x[{s[i], s[j]}] += 1.0 / static_cast<double>(dist);
            }
    return x;
}

bool equals_oracle(const CoocMatrix& m, const std::map<std::pair<int, int>, double>& oracle) {
    auto entries = m.sorted_entries();
    if (entries.size() != oracle.size()) return false;
    for (const auto& [i, j, w] : entries) {
        auto it = oracle.find({i, j});
        if (it == oracle.end()) return false;
        if (std::abs(it->second - w) > 1e-12 * std::max(1.0, std::abs(it->second))) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("unit-weight pairs at window 1") {
    CoocMatrix m = build_cooccurrence({{0, 1, 0}}, 2, 1);
    CHECK(m.at(0, 1) == 2.0);
    CHECK(m.at(1, 0) == 2.0);
    CHECK(m.at(0, 0) == 0.0);
    CHECK(m.nnz() == 2);
}

TEST_CASE("empty and single-token streams give empty matrices") {
    CHECK(build_cooccurrence({}, 4, 15).empty());
    CHECK(build_cooccurrence({{}}, 4, 15).empty());
    CHECK(build_cooccurrence({{2}}, 4, 15).empty());
}

TEST_CASE("distance weighting is 1/d") {
    CoocMatrix m = build_cooccurrence({{0, 1, 2}}, 3, 2);
    CHECK(m.at(0, 1) == 1.0);
    CHECK(m.at(0, 2) == 0.5);
    CHECK(m.at(1, 2) == 1.0);
}

TEST_CASE("streams never mix across users") {
    CoocMatrix joined = build_cooccurrence({{0, 1}, {2, 3}}, 4, 15);
    CHECK(joined.at(1, 2) == 0.0);
    CHECK(joined.at(0, 1) == 1.0);
    CHECK(joined.at(2, 3) == 1.0);
}

TEST_CASE("matrix is symmetric") {
    std::mt19937_64 rng(1);
    std::vector<std::vector<int>> streams(3);
    for (auto& s : streams)
        for (int i = 0; i < 60; ++i) s.push_back(static_cast<int>(rng() % 12));
    CoocMatrix m = build_cooccurrence(streams, 12, 7);
    for (const auto& [i, j, w] : m.sorted_entries()) CHECK(m.at(j, i) == w);
}

TEST_CASE("matches the brute-force oracle exactly") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        int vocab = 2 + static_cast<int>(rng() % 19);
        int window = 1 + static_cast<int>(rng() % 15);
        int users = 1 + static_cast<int>(rng() % 3);
        std::vector<std::vector<int>> streams(users);
        for (auto& s : streams) {
            int len = static_cast<int>(rng() % 201);
            for (int i = 0; i < len; ++i) s.push_back(static_cast<int>(rng() % vocab));
        }
        CoocMatrix m = build_cooccurrence(streams, vocab, window);
        CAPTURE(trial);
        CHECK(equals_oracle(m, brute_force(streams, window)));
    }
}

TEST_CASE("window must be positive and ids in range") {
    CHECK_THROWS_AS(build_cooccurrence({{0}}, 1, 0), std::runtime_error);
    CHECK_THROWS_AS(build_cooccurrence({{0, 5}}, 2, 1), std::out_of_range);
}
