#include <doctest.h>

#include <random>

#include "cmdseer/sgns.hpp"
#include "helpers.hpp"

using namespace cmdseer::emb;

namespace {

std::vector<double> random_vec(int d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v(d);
    for (auto& x : v) x = unif(rng);
    return v;
}

}  // namespace

TEST_CASE("term gradient matches central finite differences") {
    std::mt19937_64 rng(31);
    const int d = 6;
    std::vector<double> center = random_vec(d, rng);
    std::vector<double> context = random_vec(d, rng);
    std::vector<std::vector<double>> negs = {random_vec(d, rng), random_vec(d, rng),
                                             random_vec(d, rng)};

    SgnsTermGrad analytic = sgns_term_gradient(center, context, negs);

    // flatten (center, context, negatives) into one parameter vector
    auto slot = [&](std::size_t i) -> double* {
        if (i < static_cast<std::size_t>(d)) return &center[i];
        i -= d;
        if (i < static_cast<std::size_t>(d)) return &context[i];
        i -= d;
        return &negs[i / d][i % d];
    };
    std::size_t n = static_cast<std::size_t>(d) * (2 + negs.size());
    auto numeric = testutil::central_differences(
        n, [&](std::size_t i) { return *slot(i); }, [&](std::size_t i, double v) { *slot(i) = v; },
        [&] { return sgns_term_loss(center, context, negs); });

    std::vector<double> flat;
    flat.insert(flat.end(), analytic.center.begin(), analytic.center.end());
    flat.insert(flat.end(), analytic.context.begin(), analytic.context.end());
    for (const auto& g : analytic.negatives) flat.insert(flat.end(), g.begin(), g.end());

    CHECK(testutil::max_rel_error(flat, numeric) < 1e-4);
}

TEST_CASE("term loss is stable for extreme dot products") {
    std::vector<double> big(4, 300.0), center(4, 1.0);
    std::vector<std::vector<double>> negs = {big};
    double loss = sgns_term_loss(center, big, negs);
    CHECK(std::isfinite(loss));
    std::vector<double> small(4, -300.0);
    loss = sgns_term_loss(center, small, {});
    CHECK(std::isfinite(loss));
}

TEST_CASE("repeated bigram: trained pair beats an untouched token") {
    // tokens 0 and 1 alternate; tokens 2..4 never occur, keeping their
    // random initialization
    std::vector<int> stream;
    for (int i = 0; i < 120; ++i) stream.push_back(i % 2);

    SgnsConfig cfg;
    cfg.dim = 12;
    cfg.window = 4;
    cfg.negatives = 4;
    cfg.epochs = 12;
    cfg.seed = 9;
    EmbeddingMatrix e = train_sgns({stream}, 5, cfg);
    REQUIRE(e.all_finite());

    double trained = cosine(e.row(0), e.row(1));
    double untouched = cosine(e.row(0), e.row(3));
    CHECK(trained > untouched);
}

TEST_CASE("sgns training is seed-deterministic") {
    std::mt19937_64 rng(12);
    std::vector<std::vector<int>> streams(2);
    for (auto& s : streams)
        for (int i = 0; i < 100; ++i) s.push_back(static_cast<int>(rng() % 7));

    SgnsConfig cfg;
    cfg.dim = 8;
    cfg.epochs = 3;
    cfg.seed = 5;
    EmbeddingMatrix a = train_sgns(streams, 7, cfg);
    EmbeddingMatrix b = train_sgns(streams, 7, cfg);
    CHECK(a.data == b.data);

    cfg.seed = 6;
    EmbeddingMatrix c = train_sgns(streams, 7, cfg);
    CHECK(a.data != c.data);
}

TEST_CASE("negatives default to 5") {
    CHECK(SgnsConfig{}.negatives == 5);
    CHECK(SgnsConfig{}.window == 15);
    CHECK(SgnsConfig{}.dim == 50);
}

TEST_CASE("empty streams are rejected") {
    CHECK_THROWS_AS(train_sgns({}, 4, SgnsConfig{}), std::runtime_error);
    CHECK_THROWS_AS(train_sgns({{}}, 4, SgnsConfig{}), std::runtime_error);
}

TEST_CASE("per-epoch loss is finite and reported") {
    std::vector<int> stream;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) stream.push_back(static_cast<int>(rng() % 6));
    SgnsConfig cfg;
    cfg.dim = 6;
    cfg.epochs = 4;
    std::vector<double> loss;
    train_sgns({stream}, 6, cfg, &loss);
    REQUIRE(loss.size() == 4);
    for (double l : loss) CHECK(std::isfinite(l));
    CHECK(loss.back() < loss.front());
}
