#include <doctest.h>

#include <map>
#include <random>

#include "cmdseer/eval.hpp"
#include "helpers.hpp"

using namespace cmdseer;
using namespace cmdseer::eval;

namespace {

norm::Vocab vocab_of(const std::vector<std::string>& tokens) {
    norm::Vocab v;
    for (const auto& t : tokens) {
        v.token_to_id.emplace(t, v.size());
        v.id_to_token.push_back(t);
        v.counts.push_back(1);
    }
    return v;
}

// exhaustive reference for MFC with the lexicographic tie-break
double mfc_oracle(const std::vector<int>& stream, const norm::Vocab& vocab) {
    std::size_t correct = 0;
    for (std::size_t t = 1; t < stream.size(); ++t) {
        std::map<int, int> counts;
        for (std::size_t u = 0; u < t; ++u) ++counts[stream[u]];
        int best = -1;
        for (const auto& [id, c] : counts) {
            if (best < 0 || c > counts[best] ||
                (c == counts[best] && vocab.id_to_token[id] < vocab.id_to_token[best]))
                best = id;
        }
        if (stream[t] == best) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(stream.size() - 1);
}

double mrc_oracle(const std::vector<int>& stream) {
    std::size_t correct = 0;
    for (std::size_t t = 1; t < stream.size(); ++t)
        if (stream[t] == stream[t - 1]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(stream.size() - 1);
}

}  // namespace

TEST_CASE("holdout split is chronological with floor(ratio*N)") {
    HoldoutSplit s = holdout_split(10, 0.9);
    CHECK(s.train_end == 9);
    CHECK(s.n == 10);
    s = holdout_split(2, 0.9);
    CHECK(s.train_end == 1);
    CHECK_THROWS_AS(holdout_split(1, 0.9), std::runtime_error);
}

TEST_CASE("kfold split covers, is disjoint, and balanced within one") {
    for (std::size_t n : {10ul, 53ul, 1000ul}) {
        for (int k : {5, 10}) {
            FoldSpec spec = kfold_split(n, k);
            REQUIRE(spec.val_ranges.size() == static_cast<std::size_t>(k));
            std::size_t covered = 0, mn = n, mx = 0, prev_end = 0;
            for (const auto& [b, e] : spec.val_ranges) {
                CHECK(b == prev_end);  // contiguous and disjoint
                prev_end = e;
                std::size_t size = e - b;
                covered += size;
                mn = std::min(mn, size);
                mx = std::max(mx, size);
            }
            CHECK(covered == n);
            CHECK(mx - mn <= 1);
        }
    }
}

TEST_CASE("k equal to N gives leave-one-out") {
    FoldSpec spec = kfold_split(6, 6);
    for (const auto& [b, e] : spec.val_ranges) CHECK(e - b == 1);
}

TEST_CASE("kfold rejects N < k") {
    CHECK_THROWS_AS(kfold_split(4, 5), std::runtime_error);
}

TEST_CASE("select_optimal_epoch is a 1-based argmin with earliest tie") {
    model::TrainHistory h;
    h.val_loss = {3.0, 2.0, 2.5};
    CHECK(select_optimal_epoch(h) == 2);
    h.val_loss = {1.0};
    CHECK(select_optimal_epoch(h) == 1);
    h.val_loss = {2.0, 2.0};
    CHECK(select_optimal_epoch(h) == 1);
    h.val_loss.clear();
    CHECK_THROWS_AS(select_optimal_epoch(h), std::runtime_error);
}

TEST_CASE("baseline examples from hand enumeration") {
    norm::Vocab v = vocab_of({"a", "b"});
    CHECK(baseline_mrc({0, 0, 1}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(baseline_mfc({0, 1, 0, 1}, v) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(baseline_mrc({0, 0, 0}) == 1.0);
    CHECK(baseline_mfc({0, 0, 0}, v) == 1.0);
    CHECK_THROWS_AS(baseline_mrc({0}), std::runtime_error);
}

TEST_CASE("baselines match the exhaustive oracle on every stream of length <= 6") {
    norm::Vocab v = vocab_of({"a", "b", "c"});
    for (int len = 2; len <= 6; ++len) {
        std::vector<int> stream(len, 0);
        std::size_t total = 1;
        for (int i = 0; i < len; ++i) total *= 3;
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t c = code;
            for (int i = 0; i < len; ++i) {
                stream[i] = static_cast<int>(c % 3);
                c /= 3;
            }
            CAPTURE(code);
            CHECK(baseline_mrc(stream) == doctest::Approx(mrc_oracle(stream)).epsilon(1e-15));
            CHECK(baseline_mfc(stream, v) == doctest::Approx(mfc_oracle(stream, v)).epsilon(1e-15));
        }
    }
}

TEST_CASE("range-restricted baselines score only their window") {
    norm::Vocab v = vocab_of({"a", "b"});
    std::vector<int> stream{0, 0, 1, 1, 0};
    // positions 2..3: predictions use full history before each position
    double mrc = baseline_mrc_range(stream, 2, 4);
    // t=2: prev 0, actual 1 (wrong). t=3: prev 1, actual 1 (right)
    CHECK(mrc == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("report maxima are column maxima over clean rows") {
    EvalReport r;
    r.method = "glove";
    r.rows = {{300, 3, 51.0, 48.0, 47.0, ""},
              {500, 5, 52.0, 47.5, 47.5, ""},
              {1000, 2, 99.0, 99.0, 99.0, "boom"}};
    EvalRow m = r.maxima();
    CHECK(m.test_acc == 52.0);
    CHECK(m.cv10 == 48.0);
    CHECK(m.cv5 == 47.5);
}

TEST_CASE("report of identical rows has that value as max") {
    EvalReport r;
    r.method = "sgns";
    r.rows = {{300, 1, 50.0, 40.0, 41.0, ""}, {500, 1, 50.0, 40.0, 41.0, ""}};
    EvalRow m = r.maxima();
    CHECK(m.test_acc == 50.0);
    CHECK(m.cv10 == 40.0);
    CHECK(m.cv5 == 41.0);
}

TEST_CASE("cv accuracy equals the mean of fold accuracies to 1e-12") {
    // small real training run over a synthetic stream
    std::mt19937_64 rng(4);
    std::vector<int> ids;
    for (int i = 0; i < 80; ++i) ids.push_back(static_cast<int>(rng() % 5));
    norm::TokenStream s{"u", ids, {}};
    for (std::size_t i = 0; i < ids.size(); ++i) s.line_starts.push_back(i);
    model::PairSet pairs = model::make_training_pairs({s}, 2);

    emb::EmbeddingMatrix e;
    e.vocab_size = 5;
    e.dim = 3;
    e.data.resize(15);
    std::uniform_real_distribution<double> unif(-0.3, 0.3);
    for (auto& x : e.data) x = unif(rng);

    model::ModelConfig cfg;
    cfg.context_len = 2;
    cfg.hidden1 = 4;
    cfg.hidden2 = 4;
    cfg.dropout = 0.0;
    cfg.learning_rate = 1e-3;
    cfg.batch_size = 16;
    cfg.seed = 11;

    CvResult cv = kfold_cv(e, pairs, 5, 2, cfg);
    REQUIRE(cv.fold_accuracy.size() == 5);
    double mean = 0.0;
    for (double a : cv.fold_accuracy) mean += a;
    mean /= 5.0;
    CHECK(std::abs(mean - cv.mean_accuracy) <= 1e-12);
}

TEST_CASE("run_grid produces one row per batch size and survives row failures") {
    std::mt19937_64 rng(9);
    std::vector<int> ids;
    for (int i = 0; i < 60; ++i) ids.push_back(static_cast<int>(rng() % 4));
    norm::TokenStream s{"u", ids, {}};
    for (std::size_t i = 0; i < ids.size(); ++i) s.line_starts.push_back(i);
    model::PairSet pairs = model::make_training_pairs({s}, 2);

    emb::EmbeddingMatrix e;
    e.vocab_size = 4;
    e.dim = 3;
    e.data.resize(12, 0.1);

    model::ModelConfig cfg;
    cfg.context_len = 2;
    cfg.hidden1 = 3;
    cfg.hidden2 = 3;
    cfg.dropout = 0.0;
    cfg.learning_rate = 1e-3;
    cfg.seed = 2;

    GridConfig grid;
    grid.batch_sizes = {8, 16};
    grid.folds = {5};
    grid.epoch_cap = 2;

    EvalReport report = run_grid("glove", e, pairs, cfg, grid);
    REQUIRE(report.rows.size() == 2);
    for (const auto& row : report.rows) {
        CHECK(row.error.empty());
        CHECK(row.optimal_epoch >= 1);
        CHECK(row.test_acc >= 0.0);
        CHECK(row.test_acc <= 100.0);
        CHECK(row.cv5 >= 0.0);
    }

    // a default grid entry larger than the data still yields a row, not a crash
    GridConfig bad = grid;
    bad.folds = {50000};
    EvalReport rep2 = run_grid("glove", e, pairs, cfg, bad);
    REQUIRE(rep2.rows.size() == 2);
    CHECK_FALSE(rep2.rows[0].error.empty());
}

TEST_CASE("grid default matches the published batch sizes") {
    GridConfig grid;
    CHECK(grid.batch_sizes == std::vector<int>{300, 500, 1000, 2000, 3000, 4000, 5000});
}

TEST_CASE("reports serialize to tsv and json") {
    EvalReport r;
    r.method = "joint";
    r.rows = {{300, 3, 51.0, 48.0, 47.0, ""}};
    EvalReport b;
    b.method = "mrc";
    b.rows = {{0, 1, 30.0, 29.0, 28.0, ""}};

    testutil::TempDir dir("report");
    write_reports_tsv({r, b}, dir.path() / "report.tsv");
    write_reports_json({r, b}, dir.path() / "report.json");

    std::string tsv = testutil::read_file(dir.path() / "report.tsv");
    CHECK(tsv.find("joint\t300\t3\t51.00\t48.00\t47.00") != std::string::npos);
    CHECK(tsv.find("mrc\t-\t-\t30.00") != std::string::npos);
    CHECK(tsv.find("max") != std::string::npos);

    std::string json = testutil::read_file(dir.path() / "report.json");
    CHECK(json.find("\"method\": \"joint\"") != std::string::npos);
    CHECK(json.find("\"test_acc\": 51.0") != std::string::npos);
}
