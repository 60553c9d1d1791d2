#include <doctest.h>

#include "cmdseer/config.hpp"
#include "helpers.hpp"

using namespace cmdseer::cli;

TEST_CASE("config files parse key=value with comments") {
    testutil::TempDir dir("config");
    testutil::write_file(dir.path() / "c.cfg",
                         "# pipeline\n"
                         "artifact_dir = out\n"
                         "method=glove\n"
                         "dim = 32   # inline comment\n"
                         "lambda=2.5\n"
                         "score_commands_only = true\n"
                         "seed=7\n"
                         "\n");
    PipelineConfig cfg = load_pipeline_config(dir.path() / "c.cfg");
    CHECK(cfg.artifact_dir == "out");
    CHECK(cfg.method == "glove");
    CHECK(cfg.dim == 32);
    CHECK(cfg.lambda == 2.5);
    CHECK(cfg.score_commands_only);
    CHECK(cfg.seed == 7);
    // untouched keys keep their defaults
    CHECK(cfg.window == 15);
    CHECK(cfg.dropout == 0.1);
}

TEST_CASE("unknown keys are rejected") {
    testutil::TempDir dir("config-bad");
    testutil::write_file(dir.path() / "c.cfg", "no_such_key=1\n");
    CHECK_THROWS_WITH_AS(load_pipeline_config(dir.path() / "c.cfg"),
                         doctest::Contains("no_such_key"), std::runtime_error);
}

TEST_CASE("bad values are rejected") {
    testutil::TempDir dir("config-bad2");
    testutil::write_file(dir.path() / "c.cfg", "dim=abc\n");
    CHECK_THROWS_AS(load_pipeline_config(dir.path() / "c.cfg"), std::runtime_error);
    testutil::write_file(dir.path() / "d.cfg", "just a line\n");
    CHECK_THROWS_AS(load_pipeline_config(dir.path() / "d.cfg"), std::runtime_error);
}

TEST_CASE("defaults match the documented values") {
    PipelineConfig cfg;
    CHECK(cfg.dim == 50);
    CHECK(cfg.window == 15);
    CHECK(cfg.lambda == 1.0);
    CHECK(cfg.kb_k == 5);
    CHECK(cfg.dropout == 0.1);
    CHECK(cfg.context_len == 5);
    CHECK(cfg.hidden1 == 100);
    CHECK(cfg.hidden2 == 100);
    CHECK(cfg.lr == 0.1);
    CHECK(cfg.grid == "300,500,1000,2000,3000,4000,5000");
}

TEST_CASE("integer lists parse") {
    CHECK(parse_int_list("5,10") == std::vector<int>{5, 10});
    CHECK(parse_int_list("300") == std::vector<int>{300});
    CHECK_THROWS_AS(parse_int_list(""), std::runtime_error);
    CHECK_THROWS_AS(parse_int_list("a,b"), std::runtime_error);
}
