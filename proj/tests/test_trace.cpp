#include <doctest.h>

#include <random>
#include <sstream>

#include "cmdseer/trace.hpp"
#include "helpers.hpp"

using namespace cmdseer::trace;

namespace {

UserTrace parse_str(const std::string& text, const std::string& user = "u") {
    std::istringstream in(text);
    return parse_trace(in, user);
}

}  // namespace

TEST_CASE("parse_trace maps lines to records") {
    UserTrace t = parse_str("C ls -l\nC cd src");
    REQUIRE(t.records.size() == 2);
    CHECK(t.records[0].tag == Tag::Command);
    CHECK(t.records[0].payload == "ls -l");
    CHECK(t.records[0].line_no == 1);
    CHECK(t.records[1].payload == "cd src");
    CHECK(t.records[1].line_no == 2);
}

TEST_CASE("parse_trace on empty input") {
    UserTrace t = parse_str("");
    CHECK(t.records.empty());
    CHECK(t.aliases.empty());
}

TEST_CASE("alias definitions are collected") {
    UserTrace t = parse_str("A ll=ls -l\nC ll");
    REQUIRE(t.records.size() == 2);
    CHECK(t.records[0].tag == Tag::AliasDef);
    CHECK(t.records[1].tag == Tag::Command);
    REQUIRE(t.aliases.count("ll") == 1);
    CHECK(t.aliases.at("ll") == "ls -l");
}

TEST_CASE("later alias definition wins") {
    UserTrace t = parse_str("A g=git\nA g=grep");
    CHECK(t.aliases.at("g") == "grep");
}

TEST_CASE("unrecognized and malformed lines become Other, counted, never dropped") {
    UserTrace t = parse_str("Q what\nC \nA broken\nplain text\n\nC ok");
    REQUIRE(t.records.size() == 6);
    CHECK(t.records[0].tag == Tag::Other);  // unknown tag letter
    CHECK(t.records[1].tag == Tag::Other);  // empty command payload
    CHECK(t.records[2].tag == Tag::Other);  // alias without '='
    CHECK(t.records[3].tag == Tag::Other);
    CHECK(t.records[4].tag == Tag::Other);  // empty line
    CHECK(t.records[5].tag == Tag::Command);
    CHECK(t.unrecognized == 5);
}

TEST_CASE("record count equals line count") {
    std::string text = "C a\nE\nD /tmp\nS login\njunk\nA x=y\n";
    UserTrace t = parse_str(text);
    CHECK(t.records.size() == 6);
}

TEST_CASE("serialize/parse round trip") {
    std::string text = "S start\nC ls -l\nD /home\nA ll=ls -l\nE\nC  spaced\nnoise line\nC x";
    UserTrace t = parse_str(text);
    UserTrace again = parse_str(serialize_trace(t));
    CHECK(t == again);
}

TEST_CASE("round trip holds for random traces") {
    std::mt19937_64 rng(7);
    const char* tags = "SCDAEQX";
    for (int trial = 0; trial < 50; ++trial) {
        std::ostringstream text;
        std::uniform_int_distribution<int> lines(0, 30), tag(0, 6), len(0, 8);
        int n = lines(rng);
        for (int i = 0; i < n; ++i) {
            text << tags[tag(rng)];
            int payload = len(rng);
            if (payload > 0) {
                text << ' ';
                for (int j = 0; j < payload; ++j)
                    text << static_cast<char>('a' + static_cast<int>(rng() % 26));
            }
            text << '\n';
        }
        UserTrace t = parse_str(text.str());
        UserTrace again = parse_str(serialize_trace(t));
        CAPTURE(text.str());
        CHECK(t == again);
    }
}

TEST_CASE("glob matching") {
    CHECK(glob_match("*", "anything"));
    CHECK(glob_match("user-*", "user-12"));
    CHECK_FALSE(glob_match("user-*", "admin-12"));
    CHECK(glob_match("u?.txt", "u1.txt"));
    CHECK_FALSE(glob_match("u?.txt", "u12.txt"));
    CHECK(glob_match("*.trace", "a.b.trace"));
}

TEST_CASE("load_user_group orders lexicographically and reports failures") {
    testutil::TempDir dir("traces");
    testutil::write_file(dir.path() / "u2.txt", "C b\n");
    testutil::write_file(dir.path() / "u1.txt", "C a\n");
    LoadReport r = load_user_group(dir.path());
    REQUIRE(r.traces.size() == 2);
    CHECK(r.traces[0].user_id == "u1");
    CHECK(r.traces[1].user_id == "u2");
    CHECK(r.failures.empty());
}

TEST_CASE("load_user_group with no matching files is an explicit error") {
    testutil::TempDir dir("traces-empty");
    CHECK_THROWS_WITH_AS(load_user_group(dir.path()),
                         doctest::Contains("empty corpus"), std::runtime_error);
    testutil::write_file(dir.path() / "u1.txt", "C a\n");
    CHECK_THROWS_AS(load_user_group(dir.path(), "zzz*"), std::runtime_error);
}

TEST_CASE("load_user_group applies the filename filter") {
    testutil::TempDir dir("traces-filter");
    testutil::write_file(dir.path() / "scientist-1", "C a\n");
    testutil::write_file(dir.path() / "novice-1", "C b\n");
    LoadReport r = load_user_group(dir.path(), "scientist-*");
    REQUIRE(r.traces.size() == 1);
    CHECK(r.traces[0].user_id == "scientist-1");
}

TEST_CASE("greenberg adapter folds alias lines and maps error marks") {
    std::string raw =
        "S Tue Oct 13 10:43:15 1987\n"
        "C ll /tmp\n"
        "A ls -l /tmp\n"
        "D /home/u\n"
        "C sl\n"
        "X unknown command\n"
        "C ls\n"
        "E Tue Oct 13 11:00:00 1987\n";
    std::istringstream in(raw);
    std::string normalized = greenberg_to_normalized(in);
    UserTrace t = parse_str(normalized);

    REQUIRE(t.records.size() == 6);
    CHECK(t.records[0].tag == Tag::SessionStart);
    CHECK(t.records[1].tag == Tag::Command);
    CHECK(t.records[1].payload == "ls -l /tmp");  // expanded form replaces the typed one
    CHECK(t.records[2].tag == Tag::Directory);
    CHECK(t.records[3].tag == Tag::Command);
    CHECK(t.records[3].payload == "sl");
    CHECK(t.records[4].tag == Tag::ErrorMark);
    CHECK(t.records[5].payload == "ls");
}

TEST_CASE("greenberg adapter passes unknown markup through") {
    std::istringstream in("Z mystery\nC ok\n");
    UserTrace t = parse_str(greenberg_to_normalized(in));
    REQUIRE(t.records.size() == 2);
    CHECK(t.records[0].tag == Tag::Other);
    CHECK(t.unrecognized == 1);
}
