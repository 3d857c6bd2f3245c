#include "acr/ingest.hpp"

#include "doctest.h"

#include <fstream>
#include <random>
#include <sstream>

using namespace acr;

namespace {

std::string read_fixture(const std::string& rel) {
    std::ifstream in(std::string(ACR_FIXTURE_DIR) + "/" + rel, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("cppcheck xml: golden sample parses field by field") {
    auto report = parse_cppcheck_xml(read_fixture("parsers/cppcheck_sample.xml"));
    REQUIRE(report.alerts.size() == 3);

    const Alert& a = report.alerts[0];
    CHECK(a.tool == Tool::Cppcheck);
    CHECK(a.checker_id == "nullPointer");
    CHECK(a.file == "src/a.c");
    CHECK(a.line == 7);
    REQUIRE(a.column.has_value());
    CHECK(*a.column == 5);
    CHECK(a.message == "Null pointer dereference: p");
    REQUIRE(a.severity.has_value());
    CHECK(*a.severity == "error");
    REQUIRE(a.cwe.has_value());
    CHECK(*a.cwe == 476);

    const Alert& b = report.alerts[1];
    CHECK(b.checker_id == "uninitvar");
    CHECK(b.file == "src/b.c");
    CHECK(b.line == 12);
    CHECK(b.column == 11);

    const Alert& c = report.alerts[2];
    CHECK(c.checker_id == "unreadVariable");
    CHECK(c.message == "Variable \"y\" is assigned a value that is never used.");
    CHECK(c.file == "lib/util.c");

    // The location-less error is recorded, not silently dropped.
    REQUIRE(report.parse_notes.size() == 1);
    CHECK(report.parse_notes[0].first.find("missingIncludeSystem") != std::string::npos);
}

TEST_CASE("cppcheck xml: empty results") {
    auto report = parse_cppcheck_xml("<?xml version=\"1.0\"?><results version=\"2\"/>");
    CHECK(report.alerts.empty());
    CHECK(report.parse_notes.empty());
}

TEST_CASE("cppcheck xml: first location wins") {
    auto report = parse_cppcheck_xml(
        "<results version=\"2\"><errors>"
        "<error id=\"nullPointer\" severity=\"error\" msg=\"m\">"
        "<location file=\"one.c\" line=\"1\" column=\"2\"/>"
        "<location file=\"two.c\" line=\"9\" column=\"9\"/>"
        "</error></errors></results>");
    REQUIRE(report.alerts.size() == 1);
    CHECK(report.alerts[0].file == "one.c");
    CHECK(report.alerts[0].line == 1);
}

TEST_CASE("cppcheck xml: malformed input reports a byte offset") {
    CHECK_THROWS_AS(parse_cppcheck_xml("<results version=\"2\"><err"), ParseError);
    try {
        parse_cppcheck_xml("<results version=\"2\"><error id=\"x\" msg=>");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
}

TEST_CASE("clang-tidy: golden sample") {
    auto report = parse_clang_tidy(read_fixture("parsers/clang_tidy_sample.log"));
    REQUIRE(report.alerts.size() == 4);

    const Alert& a = report.alerts[0];
    CHECK(a.tool == Tool::ClangTidy);
    CHECK(a.checker_id == "clang-analyzer-core.NullDereference");
    CHECK(a.file == "src/x.c");
    CHECK(a.line == 12);
    CHECK(a.column == 9);
    CHECK(a.message == "Dereference of null pointer (loaded from variable 'q')");
    CHECK(a.severity == "warning");

    CHECK(report.alerts[1].checker_id == "clang-analyzer-deadcode.DeadStores");

    // Diagnostic without a bracketed check name.
    const Alert& c = report.alerts[2];
    CHECK(c.checker_id == "unknown");
    CHECK(c.file == "src/y.c");

    const Alert& d = report.alerts[3];
    CHECK(d.severity == "error");
    CHECK(d.checker_id == "unknown");

    // Caret, code context and the summary line are skipped.
    CHECK(report.skipped_lines == 5);
}

TEST_CASE("clang-tidy: empty input") {
    auto report = parse_clang_tidy("");
    CHECK(report.alerts.empty());
    CHECK(report.skipped_lines == 0);
}

TEST_CASE("clang-tidy: caret lines are counted as skipped") {
    auto report = parse_clang_tidy("      ^\n");
    CHECK(report.alerts.empty());
    CHECK(report.skipped_lines == 1);
}

TEST_CASE("generic: record shape") {
    auto report = parse_generic("rosecheckers|MSC12-C|y.c|3||unused value\n");
    REQUIRE(report.alerts.size() == 1);
    const Alert& a = report.alerts[0];
    CHECK(a.tool == Tool::Rosecheckers);
    CHECK(a.checker_id == "MSC12-C");
    CHECK(a.file == "y.c");
    CHECK(a.line == 3);
    CHECK_FALSE(a.column.has_value());
    CHECK(a.message == "unused value");
}

TEST_CASE("generic: wrong field count is noted and skipped") {
    auto report = parse_generic("a|b|c\nrosecheckers|MSC12-C|y.c|3||ok\n");
    CHECK(report.alerts.size() == 1);
    CHECK(report.skipped_lines == 1);
    REQUIRE(report.parse_notes.size() == 1);
    CHECK(report.parse_notes[0].first == "line 1");
}

TEST_CASE("generic: order is preserved and totals add up") {
    std::string input;
    for (int i = 1; i <= 1000; ++i)
        input += "cppcheck|nullPointer|f" + std::to_string(i % 13) + ".c|" + std::to_string(i) +
                 "|1|msg " + std::to_string(i) + "\n";
    auto report = parse_generic(input);
    REQUIRE(report.alerts.size() == 1000);
    CHECK(report.skipped_lines == 0);
    for (int i = 0; i < 1000; ++i) CHECK(report.alerts[static_cast<std::size_t>(i)].line == i + 1);
}

TEST_CASE("generic: round-trip is lossless for randomized alerts") {
    std::mt19937 rng(4242);
    const char* files[] = {"a.c", "src/b.c", "lib/deep/c.h"};
    const char* checkers[] = {"nullPointer", "uninitvar", "EXP34-C", "some.dotted-name"};
    std::vector<Alert> alerts;
    for (int i = 0; i < 1000; ++i) {
        Alert a;
        a.tool = static_cast<Tool>(rng() % 4);
        a.checker_id = checkers[rng() % 4];
        a.file = files[rng() % 3];
        a.line = static_cast<int>(rng() % 5000 + 1);
        if (rng() % 3 != 0) a.column = static_cast<int>(rng() % 200 + 1);
        std::string msg = "message ";
        int len = static_cast<int>(rng() % 20);
        const char alphabet[] = "abc def|ghi (x) [y] <z> 0123";
        for (int k = 0; k < len; ++k) msg += alphabet[rng() % (sizeof alphabet - 1)];
        a.message = msg;
        alerts.push_back(std::move(a));
    }
    std::string emitted = emit_generic(alerts);
    auto report = parse_generic(emitted);
    REQUIRE(report.alerts.size() == alerts.size());
    CHECK(report.skipped_lines == 0);
    for (std::size_t i = 0; i < alerts.size(); ++i) {
        CHECK(report.alerts[i].tool == alerts[i].tool);
        CHECK(report.alerts[i].checker_id == alerts[i].checker_id);
        CHECK(report.alerts[i].file == alerts[i].file);
        CHECK(report.alerts[i].line == alerts[i].line);
        CHECK(report.alerts[i].column == alerts[i].column);
        CHECK(report.alerts[i].message == alerts[i].message);
    }
    // Emitting the reparsed list reproduces the bytes.
    CHECK(emit_generic(report.alerts) == emitted);
}

TEST_CASE("paths: relativized against a root and kept inside it") {
    CHECK(normalize_alert_path("/work/git/src/a.c", "/work/git") == "src/a.c");
    CHECK(normalize_alert_path("src//b.c") == "src/b.c");
    CHECK(normalize_alert_path("./c.c") == "c.c");
    CHECK(normalize_alert_path("src\\win.c") == "src/win.c");
    CHECK(normalize_alert_path("../escape.c").empty());
    CHECK(normalize_alert_path("src/../../escape.c").empty());

    IngestReport report;
    Alert ok;
    ok.file = "/work/git/src/a.c";
    ok.line = 1;
    Alert bad;
    bad.file = "../../etc/passwd";
    bad.line = 1;
    report.alerts = {ok, bad};
    relativize_paths(report, "/work/git");
    REQUIRE(report.alerts.size() == 1);
    CHECK(report.alerts[0].file == "src/a.c");
    CHECK(report.skipped_lines == 1);
}
