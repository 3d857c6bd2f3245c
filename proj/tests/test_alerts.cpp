#include "acr/alerts.hpp"

#include "doctest.h"

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <random>

using namespace acr;

namespace {

Alert mk(Tool tool, std::string checker, std::string file, int line,
         std::optional<int> col = std::nullopt) {
    Alert a;
    a.tool = tool;
    a.checker_id = std::move(checker);
    a.file = std::move(file);
    a.line = line;
    a.column = col;
    a.message = "m";
    return a;
}

std::string temp_file(const std::string& content) {
    static int n = 0;
    std::string path = "/tmp/acr_mapping_" + std::to_string(::getpid()) + "_" +
                       std::to_string(n++) + ".tsv";
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("builtin mapping knows the clang analyzer null checkers") {
    auto m = CheckerMapping::load("builtin");
    auto e = m.lookup(Tool::ClangTidy, "clang-analyzer-core.NullDereference");
    REQUIRE(e.has_value());
    CHECK(e->guideline == "EXP34-C");
    auto e2 = m.lookup(Tool::ClangTidy, "clang-analyzer-core.NonNullParamChecker");
    REQUIRE(e2.has_value());
    CHECK(e2->guideline == "EXP34-C");
}

TEST_CASE("empty user file leaves the builtin mapping unchanged") {
    auto builtin = CheckerMapping::load("builtin");
    auto merged = CheckerMapping::load(temp_file("# nothing here\n\n"));
    CHECK(merged.entry_count() == builtin.entry_count());
    auto e = merged.lookup(Tool::Cppcheck, "nullPointer");
    REQUIRE(e.has_value());
    CHECK(e->guideline == "EXP34-C");
}

TEST_CASE("mapping rows round-trip through the parser") {
    auto m = CheckerMapping::load(temp_file("cppcheck\tuninitvar\tEXP33-C\t457\n"));
    auto e = m.lookup(Tool::Cppcheck, "uninitvar");
    REQUIRE(e.has_value());
    CHECK(e->guideline == "EXP33-C");
    REQUIRE(e->cwe.has_value());
    CHECK(*e->cwe == 457);
}

TEST_CASE("mapping errors name the offending line") {
    std::string path = temp_file("# ok\ncppcheck\tonly-two-fields\n");
    try {
        CheckerMapping::load(path);
        FAIL("expected MappingError");
    } catch (const MappingError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(CheckerMapping::load(temp_file("cppcheck\tx\tNOPE\t1\n")), MappingError);
    CHECK_THROWS_AS(CheckerMapping::load(temp_file("cppcheck\tx\tEXP05-CPP\t1\n")), MappingError);
    CHECK_THROWS_AS(CheckerMapping::load(temp_file("sometool\tx\tEXP34-C\t1\n")), MappingError);
}

TEST_CASE("user rows override builtin entries") {
    auto m = CheckerMapping::load(temp_file("cppcheck\tnullPointer\tMSC12-C\t\n"));
    auto e = m.lookup(Tool::Cppcheck, "nullPointer");
    REQUIRE(e.has_value());
    CHECK(e->guideline == "MSC12-C");
}

TEST_CASE("map_alert fills guideline and cwe from the table") {
    auto m = CheckerMapping::load("builtin");
    Alert a = map_alert(mk(Tool::Cppcheck, "nullPointer", "a.c", 7), m);
    REQUIRE(a.guideline.has_value());
    CHECK(*a.guideline == "EXP34-C");
    REQUIRE(a.cwe.has_value());
    CHECK(*a.cwe == 476);
}

TEST_CASE("map_alert keeps unknown checkers unmapped") {
    auto m = CheckerMapping::load("builtin");
    Alert a = map_alert(mk(Tool::Cppcheck, "someUnknownCheck", "a.c", 7), m);
    CHECK_FALSE(a.guideline.has_value());
}

TEST_CASE("map_alert preserves a guideline the mapping cannot improve") {
    auto m = CheckerMapping::load("builtin");
    Alert a = mk(Tool::Cppcheck, "someUnknownCheck", "a.c", 7);
    a.guideline = "EXP34-C";
    Alert b = map_alert(a, m);
    REQUIRE(b.guideline.has_value());
    CHECK(*b.guideline == "EXP34-C");
}

TEST_CASE("guideline-shaped checkers map to themselves") {
    auto m = CheckerMapping::load("builtin");
    Alert a = map_alert(mk(Tool::Rosecheckers, "MSC12-C", "y.c", 3), m);
    REQUIRE(a.guideline.has_value());
    CHECK(*a.guideline == "MSC12-C");
}

TEST_CASE("map_alert is idempotent") {
    auto m = CheckerMapping::load("builtin");
    std::mt19937 rng(11);
    const char* checkers[] = {"nullPointer", "uninitvar", "unreadVariable", "mystery",
                              "EXP34-C"};
    for (int i = 0; i < 200; ++i) {
        Alert a = mk(static_cast<Tool>(rng() % 4), checkers[rng() % 5],
                     "f" + std::to_string(rng() % 9) + ".c", static_cast<int>(rng() % 100 + 1));
        Alert once = map_alert(a, m);
        Alert twice = map_alert(once, m);
        CHECK(once.guideline == twice.guideline);
        CHECK(once.cwe == twice.cwe);
        CHECK(alert_key(once) == alert_key(twice));
    }
}

TEST_CASE("alert_key ignores tool and column") {
    Alert a = mk(Tool::Cppcheck, "nullPointer", "a.c", 7, 5);
    Alert b = mk(Tool::ClangTidy, "clang-analyzer-core.NullDereference", "a.c", 7, 22);
    a.guideline = "EXP34-C";
    b.guideline = "EXP34-C";
    CHECK(alert_key(a) == alert_key(b));

    b.column = std::nullopt;
    CHECK(alert_key(a) == alert_key(b));

    b.line = 8;
    CHECK(alert_key(a) != alert_key(b));
}

TEST_CASE("alert_key falls back to the checker when unmapped") {
    Alert a = mk(Tool::Generic, "custom", "a.c", 7);
    Alert b = mk(Tool::Generic, "other", "a.c", 7);
    CHECK(alert_key(a) != alert_key(b));
}

TEST_CASE("repair-supported ids are exactly the three") {
    CHECK(is_repair_supported("EXP34-C"));
    CHECK(is_repair_supported("EXP33-C"));
    CHECK(is_repair_supported("MSC12-C"));
    CHECK_FALSE(is_repair_supported("MSC13-C"));
    CHECK_FALSE(is_repair_supported("INT31-C"));
}

TEST_CASE("builtin guideline table stays inside the CERT priority range") {
    auto m = CheckerMapping::load("builtin");
    for (const char* id : {"EXP34-C", "EXP33-C", "MSC12-C", "MSC13-C", "DCL19-C", "INT31-C"}) {
        const Guideline* g = m.find_guideline(id);
        REQUIRE(g != nullptr);
        CHECK(g->priority >= 1);
        CHECK(g->priority <= 27);
    }
    CHECK(m.find_guideline("EXP34-C")->priority == 18);
    CHECK(m.find_guideline("EXP33-C")->priority == 12);
    CHECK(m.find_guideline("MSC12-C")->priority == 2);
}
