#include "acr/repair.hpp"

#include "acr/diff.hpp"

#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>

using namespace acr;
namespace fs = std::filesystem;

namespace {

Alert mk(std::string checker, std::string guideline, std::string file, int line,
         std::optional<int> col, Tool tool = Tool::Cppcheck) {
    Alert a;
    a.tool = tool;
    a.checker_id = std::move(checker);
    a.file = std::move(file);
    a.line = line;
    a.column = col;
    a.guideline = std::move(guideline);
    return a;
}

int column_of(const std::string& src, int line, const std::string& needle) {
    std::size_t pos = 0;
    for (int l = 1; l < line; ++l) pos = src.find('\n', pos) + 1;
    std::size_t hit = src.find(needle, pos);
    REQUIRE(hit != std::string::npos);
    return static_cast<int>(hit - pos) + 1;
}

/// Repairs one EXP34/EXP33/MSC12 site inline and returns the edited text.
std::string repair_one(const std::string& src, const Alert& alert,
                       const RepairConfig& config = {}) {
    auto m = SourceModel::analyze(src);
    auto r = locate_site(m, alert);
    REQUIRE(r.site.has_value());
    SiteRepair sr;
    if (*alert.guideline == kNullDeref) {
        auto ctx = enclosing_function(m, r.site->expr_range.begin);
        ErrorStrategy strategy =
            infer_error_strategy(ctx ? &*ctx : nullptr, config.error_handler);
        sr = repair_null_deref(m, *r.site, strategy);
    } else if (*alert.guideline == kUninitRead) {
        sr = repair_uninit(m, *r.site);
    } else {
        sr = repair_dead_code(m, *r.site, config);
    }
    REQUIRE(sr.status == RepairStatus::Repaired);
    REQUIRE(sr.edit.has_value());
    return apply_edits(src, {*sr.edit});
}

struct TempTree {
    fs::path root;
    TempTree() {
        root = fs::temp_directory_path() /
               ("acr_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::create_directories(root);
    }
    ~TempTree() {
        std::error_code ec;
        fs::remove_all(root, ec);
    }
    static int& counter() {
        static int n = 0;
        return n;
    }
    void write(const std::string& rel, const std::string& content) {
        fs::path p = root / rel;
        fs::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        out << content;
    }
    std::string read(const std::string& rel) const {
        std::ifstream in(root / rel, std::ios::binary);
        REQUIRE(in.good());
        std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return s;
    }
};

}  // namespace

TEST_CASE("apply_edits: identity, multiple edits, overlap guard") {
    CHECK(apply_edits("abc", {}) == "abc");

    std::string src = "x = p + q;";
    Edit e1{"f.c", {4, 5}, "P", "EXP34-C"};
    Edit e2{"f.c", {8, 9}, "Q", "EXP34-C"};
    CHECK(apply_edits(src, {e2, e1}) == "x = P + Q;");

    Edit o1{"f.c", {2, 6}, "a", "EXP34-C"};
    Edit o2{"f.c", {5, 7}, "b", "EXP34-C"};
    CHECK_THROWS_AS(apply_edits(src, {o1, o2}), EditOverlapError);

    // Two insertions at one offset are an engine bug, not a valid plan.
    Edit i1{"f.c", {3, 3}, "a", "EXP33-C"};
    Edit i2{"f.c", {3, 3}, "b", "EXP33-C"};
    CHECK_THROWS_AS(apply_edits(src, {i1, i2}), EditOverlapError);
}

TEST_CASE("support header matches the canonical text") {
    std::string h = emit_support_header();
    CHECK(h.find("#ifndef ACR_H") == 0);
    CHECK(h.find("#define null_check(e, handler) (__extension__({ \\") != std::string::npos);
    CHECK(h.find("__typeof__(e) acr_v_ = (e); \\") != std::string::npos);
    CHECK(h.find("if (!acr_v_) { handler; abort(); } \\") != std::string::npos);
    CHECK(h.find("#define null_check_lv(e, handler) (*(__extension__({ \\") != std::string::npos);
    CHECK(h.find("__typeof__(&(e)) acr_p_ = &(e); \\") != std::string::npos);
    CHECK(h.back() == '\n');
}

TEST_CASE("null deref repair wraps the expression") {
    std::string src =
        "void f(int *p) {\n"
        "    int x;\n"
        "    x = *p;\n"
        "    use(x);\n"
        "}\n";
    std::string out = repair_one(src, mk("nullPointer", "EXP34-C", "t.c", 3,
                                         column_of(src, 3, "p;")));
    CHECK(out.find("x = *null_check(p, return);") != std::string::npos);
}

TEST_CASE("null deref repair defaults to abort outside any function") {
    std::string src =
        "int g;\n"
        "int f(int *p) {\n"
        "    g = *p;\n"
        "    return g;\n"
        "}\n";
    // f has a single return; the integer rule finds no distinct value.
    std::string out =
        repair_one(src, mk("nullPointer", "EXP34-C", "t.c", 3, column_of(src, 3, "p;")));
    CHECK(out.find("g = *null_check(p, abort());") != std::string::npos);
}

TEST_CASE("null deref repair preserves the lvalue for postfix increment") {
    std::string src =
        "void walk(const char **names) {\n"
        "    const char *name;\n"
        "    while ((name = *names++)) {\n"
        "        use(name);\n"
        "    }\n"
        "}\n";
    std::string out =
        repair_one(src, mk("nullPointer", "EXP34-C", "t.c", 3, column_of(src, 3, "names++")));
    CHECK(out.find("while ((name = *null_check_lv(names, return)++)) {") != std::string::npos);
}

TEST_CASE("address-of targets are dismissed as false positives") {
    std::string src =
        "int f(void) {\n"
        "    int x = 2;\n"
        "    return *&x;\n"
        "}\n";
    auto m = SourceModel::analyze(src);
    auto r = locate_site(m, mk("nullPointer", "EXP34-C", "t.c", 3, column_of(src, 3, "&x")));
    REQUIRE(r.site.has_value());
    auto sr = repair_null_deref(m, *r.site, {ErrorStrategy::Kind::Abort, {}});
    CHECK(sr.status == RepairStatus::DismissedFalsePositive);
    CHECK_FALSE(sr.edit.has_value());
}

TEST_CASE("non-independent expressions are declined") {
    std::string src =
        "int f(int *p, int off) {\n"
        "    int x;\n"
        "    x = *(p\n"
        "#ifdef EXTRA\n"
        "    + off\n"
        "#endif\n"
        "    );\n"
        "    return x;\n"
        "}\n";
    auto m = SourceModel::analyze(src);
    auto r = locate_site(m, mk("nullPointer", "EXP34-C", "t.c", 3, column_of(src, 3, "p")));
    REQUIRE(r.site.has_value());
    auto sr = repair_null_deref(m, *r.site, {ErrorStrategy::Kind::Abort, {}});
    CHECK(sr.status == RepairStatus::SkippedNotIndependent);
}

TEST_CASE("uninit repair initializes only the alerted declarator") {
    std::string src =
        "int f(void) {\n"
        "    int a, b;\n"
        "    a = 1;\n"
        "    return a + b;\n"
        "}\n";
    std::string out =
        repair_one(src, mk("uninitvar", "EXP33-C", "t.c", 4, column_of(src, 4, "b;")));
    CHECK(out.find("int a, b = 0;") != std::string::npos);
}

TEST_CASE("uninit repair types the zero") {
    std::string src =
        "int f(void) {\n"
        "    float acc;\n"
        "    step(&acc);\n"
        "    return (int)acc;\n"
        "}\n";
    std::string out =
        repair_one(src, mk("uninitvar", "EXP33-C", "t.c", 4, column_of(src, 4, "acc;")));
    CHECK(out.find("float acc = 0.0f;") != std::string::npos);
}

TEST_CASE("dead code repair needs the explicit gate") {
    std::string src =
        "int f(void) {\n"
        "    int x;\n"
        "    x = foo(1);\n"
        "    return 0;\n"
        "}\n";
    auto m = SourceModel::analyze(src);
    auto r = locate_site(m, mk("unreadVariable", "MSC12-C", "t.c", 3, column_of(src, 3, "x =")));
    REQUIRE(r.site.has_value());

    RepairConfig off;
    auto gated = repair_dead_code(m, *r.site, off);
    CHECK(gated.status == RepairStatus::SkippedUnsupported);
    CHECK(gated.detail == "MSC12 disabled");

    RepairConfig on;
    on.msc12_enabled = true;
    auto sr = repair_dead_code(m, *r.site, on);
    REQUIRE(sr.status == RepairStatus::Repaired);
    CHECK(apply_edits(src, {*sr.edit}).find("    (void) foo(1);") != std::string::npos);
}

TEST_CASE("dead code repair deletes unused labels") {
    std::string src =
        "int f(int n) {\n"
        "    if (n) return 1;\n"
        "done: ;\n"
        "    return 0;\n"
        "}\n";
    RepairConfig on;
    on.msc12_enabled = true;
    std::string out = repair_one(
        src, mk("unusedLabel", "MSC12-C", "t.c", 3, column_of(src, 3, "done")), on);
    CHECK(out.find("done") == std::string::npos);
    CHECK(out.find(" ;\n    return 0;") != std::string::npos);
}

TEST_CASE("dead code repair declines other subcategories") {
    std::string src =
        "int f(unsigned u) {\n"
        "    if (u < 0) return 1;\n"
        "    return 0;\n"
        "}\n";
    auto m = SourceModel::analyze(src);
    auto r = locate_site(m, mk("unsignedLessThanZero", "MSC12-C", "t.c", 2,
                               column_of(src, 2, "u <")));
    REQUIRE(r.site.has_value());
    RepairConfig on;
    on.msc12_enabled = true;
    auto sr = repair_dead_code(m, *r.site, on);
    CHECK(sr.status == RepairStatus::SkippedUnsupported);

    // Pure assignments without a call are declined too.
    std::string src2 =
        "int f(void) {\n"
        "    int y;\n"
        "    y = 5;\n"
        "    return 0;\n"
        "}\n";
    auto m2 = SourceModel::analyze(src2);
    auto r2 = locate_site(m2, mk("unreadVariable", "MSC12-C", "t.c", 3,
                                 column_of(src2, 3, "y =")));
    REQUIRE(r2.site.has_value());
    CHECK(repair_dead_code(m2, *r2.site, on).status == RepairStatus::SkippedUnsupported);
}

TEST_CASE("already_repaired detects each repair shape") {
    std::string exp34 =
        "#include \"acr.h\"\n"
        "void f(int *p) {\n"
        "    int x;\n"
        "    x = *null_check(p, abort());\n"
        "    use(x);\n"
        "}\n";
    auto m34 = SourceModel::analyze(exp34);
    auto r34 = locate_site(m34, mk("nullPointer", "EXP34-C", "t.c", 4,
                                   column_of(exp34, 4, "p,")));
    REQUIRE(r34.site.has_value());
    CHECK(already_repaired(m34, *r34.site));

    std::string virgin =
        "void f(int *p) {\n"
        "    use(*p);\n"
        "}\n";
    auto mv = SourceModel::analyze(virgin);
    auto rv = locate_site(mv, mk("nullPointer", "EXP34-C", "t.c", 2, column_of(virgin, 2, "p)")));
    REQUIRE(rv.site.has_value());
    CHECK_FALSE(already_repaired(mv, *rv.site));

    std::string exp33 =
        "int f(void) {\n"
        "    int x = 0;\n"
        "    return x;\n"
        "}\n";
    auto m33 = SourceModel::analyze(exp33);
    auto r33 = locate_site(m33, mk("uninitvar", "EXP33-C", "t.c", 3, column_of(exp33, 3, "x;")));
    REQUIRE(r33.site.has_value());
    CHECK(already_repaired(m33, *r33.site));

    std::string msc12 =
        "int f(void) {\n"
        "    (void) foo(1);\n"
        "    return 0;\n"
        "}\n";
    auto mm = SourceModel::analyze(msc12);
    auto rm = locate_site(mm, mk("unreadVariable", "MSC12-C", "t.c", 2,
                                 column_of(msc12, 2, "foo")));
    REQUIRE(rm.site.has_value());
    CHECK(already_repaired(mm, *rm.site));
}

TEST_CASE("suppress_dependents keeps the first of an overlapping group") {
    RepairSite a, b, c, d;
    a.expr_range = {10, 15};
    b.expr_range = {12, 20};
    c.expr_range = {18, 25};
    d.expr_range = {40, 45};
    auto flags = suppress_dependents({a, b, c, d});
    REQUIRE(flags.size() == 4);
    CHECK_FALSE(flags[0]);
    CHECK(flags[1]);
    CHECK(flags[2]);  // chained overlap collapses into one group
    CHECK_FALSE(flags[3]);

    auto none = suppress_dependents({a, d});
    CHECK_FALSE(none[0]);
    CHECK_FALSE(none[1]);
}

TEST_CASE("include insertion lands after the leading block") {
    auto at = [](const std::string& src) {
        return include_insert_offset(SourceModel::analyze(src));
    };
    std::string plain = "int main(void){return 0;}\n";
    CHECK(at(plain) == 0);

    std::string with_includes = "/* hdr */\n#include <stdio.h>\n\nint main(void){return 0;}\n";
    std::size_t off = at(with_includes);
    CHECK(with_includes.substr(off - 1, 1) == "\n");
    CHECK(off == with_includes.find("#include <stdio.h>\n") +
                     std::string("#include <stdio.h>\n").size());
}

TEST_CASE("run_repair: end-to-end statuses, patch and idempotence") {
    TempTree tree;
    std::string deref =
        "#include <stdio.h>\n"
        "int fetch(int *p) {\n"
        "    int x;\n"
        "    x = *p;\n"
        "    return x;\n"
        "}\n"
        "int main(void) {\n"
        "    int v = 9;\n"
        "    printf(\"%d\\n\", fetch(&v));\n"
        "    return 0;\n"
        "}\n";
    tree.write("deref.c", deref);
    std::string uninit =
        "int pick(int flag) {\n"
        "    int u;\n"
        "    if (flag) u = 3;\n"
        "    return u;\n"
        "}\n";
    tree.write("uninit.c", uninit);

    std::vector<Alert> alerts = {
        mk("nullPointer", "EXP34-C", "deref.c", 4, column_of(deref, 4, "p;")),
        mk("clang-analyzer-core.NullDereference", "EXP34-C", "deref.c", 4,
           column_of(deref, 4, "p;"), Tool::ClangTidy),
        mk("uninitvar", "EXP33-C", "uninit.c", 4, column_of(uninit, 4, "u;")),
    };

    RepairConfig patch_cfg;
    auto patch_run = run_repair(tree.root.string(), alerts, patch_cfg);
    CHECK(patch_run.report.count("EXP34-C", RepairStatus::Repaired) == 1);
    CHECK(patch_run.report.count("EXP34-C", RepairStatus::SkippedDependent) == 1);
    CHECK(patch_run.report.count("EXP33-C", RepairStatus::Repaired) == 1);
    CHECK(patch_run.report.header_emitted);
    CHECK(patch_run.patch.find("--- a/deref.c") != std::string::npos);
    CHECK(patch_run.patch.find("+++ b/deref.c") != std::string::npos);
    CHECK(patch_run.patch.find("-    x = *p;") != std::string::npos);
    CHECK(patch_run.patch.find("+    x = *null_check(p, abort());") != std::string::npos);
    CHECK(patch_run.patch.find("+++ b/acr.h") != std::string::npos);
    // Patch mode leaves the tree untouched.
    CHECK(tree.read("deref.c") == deref);

    RepairConfig in_place;
    in_place.in_place = true;
    auto first = run_repair(tree.root.string(), alerts, in_place);
    CHECK(first.report.total_edits() > 0);
    std::string repaired = tree.read("deref.c");
    CHECK(repaired.find("#include \"acr.h\"") != std::string::npos);
    CHECK(repaired.find("x = *null_check(p, abort());") != std::string::npos);
    CHECK(tree.read("uninit.c").find("int u = 0;") != std::string::npos);
    // Only files using the macros get the include.
    CHECK(tree.read("uninit.c").find("acr.h") == std::string::npos);
    CHECK(tree.read("deref.c.orig") == deref);
    CHECK(fs::exists(tree.root / "acr.h"));

    // Second run over the repaired tree with the same alerts: no edits.
    auto second = run_repair(tree.root.string(), alerts, in_place);
    CHECK(second.report.total_edits() == 0);
    CHECK(second.report.count("EXP34-C", RepairStatus::SkippedAlreadyRepaired) == 1);
    CHECK(second.report.count("EXP33-C", RepairStatus::SkippedAlreadyRepaired) == 1);
    CHECK(tree.read("deref.c") == repaired);
}

TEST_CASE("run_repair: scan failures demote the file, not the batch") {
    TempTree tree;
    tree.write("bad.c", "int f(void) {\n/* unterminated\n");
    tree.write("good.c", "int g(int *p) { return *p; }\n");
    std::vector<Alert> alerts = {
        mk("nullPointer", "EXP34-C", "bad.c", 1, 1),
        mk("nullPointer", "EXP34-C", "good.c", 1, column_of("int g(int *p) { return *p; }\n",
                                                            1, "p; }")),
    };
    RepairConfig cfg;
    auto run = run_repair(tree.root.string(), alerts, cfg);
    REQUIRE(run.report.file_errors.size() == 1);
    CHECK(run.report.file_errors[0].find("bad.c") != std::string::npos);
    CHECK(run.report.count("EXP34-C", RepairStatus::SkippedUnsupported) == 1);
    CHECK(run.report.count("EXP34-C", RepairStatus::Repaired) == 1);
}

TEST_CASE("run_repair: check mode writes nothing") {
    TempTree tree;
    std::string src = "int f(int *p) { return *p; }\n";
    tree.write("a.c", src);
    RepairConfig cfg;
    cfg.check_only = true;
    auto run = run_repair(tree.root.string(),
                          {mk("nullPointer", "EXP34-C", "a.c", 1, column_of(src, 1, "p; }"))},
                          cfg);
    CHECK(run.report.count("EXP34-C", RepairStatus::Repaired) == 1);
    CHECK(run.patch.empty());
    CHECK(tree.read("a.c") == src);
    CHECK_FALSE(fs::exists(tree.root / "acr.h"));
}

TEST_CASE("statement counts survive EXP34/EXP33 repairs") {
    std::string src =
        "void f(int *p) {\n"
        "    int x;\n"
        "    x = *p;\n"
        "    use(x);\n"
        "}\n";
    std::string out = repair_one(src, mk("nullPointer", "EXP34-C", "t.c", 3,
                                         column_of(src, 3, "p;")));
    auto count_semis = [](const std::string& s) {
        auto toks = scan_tokens(s);
        int n = 0;
        for (const auto& t : toks)
            if (t.kind == TokenKind::Punctuator && s.substr(t.range.begin, t.range.size()) == ";")
                ++n;
        return n;
    };
    CHECK(count_semis(out) == count_semis(src));
    CHECK(std::count(out.begin(), out.end(), '\n') == std::count(src.begin(), src.end(), '\n'));
}

TEST_CASE("unified_diff renders standard hunks") {
    std::string a = "one\ntwo\nthree\nfour\nfive\n";
    std::string b = "one\ntwo\nTHREE\nfour\nfive\n";
    std::string d = unified_diff(a, b, "a/f.c", "b/f.c");
    CHECK(d.find("--- a/f.c\n") == 0);
    CHECK(d.find("+++ b/f.c\n") != std::string::npos);
    CHECK(d.find("@@ -1,5 +1,5 @@\n") != std::string::npos);
    CHECK(d.find("-three\n") != std::string::npos);
    CHECK(d.find("+THREE\n") != std::string::npos);
    CHECK(unified_diff(a, a, "a/f.c", "b/f.c").empty());

    std::string created = unified_diff("", "x\ny\n", "/dev/null", "b/new.c");
    CHECK(created.find("--- /dev/null\n") == 0);
    CHECK(created.find("@@ -0,0 +1,2 @@\n") != std::string::npos);
}
