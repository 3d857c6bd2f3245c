#include "acr/alerts.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace acr {

std::string_view tool_name(Tool t) {
    switch (t) {
    case Tool::Cppcheck: return "cppcheck";
    case Tool::ClangTidy: return "clang-tidy";
    case Tool::Rosecheckers: return "rosecheckers";
    case Tool::Generic: return "generic";
    }
    return "generic";
}

std::optional<Tool> tool_from_name(std::string_view name) {
    if (name == "cppcheck") return Tool::Cppcheck;
    if (name == "clang-tidy") return Tool::ClangTidy;
    if (name == "rosecheckers") return Tool::Rosecheckers;
    if (name == "generic") return Tool::Generic;
    return std::nullopt;
}

bool is_guideline_id(std::string_view s) {
    if (s.size() != 7) return false;
    for (int i = 0; i < 3; ++i)
        if (s[i] < 'A' || s[i] > 'Z') return false;
    for (int i = 3; i < 5; ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return s[5] == '-' && s[6] == 'C';
}

bool is_repair_supported(std::string_view guideline_id) {
    return guideline_id == kNullDeref || guideline_id == kUninitRead ||
           guideline_id == kIneffectiveCode;
}

void CheckerMapping::register_guideline(Guideline g) {
    guidelines_[g.id] = std::move(g);
}

void CheckerMapping::add_entry(Tool tool, std::string checker, std::string guideline,
                               std::optional<int> cwe) {
    entries_[{tool, std::move(checker)}] = Entry{std::move(guideline), cwe};
}

const Guideline* CheckerMapping::find_guideline(const std::string& id) const {
    auto it = guidelines_.find(id);
    return it == guidelines_.end() ? nullptr : &it->second;
}

std::optional<CheckerMapping::Entry> CheckerMapping::lookup(Tool tool,
                                                            const std::string& checker_id) const {
    auto it = entries_.find({tool, checker_id});
    if (it != entries_.end()) return it->second;
    // Rosecheckers (and hand-written fixtures) name the guideline directly.
    if (is_guideline_id(checker_id)) {
        auto g = guidelines_.find(checker_id);
        if (g != guidelines_.end()) return Entry{checker_id, g->second.default_cwe};
    }
    return std::nullopt;
}

CheckerMapping CheckerMapping::builtin() {
    CheckerMapping m;

    // Repair-supported guidelines.
    m.register_guideline({"EXP34-C", "Do not dereference null pointers", 18, true, 476});
    m.register_guideline({"EXP33-C", "Do not read uninitialized memory", 12, true, 457});
    m.register_guideline({"MSC12-C", "Detect and remove code that has no effect", 2, true, 561});

    // Frequently flagged guidelines kept for frequency/recurrence reporting.
    m.register_guideline({"MSC13-C", "Detect and remove unused values", 2, false, 563});
    m.register_guideline({"DCL19-C", "Minimize the scope of variables and functions", 2, false, std::nullopt});
    m.register_guideline({"DCL01-C", "Do not reuse variable names in subscopes", 2, false, std::nullopt});
    m.register_guideline({"DCL00-C", "Const-qualify immutable objects", 1, false, std::nullopt});
    m.register_guideline({"INT31-C", "Ensure that integer conversions do not result in lost or misinterpreted data", 6, false, 197});
    m.register_guideline({"INT13-C", "Use bitwise operators only on unsigned operands", 6, false, std::nullopt});
    m.register_guideline({"INT33-C", "Ensure that division and remainder operations do not result in divide-by-zero errors", 8, false, 369});
    m.register_guideline({"EXP00-C", "Use parentheses for precedence of operation", 4, false, std::nullopt});
    m.register_guideline({"EXP12-C", "Do not ignore values returned by functions", 4, false, std::nullopt});
    m.register_guideline({"PRE03-C", "Prefer typedefs to defines for encoding non-pointer types", 2, false, std::nullopt});
    m.register_guideline({"FIO42-C", "Close files when they are no longer needed", 8, false, 404});
    m.register_guideline({"FLP30-C", "Do not use floating-point variables as loop counters", 8, false, std::nullopt});
    m.register_guideline({"MEM34-C", "Only free memory allocated dynamically", 18, false, 590});
    m.register_guideline({"STR31-C", "Guarantee that storage for strings has sufficient space", 18, false, 120});

    // Cppcheck checkers.
    m.add_entry(Tool::Cppcheck, "nullPointer", "EXP34-C", 476);
    m.add_entry(Tool::Cppcheck, "nullPointerRedundantCheck", "EXP34-C", 476);
    m.add_entry(Tool::Cppcheck, "nullPointerArithmetic", "EXP34-C", 476);
    m.add_entry(Tool::Cppcheck, "uninitvar", "EXP33-C", 457);
    m.add_entry(Tool::Cppcheck, "uninitdata", "EXP33-C", 457);
    m.add_entry(Tool::Cppcheck, "uninitStructMember", "EXP33-C", 457);
    m.add_entry(Tool::Cppcheck, "unreadVariable", "MSC12-C", 563);
    m.add_entry(Tool::Cppcheck, "redundantAssignment", "MSC12-C", 563);
    m.add_entry(Tool::Cppcheck, "unusedLabel", "MSC12-C", 561);
    m.add_entry(Tool::Cppcheck, "unusedLabelSwitch", "MSC12-C", 561);
    m.add_entry(Tool::Cppcheck, "unsignedLessThanZero", "MSC12-C", 570);
    m.add_entry(Tool::Cppcheck, "unusedVariable", "MSC13-C", 563);

    // clang-tidy / clang static analyzer checkers, both the plain and the
    // clang-analyzer- prefixed spellings.
    for (const char* prefix : {"", "clang-analyzer-"}) {
        std::string p(prefix);
        m.add_entry(Tool::ClangTidy, p + "core.NullDereference", "EXP34-C", 476);
        m.add_entry(Tool::ClangTidy, p + "core.NonNullParamChecker", "EXP34-C", 476);
        m.add_entry(Tool::ClangTidy, p + "unix.cstring.NullArg", "EXP34-C", 476);
        m.add_entry(Tool::ClangTidy, p + "core.uninitialized.Assign", "EXP33-C", 457);
        m.add_entry(Tool::ClangTidy, p + "core.uninitialized.Branch", "EXP33-C", 457);
        m.add_entry(Tool::ClangTidy, p + "core.uninitialized.UndefReturn", "EXP33-C", 457);
        m.add_entry(Tool::ClangTidy, p + "core.uninitialized.CapturedBlockVariable", "EXP33-C", 457);
        m.add_entry(Tool::ClangTidy, p + "core.UndefinedBinaryOperatorResult", "EXP33-C", 457);
        m.add_entry(Tool::ClangTidy, p + "core.CallAndMessage", "EXP33-C", 457);
    }
    m.add_entry(Tool::ClangTidy, "deadcode.DeadStores", "MSC12-C", 563);
    m.add_entry(Tool::ClangTidy, "clang-analyzer-deadcode.DeadStores", "MSC12-C", 563);

    return m;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return out;
}

}  // namespace

CheckerMapping CheckerMapping::load(const std::string& path_or_builtin) {
    CheckerMapping m = builtin();
    if (path_or_builtin == "builtin") return m;

    std::ifstream in(path_or_builtin, std::ios::binary);
    if (!in) throw MappingError("cannot open mapping file: " + path_or_builtin);

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') continue;

        auto fields = split_tabs(line);
        if (fields.size() != 3 && fields.size() != 4)
            throw MappingError(path_or_builtin + ": line " + std::to_string(line_no) +
                               ": expected tool<TAB>checker<TAB>guideline[<TAB>cwe]");
        auto tool = tool_from_name(fields[0]);
        if (!tool)
            throw MappingError(path_or_builtin + ": line " + std::to_string(line_no) +
                               ": unknown tool '" + fields[0] + "'");
        if (fields[1].empty())
            throw MappingError(path_or_builtin + ": line " + std::to_string(line_no) +
                               ": empty checker id");
        if (!is_guideline_id(fields[2]))
            throw MappingError(path_or_builtin + ": line " + std::to_string(line_no) +
                               ": guideline id '" + fields[2] + "' does not match LLLNN-C");
        std::optional<int> cwe;
        if (fields.size() == 4 && !fields[3].empty()) {
            try {
                std::size_t pos = 0;
                int v = std::stoi(fields[3], &pos);
                if (pos != fields[3].size() || v < 0) throw std::invalid_argument("cwe");
                cwe = v;
            } catch (const std::exception&) {
                throw MappingError(path_or_builtin + ": line " + std::to_string(line_no) +
                                   ": bad cwe '" + fields[3] + "'");
            }
        }
        if (!m.has_guideline(fields[2]))
            m.register_guideline({fields[2], fields[2], 1, false, cwe});
        m.add_entry(*tool, fields[1], fields[2], cwe);
    }
    return m;
}

Alert map_alert(Alert a, const CheckerMapping& m) {
    auto entry = m.lookup(a.tool, a.checker_id);
    if (entry) {
        a.guideline = entry->guideline;
        if (entry->cwe) a.cwe = entry->cwe;
    }
    return a;
}

std::string alert_key(const Alert& a) {
    const std::string& tag = a.guideline ? *a.guideline : a.checker_id;
    return a.file + ":" + std::to_string(a.line) + ":" + tag;
}

}  // namespace acr
