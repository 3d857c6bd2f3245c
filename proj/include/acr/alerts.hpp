#ifndef ACR_ALERTS_HPP
#define ACR_ALERTS_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace acr {

enum class Tool { Cppcheck, ClangTidy, Rosecheckers, Generic };

std::string_view tool_name(Tool t);
std::optional<Tool> tool_from_name(std::string_view name);

/// One normalized static-analysis finding.
struct Alert {
    Tool tool = Tool::Generic;
    std::string checker_id;
    std::string file;   // relative path, forward slashes
    int line = 1;       // 1-based
    std::optional<int> column;  // 1-based byte column
    std::string message;
    std::optional<std::string> guideline;
    std::optional<int> cwe;
    std::optional<std::string> severity;
};

/// A CERT C guideline record. id follows the LLLNN-C grammar.
struct Guideline {
    std::string id;
    std::string title;
    int priority = 1;      // CERT priority, 1..27
    bool repairable = false;
    std::optional<int> default_cwe;
};

struct MappingError : std::runtime_error {
    explicit MappingError(const std::string& what) : std::runtime_error(what) {}
};

bool is_guideline_id(std::string_view s);

/// Immutable (tool, checker) -> guideline table. Safe to share across threads.
class CheckerMapping {
public:
    struct Entry {
        std::string guideline;
        std::optional<int> cwe;
    };

    static CheckerMapping builtin();

    /// "builtin" or a path to a tab-separated override file merged over the
    /// builtin table. Throws MappingError naming the offending line.
    static CheckerMapping load(const std::string& path_or_builtin);

    /// Total lookup: unknown keys yield nullopt, never an error. A checker id
    /// that is itself a known guideline id (Rosecheckers style) maps to that
    /// guideline.
    std::optional<Entry> lookup(Tool tool, const std::string& checker_id) const;

    const Guideline* find_guideline(const std::string& id) const;
    bool has_guideline(const std::string& id) const { return guidelines_.count(id) != 0; }

    std::size_t entry_count() const { return entries_.size(); }

private:
    std::map<std::pair<Tool, std::string>, Entry> entries_;
    std::map<std::string, Guideline> guidelines_;

    void add_entry(Tool tool, std::string checker, std::string guideline, std::optional<int> cwe);
    void register_guideline(Guideline g);
    friend CheckerMapping merge_mappings(CheckerMapping base, const CheckerMapping& overlay);
};

/// The three repair-supported guideline ids.
bool is_repair_supported(std::string_view guideline_id);

inline constexpr std::string_view kNullDeref = "EXP34-C";
inline constexpr std::string_view kUninitRead = "EXP33-C";
inline constexpr std::string_view kIneffectiveCode = "MSC12-C";

/// Copy of `a` with guideline/cwe filled from the mapping when the key
/// exists. Unmapped alerts are retained unchanged; an already-present
/// guideline is preserved when the mapping lacks the key.
Alert map_alert(Alert a, const CheckerMapping& m);

/// Canonical recurrence key: (file, line, guideline-or-checker). Column is
/// excluded so a shifted finding on a repaired line still matches.
std::string alert_key(const Alert& a);

}  // namespace acr

#endif
