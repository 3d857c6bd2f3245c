#ifndef ACR_REPAIR_HPP
#define ACR_REPAIR_HPP

#include "acr/alerts.hpp"
#include "acr/scanner.hpp"
#include "acr/site.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace acr {

/// One byte-range replacement in one file.
struct Edit {
    std::string file;
    ByteRange range;
    std::string replacement;
    std::string reason;  // guideline id
};

enum class RepairStatus {
    Repaired,
    DismissedFalsePositive,
    SkippedAlreadyRepaired,
    SkippedDependent,
    SkippedNotIndependent,
    SkippedUnsupported,
};

std::string_view status_name(RepairStatus s);

struct RepairOutcome {
    Alert alert;
    std::string key;
    RepairStatus status = RepairStatus::SkippedUnsupported;
    std::string detail;  // reason text for skips/dismissals
};

struct RepairReport {
    std::vector<RepairOutcome> outcomes;
    std::map<std::string, std::vector<Edit>> edits_by_file;
    bool header_emitted = false;
    std::vector<std::string> file_errors;  // files declined wholesale (scan/read failure)

    int count(std::string_view guideline, RepairStatus status) const;
    int total_edits() const;
    /// Aligned guideline-by-status table plus totals.
    std::string summary_table() const;
};

struct RepairConfig {
    std::string error_handler;  // verbatim C statement for the failure branch
    bool msc12_enabled = false;
    bool in_place = false;
    bool backup = true;
    bool check_only = false;
    int workers = 1;
};

struct EditOverlapError : std::runtime_error {
    explicit EditOverlapError(const std::string& what) : std::runtime_error(what) {}
};

/// Canonical content of the runtime support header acr.h.
std::string emit_support_header();
inline constexpr std::string_view kSupportHeaderName = "acr.h";
inline constexpr std::string_view kIncludeLine = "#include \"acr.h\"";

/// Applies non-overlapping edits in descending start order. Throws
/// EditOverlapError when two edits overlap.
std::string apply_edits(std::string_view source, std::vector<Edit> edits);

/// True when the site's defect already carries this tool's repair: the
/// expression is wrapped in null_check()/null_check_lv(), the declarator has
/// an initializer, or the statement starts with a (void) cast.
bool already_repaired(const SourceModel& m, const RepairSite& site);

/// Result of attempting one repair.
struct SiteRepair {
    RepairStatus status = RepairStatus::SkippedUnsupported;
    std::string detail;
    std::optional<Edit> edit;
};

SiteRepair repair_null_deref(const SourceModel& m, const RepairSite& site,
                             const ErrorStrategy& strategy);
SiteRepair repair_uninit(const SourceModel& m, const RepairSite& site);
SiteRepair repair_dead_code(const SourceModel& m, const RepairSite& site,
                            const RepairConfig& config);

/// Among sites of one file whose edit targets overlap, keeps the first under
/// (line, column, tool, checker) order; returns a parallel suppressed flag.
std::vector<bool> suppress_dependents(const std::vector<RepairSite>& sites);

/// Byte offset where `#include "acr.h"` goes: after the last leading comment
/// or #include line.
std::size_t include_insert_offset(const SourceModel& m);

struct RunResult {
    RepairReport report;
    std::string patch;  // unified diff (patch mode only)
    std::map<std::string, std::string> new_contents;  // repaired bodies by path
    std::string support_header;  // non-empty when acr.h is (or would be) emitted
};

/// Full pipeline: locate, suppress dependents, check idempotence and
/// independence, edit, and render. Deterministic for any worker count;
/// per-file failures demote that file's alerts instead of aborting.
RunResult run_repair(const std::string& root, const std::vector<Alert>& alerts,
                     const RepairConfig& config);

}  // namespace acr

#endif
