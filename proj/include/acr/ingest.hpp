#ifndef ACR_INGEST_HPP
#define ACR_INGEST_HPP

#include "acr/alerts.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace acr {

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(std::size_t offset, const std::string& what)
        : std::runtime_error("offset " + std::to_string(offset) + ": " + what), offset(offset) {}
};

struct IngestReport {
    std::vector<Alert> alerts;       // input order preserved
    std::size_t skipped_lines = 0;   // records not matching any recognized shape
    std::vector<std::pair<std::string, std::string>> parse_notes;  // (locus, reason)
};

/// Cppcheck `--xml` version-2 output. One Alert per <error>, anchored at its
/// first <location>. Throws ParseError on malformed XML.
IngestReport parse_cppcheck_xml(std::string_view input);

/// clang-tidy textual diagnostics: `FILE:LINE:COL: (warning|error): MSG [CHECK]`.
/// Context and caret lines are counted as skipped.
IngestReport parse_clang_tidy(std::string_view input);

/// Pipe-separated interchange format, one record per line:
///   tool|checker|file|line|col|message
/// col may be empty; message may itself contain '|'.
IngestReport parse_generic(std::string_view input);

/// Renders alerts back to the generic format (newline-terminated records).
std::string emit_generic(const std::vector<Alert>& alerts);

/// Normalizes a path for Alert.file: forward slashes, lexically normal,
/// relativized against root when absolute and under it. Returns empty when
/// the result is empty or escapes upward.
std::string normalize_alert_path(std::string_view path, std::string_view root = {});

/// Applies normalize_alert_path to every alert; alerts whose path normalizes
/// to empty are dropped with a parse note appended to `report`.
void relativize_paths(IngestReport& report, std::string_view root);

}  // namespace acr

#endif
