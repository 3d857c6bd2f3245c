#ifndef ACR_EVAL_HPP
#define ACR_EVAL_HPP

#include "acr/alerts.hpp"

#include <string>
#include <vector>

namespace acr {

struct RecurrenceRow {
    std::string guideline;  // guideline id or "(unmapped)"
    int before = 0;
    int after = 0;
    int resolved = 0;
    int persisting = 0;
    int fresh = 0;  // rendered as "new"
};

/// Multiset diff of alert sets by alert_key. |before| = resolved + persisting.
struct RecurrenceReport {
    std::vector<RecurrenceRow> rows;  // sorted by guideline
    RecurrenceRow total;              // guideline = "ALL"
    std::vector<Alert> resolved;
    std::vector<Alert> persisting;
    std::vector<Alert> fresh;

    std::string to_csv() const;
    std::string to_text() const;
};

RecurrenceReport diff_alert_sets(const std::vector<Alert>& before,
                                 const std::vector<Alert>& after);

struct FrequencyEntry {
    std::string guideline;
    int count = 0;
    int rank = 0;  // 1-based, descending count, alphabetical tie-break
};

struct FrequencyGroup {
    std::string tool;
    std::string codebase;
    std::vector<FrequencyEntry> ranked;
    int total = 0;     // all alerts in the group, mapped + unmapped
    int distinct = 0;  // distinct guidelines with at least one alert
    int unmapped = 0;
};

struct FrequencyReport {
    std::vector<FrequencyGroup> groups;  // sorted by (tool, codebase)

    std::string to_csv() const;
    std::string to_text() const;
};

/// Ranks guideline counts per (tool, codebase); the codebase label comes from
/// the input pairing.
FrequencyReport frequency_report(
    const std::vector<std::pair<std::string, std::vector<Alert>>>& labeled_inputs);

struct EffortParams {
    double audit_seconds_per_alert = 117.0;
    double fix_fraction = 0.32;
    double fix_seconds_per_alert = 117.0;
    double alerts_per_ksigloc = 364.5;
    double person_year_seconds = 31536000.0;  // 365-day calendar year
};

struct EffortEstimate {
    double sec_per_alert = 0.0;
    double sec_per_ksigloc = 0.0;
    double person_years = 0.0;
};

/// sec_per_alert = audit + fix_fraction * fix; linear in ksigloc.
EffortEstimate estimate_effort(const EffortParams& p, double ksigloc);

struct SiglocEntry {
    std::string file;  // relative to the scanned root
    int sigloc = 0;
};

struct SiglocReport {
    std::vector<SiglocEntry> files;  // sorted by path
    long total = 0;
    std::vector<std::string> notes;  // unreadable or unscannable files

    std::string to_csv() const;
};

/// Sums count_sigloc over files under root whose extension matches
/// (defaults: .c and .h).
SiglocReport sigloc_report(const std::string& root,
                           const std::vector<std::string>& extensions = {".c", ".h"});

}  // namespace acr

#endif
