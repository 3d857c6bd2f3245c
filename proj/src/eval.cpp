#include "acr/eval.hpp"

#include "acr/scanner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace acr {

namespace {

std::string guideline_bucket(const Alert& a) {
    return a.guideline ? *a.guideline : "(unmapped)";
}

}  // namespace

RecurrenceReport diff_alert_sets(const std::vector<Alert>& before,
                                 const std::vector<Alert>& after) {
    RecurrenceReport report;

    std::map<std::string, int> after_counts;
    for (const auto& a : after) ++after_counts[alert_key(a)];

    std::map<std::string, int> matched;  // keys consumed from `after`
    for (const auto& a : before) {
        std::string key = alert_key(a);
        auto it = after_counts.find(key);
        if (it != after_counts.end() && it->second > 0) {
            --it->second;
            ++matched[key];
            report.persisting.push_back(a);
        } else {
            report.resolved.push_back(a);
        }
    }
    std::map<std::string, int> before_counts;
    for (const auto& a : before) ++before_counts[alert_key(a)];
    std::map<std::string, int> consumed;
    for (const auto& a : after) {
        std::string key = alert_key(a);
        int avail = 0;
        if (auto it = before_counts.find(key); it != before_counts.end()) avail = it->second;
        if (consumed[key] < avail) {
            ++consumed[key];
        } else {
            report.fresh.push_back(a);
        }
    }

    std::map<std::string, RecurrenceRow> rows;
    auto row = [&](const std::string& g) -> RecurrenceRow& {
        auto& r = rows[g];
        r.guideline = g;
        return r;
    };
    for (const auto& a : before) ++row(guideline_bucket(a)).before;
    for (const auto& a : after) ++row(guideline_bucket(a)).after;
    for (const auto& a : report.resolved) ++row(guideline_bucket(a)).resolved;
    for (const auto& a : report.persisting) ++row(guideline_bucket(a)).persisting;
    for (const auto& a : report.fresh) ++row(guideline_bucket(a)).fresh;

    report.total.guideline = "ALL";
    for (auto& [g, r] : rows) {
        report.total.before += r.before;
        report.total.after += r.after;
        report.total.resolved += r.resolved;
        report.total.persisting += r.persisting;
        report.total.fresh += r.fresh;
        report.rows.push_back(r);
    }
    return report;
}

std::string RecurrenceReport::to_csv() const {
    std::ostringstream os;
    os << "guideline,before,after,resolved,persisting,new\n";
    auto emit = [&](const RecurrenceRow& r) {
        os << r.guideline << ',' << r.before << ',' << r.after << ',' << r.resolved << ','
           << r.persisting << ',' << r.fresh << '\n';
    };
    for (const auto& r : rows) emit(r);
    emit(total);
    return os.str();
}

std::string RecurrenceReport::to_text() const {
    std::ostringstream os;
    os << "guideline    before   after resolved persisting     new\n";
    auto emit = [&](const RecurrenceRow& r) {
        os << r.guideline;
        for (std::size_t i = r.guideline.size(); i < 10; ++i) os << ' ';
        char buf[64];
        std::snprintf(buf, sizeof buf, " %8d %7d %8d %10d %7d", r.before, r.after, r.resolved,
                      r.persisting, r.fresh);
        os << buf << '\n';
    };
    for (const auto& r : rows) emit(r);
    emit(total);
    return os.str();
}

FrequencyReport frequency_report(
    const std::vector<std::pair<std::string, std::vector<Alert>>>& labeled_inputs) {
    // (tool, codebase) -> guideline -> count, plus unmapped/total tallies.
    std::map<std::pair<std::string, std::string>, std::map<std::string, int>> counts;
    std::map<std::pair<std::string, std::string>, int> totals;
    std::map<std::pair<std::string, std::string>, int> unmapped;

    for (const auto& [codebase, alerts] : labeled_inputs) {
        for (const auto& a : alerts) {
            auto key = std::make_pair(std::string(tool_name(a.tool)), codebase);
            ++totals[key];
            if (a.guideline) ++counts[key][*a.guideline];
            else ++unmapped[key];
        }
    }

    FrequencyReport report;
    for (const auto& [key, per_guideline] : counts) {
        FrequencyGroup group;
        group.tool = key.first;
        group.codebase = key.second;
        group.total = totals[key];
        group.unmapped = unmapped.count(key) ? unmapped[key] : 0;
        group.distinct = static_cast<int>(per_guideline.size());

        std::vector<FrequencyEntry> entries;
        for (const auto& [g, n] : per_guideline) entries.push_back({g, n, 0});
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            if (a.count != b.count) return a.count > b.count;
            return a.guideline < b.guideline;
        });
        for (std::size_t i = 0; i < entries.size(); ++i)
            entries[i].rank = static_cast<int>(i) + 1;
        group.ranked = std::move(entries);
        report.groups.push_back(std::move(group));
    }
    // Groups that had only unmapped alerts still appear.
    for (const auto& [key, n] : totals) {
        if (counts.count(key)) continue;
        FrequencyGroup group;
        group.tool = key.first;
        group.codebase = key.second;
        group.total = n;
        group.unmapped = unmapped.count(key) ? unmapped[key] : 0;
        report.groups.push_back(std::move(group));
    }
    std::sort(report.groups.begin(), report.groups.end(), [](const auto& a, const auto& b) {
        if (a.tool != b.tool) return a.tool < b.tool;
        return a.codebase < b.codebase;
    });
    return report;
}

std::string FrequencyReport::to_csv() const {
    std::ostringstream os;
    os << "tool,codebase,guideline,count,rank\n";
    for (const auto& g : groups)
        for (const auto& e : g.ranked)
            os << g.tool << ',' << g.codebase << ',' << e.guideline << ',' << e.count << ','
               << e.rank << '\n';
    return os.str();
}

std::string FrequencyReport::to_text() const {
    std::ostringstream os;
    for (const auto& g : groups) {
        os << g.tool << " on " << g.codebase << "\n";
        os << "  rank guideline   count\n";
        for (const auto& e : g.ranked) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "  %4d %-11s %5d\n", e.rank, e.guideline.c_str(),
                          e.count);
            os << buf;
        }
        os << "  Total " << g.total << ", Guidelines " << g.distinct << ", Unmapped "
           << g.unmapped << "\n";
    }
    return os.str();
}

EffortEstimate estimate_effort(const EffortParams& p, double ksigloc) {
    EffortEstimate e;
    e.sec_per_alert = p.audit_seconds_per_alert + p.fix_fraction * p.fix_seconds_per_alert;
    e.sec_per_ksigloc = e.sec_per_alert * p.alerts_per_ksigloc;
    e.person_years = ksigloc * e.sec_per_ksigloc / p.person_year_seconds;
    return e;
}

SiglocReport sigloc_report(const std::string& root, const std::vector<std::string>& extensions) {
    namespace fs = std::filesystem;
    SiglocReport report;
    std::error_code ec;
    fs::path base(root);
    if (!fs::exists(base, ec)) {
        report.notes.push_back(root + ": not found");
        return report;
    }

    std::vector<fs::path> files;
    if (fs::is_regular_file(base, ec)) {
        files.push_back(base);
    } else {
        for (fs::recursive_directory_iterator it(base, ec), end; it != end && !ec;
             it.increment(ec)) {
            if (!it->is_regular_file()) continue;
            std::string ext = it->path().extension().string();
            if (std::find(extensions.begin(), extensions.end(), ext) != extensions.end())
                files.push_back(it->path());
        }
    }
    std::sort(files.begin(), files.end());

    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) {
            report.notes.push_back(f.string() + ": unreadable");
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string rel = fs::is_regular_file(base) && files.size() == 1
                              ? f.filename().string()
                              : f.lexically_relative(base).generic_string();
        try {
            int n = count_sigloc(buf.str());
            report.files.push_back({rel, n});
            report.total += n;
        } catch (const ScanError& e) {
            report.notes.push_back(rel + ": " + e.what());
        }
    }
    return report;
}

std::string SiglocReport::to_csv() const {
    std::ostringstream os;
    os << "file,sigloc\n";
    for (const auto& f : files) os << f.file << ',' << f.sigloc << '\n';
    os << "TOTAL," << total << '\n';
    return os.str();
}

}  // namespace acr
