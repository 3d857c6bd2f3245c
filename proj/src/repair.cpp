#include "acr/repair.hpp"

#include "acr/diff.hpp"
#include "acr/ingest.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace acr {

namespace fs = std::filesystem;

std::string_view status_name(RepairStatus s) {
    switch (s) {
    case RepairStatus::Repaired: return "Repaired";
    case RepairStatus::DismissedFalsePositive: return "DismissedFalsePositive";
    case RepairStatus::SkippedAlreadyRepaired: return "SkippedAlreadyRepaired";
    case RepairStatus::SkippedDependent: return "SkippedDependent";
    case RepairStatus::SkippedNotIndependent: return "SkippedNotIndependent";
    case RepairStatus::SkippedUnsupported: return "SkippedUnsupported";
    }
    return "SkippedUnsupported";
}

std::string emit_support_header() {
    return
        "#ifndef ACR_H\n"
        "#define ACR_H\n"
        "#include <stdlib.h>\n"
        "#define null_check(e, handler) (__extension__({ \\\n"
        "    __typeof__(e) acr_v_ = (e); \\\n"
        "    if (!acr_v_) { handler; abort(); } \\\n"
        "    acr_v_; }))\n"
        "#define null_check_lv(e, handler) (*(__extension__({ \\\n"
        "    __typeof__(&(e)) acr_p_ = &(e); \\\n"
        "    if (!*acr_p_) { handler; abort(); } \\\n"
        "    acr_p_; })))\n"
        "#endif\n";
}

std::string apply_edits(std::string_view source, std::vector<Edit> edits) {
    std::stable_sort(edits.begin(), edits.end(),
                     [](const Edit& a, const Edit& b) { return a.range.begin < b.range.begin; });
    for (std::size_t i = 1; i < edits.size(); ++i) {
        const Edit& prev = edits[i - 1];
        const Edit& cur = edits[i];
        if (prev.range.end > cur.range.begin || prev.range.begin == cur.range.begin)
            throw EditOverlapError("overlapping edits at byte " +
                                   std::to_string(cur.range.begin) + " in " + cur.file);
    }
    if (!edits.empty() && edits.back().range.end > source.size())
        throw EditOverlapError("edit past end of file in " + edits.back().file);

    std::string out(source);
    for (auto it = edits.rbegin(); it != edits.rend(); ++it)
        out.replace(it->range.begin, it->range.size(), it->replacement);
    return out;
}

namespace {

bool is_code_kind(TokenKind k) {
    return k != TokenKind::Comment && k != TokenKind::Whitespace && k != TokenKind::DirectiveLine;
}

int next_code(const SourceModel& m, int i) {
    for (int j = i + 1; j < static_cast<int>(m.tokens.size()); ++j)
        if (is_code_kind(m.tokens[static_cast<std::size_t>(j)].kind)) return j;
    return -1;
}

std::string_view tok_text(const SourceModel& m, int i) {
    return m.slice(m.tokens[static_cast<std::size_t>(i)].range);
}

/// First code-token index at or after `offset`.
int first_code_at(const SourceModel& m, std::size_t offset) {
    for (int j = 0; j < static_cast<int>(m.tokens.size()); ++j) {
        const Token& t = m.tokens[static_cast<std::size_t>(j)];
        if (t.range.end <= offset) continue;
        if (is_code_kind(t.kind)) return j;
    }
    return -1;
}

bool stmt_starts_with_void_cast(const SourceModel& m, const RepairSite& site) {
    int i = first_code_at(m, site.stmt_range.begin);
    if (i < 0 || tok_text(m, i) != "(") return false;
    int j = next_code(m, i);
    if (j < 0 || tok_text(m, j) != "void") return false;
    int k = next_code(m, j);
    return k >= 0 && tok_text(m, k) == ")";
}

}  // namespace

bool already_repaired(const SourceModel& m, const RepairSite& site) {
    const std::string g = site.alert.guideline ? *site.alert.guideline : std::string{};
    if (g == kUninitRead) return site.decl_has_initializer;
    if (g == kIneffectiveCode) return stmt_starts_with_void_cast(m, site);

    // EXP34-C: the expression is (or sits inside) a null_check call.
    if (site.variable &&
        (*site.variable == "null_check" || *site.variable == "null_check_lv"))
        return true;
    for (int i = 0; i < static_cast<int>(m.tokens.size()); ++i) {
        const Token& t = m.tokens[static_cast<std::size_t>(i)];
        if (t.range.end <= site.stmt_range.begin) continue;
        if (t.range.begin >= site.stmt_range.end) break;
        if (t.kind != TokenKind::Identifier) continue;
        std::string_view s = m.slice(t.range);
        if (s != "null_check" && s != "null_check_lv") continue;
        int open = next_code(m, i);
        if (open < 0 || tok_text(m, open) != "(") continue;
        int depth = 0;
        int close = -1;
        for (int j = open; j < static_cast<int>(m.tokens.size()); ++j) {
            if (!is_code_kind(m.tokens[static_cast<std::size_t>(j)].kind)) continue;
            std::string_view tj = tok_text(m, j);
            if (tj == "(") ++depth;
            else if (tj == ")" && --depth == 0) {
                close = j;
                break;
            }
        }
        if (close < 0) continue;
        ByteRange extent{t.range.begin, m.tokens[static_cast<std::size_t>(close)].range.end};
        if (extent.overlaps(site.expr_range)) return true;
    }
    return false;
}

SiteRepair repair_null_deref(const SourceModel& m, const RepairSite& site,
                             const ErrorStrategy& strategy) {
    if (site.provably_non_null)
        return {RepairStatus::DismissedFalsePositive, "expression cannot be null", std::nullopt};
    if (site.value_category == ValueCategory::NonAddressableLvalue)
        return {RepairStatus::SkippedUnsupported, "non-addressable lvalue", std::nullopt};
    if (m.classify(site.expr_range) != RangeClass::Independent)
        return {RepairStatus::SkippedNotIndependent, "expression is not Independent", std::nullopt};

    std::string expr(m.slice(site.expr_range));
    std::string handler = strategy.render();
    if (expr.find('\n') != std::string::npos)
        return {RepairStatus::SkippedUnsupported, "multi-line expression", std::nullopt};
    if (handler.find('\n') != std::string::npos)
        return {RepairStatus::SkippedUnsupported, "error handler spans multiple lines", std::nullopt};

    const char* macro =
        site.value_category == ValueCategory::AddressableLvalue ? "null_check_lv" : "null_check";
    Edit edit;
    edit.file = site.alert.file;
    edit.range = site.expr_range;
    edit.replacement = std::string(macro) + "(" + expr + ", " + handler + ")";
    edit.reason = std::string(kNullDeref);
    return {RepairStatus::Repaired, {}, edit};
}

SiteRepair repair_uninit(const SourceModel& m, const RepairSite& site) {
    if (site.decl_is_extern)
        return {RepairStatus::SkippedUnsupported, "extern declaration", std::nullopt};
    if (site.decl_is_parameter)
        return {RepairStatus::SkippedUnsupported, "parameter declaration", std::nullopt};
    if (!site.decl_range)
        return {RepairStatus::SkippedUnsupported, std::string(kDeclineNoDecl), std::nullopt};
    if (site.decl_has_initializer)
        return {RepairStatus::SkippedAlreadyRepaired, "declarator already initialized",
                std::nullopt};
    ByteRange check = site.decl_stmt_range ? *site.decl_stmt_range : *site.decl_range;
    if (m.classify(check) != RangeClass::Independent)
        return {RepairStatus::SkippedNotIndependent, "declaration is not Independent",
                std::nullopt};

    Edit edit;
    edit.file = site.alert.file;
    edit.range = {site.decl_range->end, site.decl_range->end};
    edit.replacement = " = " + (site.zero_text.empty() ? std::string("0") : site.zero_text);
    edit.reason = std::string(kUninitRead);
    return {RepairStatus::Repaired, {}, edit};
}

SiteRepair repair_dead_code(const SourceModel& m, const RepairSite& site,
                            const RepairConfig& config) {
    if (!config.msc12_enabled)
        return {RepairStatus::SkippedUnsupported, "MSC12 disabled", std::nullopt};
    if (site.msc12 == Msc12Kind::Label) {
        if (m.classify(site.expr_range) != RangeClass::Independent)
            return {RepairStatus::SkippedNotIndependent, "label is not Independent", std::nullopt};
        Edit edit;
        edit.file = site.alert.file;
        edit.range = site.expr_range;
        edit.replacement.clear();
        edit.reason = std::string(kIneffectiveCode);
        return {RepairStatus::Repaired, {}, edit};
    }
    if (site.msc12 == Msc12Kind::Assignment && site.decl_range) {
        if (m.classify(*site.decl_range) != RangeClass::Independent)
            return {RepairStatus::SkippedNotIndependent, "assignment is not Independent",
                    std::nullopt};
        Edit edit;
        edit.file = site.alert.file;
        edit.range = *site.decl_range;  // variable through '=' and trailing space
        edit.replacement = "(void) ";
        edit.reason = std::string(kIneffectiveCode);
        return {RepairStatus::Repaired, {}, edit};
    }
    return {RepairStatus::SkippedUnsupported, "unsupported MSC12-C subcategory", std::nullopt};
}

namespace {

ByteRange effective_edit_range(const RepairSite& site) {
    if (site.decl_range) return *site.decl_range;
    return site.expr_range;
}

}  // namespace

std::vector<bool> suppress_dependents(const std::vector<RepairSite>& sites) {
    std::vector<bool> suppressed(sites.size(), false);
    // Sites arrive in deterministic order; the first of an overlapping group
    // wins. Overlap is unioned transitively.
    std::vector<int> group(sites.size(), -1);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (effective_edit_range(sites[i]).overlaps(effective_edit_range(sites[j]))) {
                int g = group[j] >= 0 ? group[j] : static_cast<int>(j);
                group[i] = g;
                break;
            }
        }
    }
    for (std::size_t i = 0; i < sites.size(); ++i)
        if (group[i] >= 0) suppressed[i] = true;
    return suppressed;
}

std::size_t include_insert_offset(const SourceModel& m) {
    std::size_t offset = 0;
    for (const auto& tok : m.tokens) {
        if (tok.kind == TokenKind::Whitespace) continue;
        if (tok.kind == TokenKind::Comment) {
            std::size_t nl = m.text.find('\n', tok.range.end);
            std::size_t line_end = nl == std::string::npos ? m.text.size() : nl;
            bool tail_blank = true;
            for (std::size_t i = tok.range.end; i < line_end; ++i) {
                char c = m.text[i];
                if (c != ' ' && c != '\t' && c != '\r') {
                    tail_blank = false;
                    break;
                }
            }
            if (!tail_blank) break;
            offset = nl == std::string::npos ? m.text.size() : nl + 1;
            continue;
        }
        if (tok.kind == TokenKind::DirectiveLine) {
            std::string_view t = m.slice(tok.range);
            std::size_t i = 1;
            while (i < t.size() && (t[i] == ' ' || t[i] == '\t')) ++i;
            if (t.substr(i, 7) == "include") {
                offset = tok.range.end;
                continue;
            }
            break;
        }
        break;
    }
    return offset;
}

namespace {

struct FileWork {
    std::string path;
    std::vector<Alert> alerts;  // deterministic order
};

struct FileOutput {
    std::vector<RepairOutcome> outcomes;
    std::vector<Edit> edits;
    std::string old_content;
    std::string new_content;
    bool edited = false;
    bool needs_header = false;
    std::string error;
};

std::string alert_sort_key(const Alert& a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%09d:%09d:", a.line, a.column.value_or(0));
    return std::string(buf) + std::string(tool_name(a.tool)) + ":" + a.checker_id;
}

/// 1-based line number of the exact `#include "acr.h"` line, or 0.
int include_marker_line(const std::string& text) {
    int line = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view l(text.data() + pos,
                           (nl == std::string::npos ? text.size() : nl) - pos);
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
        if (l == kIncludeLine) return line;
        if (nl == std::string::npos) break;
        pos = nl + 1;
        ++line;
    }
    return 0;
}

RepairOutcome make_outcome(const Alert& a, RepairStatus status, std::string detail) {
    RepairOutcome out;
    out.alert = a;
    out.key = alert_key(a);
    out.status = status;
    out.detail = std::move(detail);
    return out;
}

FileOutput process_file(const std::string& root, const FileWork& work,
                        const RepairConfig& config) {
    FileOutput out;

    auto demote_all = [&](const std::string& reason) {
        out.error = work.path + ": " + reason;
        for (const auto& a : work.alerts)
            out.outcomes.push_back(
                make_outcome(a, RepairStatus::SkippedUnsupported, "file declined: " + reason));
    };

    fs::path full = fs::path(root) / work.path;
    std::ifstream in(full, std::ios::binary);
    if (!in) {
        demote_all("cannot read file");
        return out;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    out.old_content = buf.str();

    SourceModel model;
    try {
        model = SourceModel::analyze(out.old_content);
    } catch (const ScanError& e) {
        demote_all(std::string("scan error: ") + e.what());
        return out;
    }

    const int marker = include_marker_line(out.old_content);

    // Locate every alert; keep per-alert slots so outcomes stay in order.
    struct Slot {
        const Alert* alert;
        std::optional<RepairSite> site;
        RepairStatus status = RepairStatus::SkippedUnsupported;
        std::string detail;
        bool done = false;
    };
    std::vector<Slot> slots;
    slots.reserve(work.alerts.size());

    for (const auto& a : work.alerts) {
        Slot slot;
        slot.alert = &a;
        if (!a.guideline || !is_repair_supported(*a.guideline)) {
            slot.status = RepairStatus::SkippedUnsupported;
            slot.detail = a.guideline ? "unsupported guideline " + *a.guideline
                                      : "alert has no guideline mapping";
            slot.done = true;
            slots.push_back(std::move(slot));
            continue;
        }
        if (*a.guideline == kIneffectiveCode && !config.msc12_enabled) {
            slot.status = RepairStatus::SkippedUnsupported;
            slot.detail = "MSC12 disabled";
            slot.done = true;
            slots.push_back(std::move(slot));
            continue;
        }

        // Stale alert coordinates: a previous run's #include "acr.h" insertion
        // shifted every line at or below it by one.
        SiteResult result;
        if (marker > 0 && a.line >= marker) {
            result = locate_site_at_line(model, a, a.line + 1);
            if (!result.site) {
                SiteResult fallback = locate_site_at_line(model, a, a.line);
                if (fallback.site) result = std::move(fallback);
            }
        } else {
            result = locate_site(model, a);
        }

        if (result.site) {
            slot.site = std::move(result.site);
        } else if (result.decline_reason == kDeclineLabelGone) {
            slot.status = RepairStatus::SkippedAlreadyRepaired;
            slot.detail = result.decline_reason;
            slot.done = true;
        } else {
            slot.status = RepairStatus::SkippedUnsupported;
            slot.detail = result.decline_reason;
            slot.done = true;
        }
        slots.push_back(std::move(slot));
    }

    // Dependent suppression over the located sites.
    std::vector<RepairSite> sites;
    std::vector<std::size_t> site_slot;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].site) {
            sites.push_back(*slots[i].site);
            site_slot.push_back(i);
        }
    }
    std::vector<bool> suppressed = suppress_dependents(sites);
    for (std::size_t s = 0; s < sites.size(); ++s) {
        if (!suppressed[s]) continue;
        Slot& slot = slots[site_slot[s]];
        slot.status = RepairStatus::SkippedDependent;
        slot.detail = "overlaps an earlier alert's repair";
        slot.done = true;
    }

    // Generate edits.
    bool any_exp34_edit = false;
    for (auto& slot : slots) {
        if (slot.done || !slot.site) continue;
        const RepairSite& site = *slot.site;
        const std::string& g = *slot.alert->guideline;

        if (already_repaired(model, site)) {
            slot.status = RepairStatus::SkippedAlreadyRepaired;
            slot.detail = "repair already present";
            slot.done = true;
            continue;
        }

        SiteRepair r;
        if (g == kNullDeref) {
            const FunctionContext* ctx = nullptr;
            std::optional<FunctionContext> fctx =
                enclosing_function(model, site.expr_range.begin);
            if (fctx) ctx = &*fctx;
            ErrorStrategy strategy = infer_error_strategy(ctx, config.error_handler);
            r = repair_null_deref(model, site, strategy);
        } else if (g == kUninitRead) {
            r = repair_uninit(model, site);
        } else {
            r = repair_dead_code(model, site, config);
        }
        slot.status = r.status;
        slot.detail = r.detail;
        slot.done = true;
        if (r.edit) {
            if (g == kNullDeref) any_exp34_edit = true;
            out.edits.push_back(std::move(*r.edit));
        }
    }

    if (any_exp34_edit) {
        out.needs_header = true;
        if (out.old_content.find(kIncludeLine) == std::string::npos) {
            Edit inc;
            inc.file = work.path;
            std::size_t at = include_insert_offset(model);
            inc.range = {at, at};
            inc.replacement = std::string(kIncludeLine) + "\n";
            // An unterminated final line must not swallow the directive.
            if (at > 0 && out.old_content[at - 1] != '\n')
                inc.replacement = "\n" + inc.replacement;
            inc.reason = std::string(kNullDeref);
            out.edits.push_back(std::move(inc));
        }
    }

    for (const auto& slot : slots)
        out.outcomes.push_back(make_outcome(*slot.alert, slot.status, slot.detail));

    if (!out.edits.empty()) {
        out.new_content = apply_edits(out.old_content, out.edits);
        out.edited = true;
    }
    return out;
}

}  // namespace

int RepairReport::count(std::string_view guideline, RepairStatus status) const {
    int n = 0;
    for (const auto& o : outcomes) {
        std::string_view g = o.alert.guideline ? *o.alert.guideline : "(unmapped)";
        if (g == guideline && o.status == status) ++n;
    }
    return n;
}

int RepairReport::total_edits() const {
    int n = 0;
    for (const auto& [file, edits] : edits_by_file) n += static_cast<int>(edits.size());
    return n;
}

std::string RepairReport::summary_table() const {
    static constexpr RepairStatus cols[] = {
        RepairStatus::Repaired,        RepairStatus::DismissedFalsePositive,
        RepairStatus::SkippedAlreadyRepaired, RepairStatus::SkippedDependent,
        RepairStatus::SkippedNotIndependent,  RepairStatus::SkippedUnsupported,
    };
    std::set<std::string> guidelines;
    for (const auto& o : outcomes)
        guidelines.insert(o.alert.guideline ? *o.alert.guideline : "(unmapped)");

    std::ostringstream os;
    os << "guideline   ";
    for (auto c : cols) os << " " << status_name(c);
    os << " Total\n";
    std::array<int, 6> totals{};
    for (const auto& g : guidelines) {
        os << g;
        for (std::size_t i = g.size(); i < 12; ++i) os << ' ';
        int row_total = 0;
        for (std::size_t ci = 0; ci < 6; ++ci) {
            int n = count(g, cols[ci]);
            row_total += n;
            totals[ci] += n;
            std::string head(status_name(cols[ci]));
            os << " ";
            std::string cell = std::to_string(n);
            for (std::size_t s = cell.size(); s < head.size(); ++s) os << ' ';
            os << cell;
        }
        os << " " << row_total << "\n";
    }
    os << "TOTAL       ";
    int grand = 0;
    for (std::size_t ci = 0; ci < 6; ++ci) {
        std::string head(status_name(cols[ci]));
        std::string cell = std::to_string(totals[ci]);
        os << " ";
        for (std::size_t s = cell.size(); s < head.size(); ++s) os << ' ';
        os << cell;
        grand += totals[ci];
    }
    os << " " << grand << "\n";
    return os.str();
}

RunResult run_repair(const std::string& root, const std::vector<Alert>& alerts,
                     const RepairConfig& config) {
    RunResult result;

    // Group alerts by normalized path.
    std::map<std::string, std::vector<Alert>> by_file;
    std::vector<RepairOutcome> bad_path_outcomes;
    for (const auto& a : alerts) {
        std::string norm = normalize_alert_path(a.file);
        if (norm.empty()) {
            bad_path_outcomes.push_back(
                make_outcome(a, RepairStatus::SkippedUnsupported, "invalid or escaping path"));
            continue;
        }
        Alert copy = a;
        copy.file = norm;
        by_file[norm].push_back(std::move(copy));
    }

    std::vector<FileWork> works;
    works.reserve(by_file.size());
    for (auto& [path, list] : by_file) {
        std::stable_sort(list.begin(), list.end(), [](const Alert& x, const Alert& y) {
            return alert_sort_key(x) < alert_sort_key(y);
        });
        works.push_back({path, std::move(list)});
    }

    std::vector<FileOutput> outputs(works.size());
    int workers = std::max(1, config.workers);
    if (workers == 1 || works.size() <= 1) {
        for (std::size_t i = 0; i < works.size(); ++i)
            outputs[i] = process_file(root, works[i], config);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        int n = std::min<std::size_t>(static_cast<std::size_t>(workers), works.size());
        for (int t = 0; t < n; ++t) {
            pool.emplace_back([&] {
                while (true) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= works.size()) break;
                    outputs[i] = process_file(root, works[i], config);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Deterministic merge.
    result.report.outcomes = std::move(bad_path_outcomes);
    bool header_needed = false;
    for (std::size_t i = 0; i < works.size(); ++i) {
        FileOutput& fo = outputs[i];
        for (auto& o : fo.outcomes) result.report.outcomes.push_back(std::move(o));
        if (!fo.error.empty()) result.report.file_errors.push_back(fo.error);
        if (fo.edited) {
            result.report.edits_by_file[works[i].path] = fo.edits;
            result.new_contents[works[i].path] = fo.new_content;
        }
        if (fo.needs_header) header_needed = true;
    }
    result.report.header_emitted = header_needed;
    if (header_needed) result.support_header = emit_support_header();

    if (config.check_only) return result;

    if (config.in_place) {
        for (std::size_t i = 0; i < works.size(); ++i) {
            if (!outputs[i].edited) continue;
            fs::path full = fs::path(root) / works[i].path;
            if (config.backup) {
                fs::path bak = full;
                bak += ".orig";
                if (!fs::exists(bak)) {
                    std::ofstream b(bak, std::ios::binary);
                    b << outputs[i].old_content;
                }
            }
            std::ofstream f(full, std::ios::binary | std::ios::trunc);
            f << outputs[i].new_content;
        }
        if (header_needed) {
            fs::path hdr = fs::path(root) / std::string(kSupportHeaderName);
            std::string want = emit_support_header();
            bool write = true;
            if (fs::exists(hdr)) {
                std::ifstream h(hdr, std::ios::binary);
                std::ostringstream hb;
                hb << h.rdbuf();
                write = hb.str() != want;
            }
            if (write) {
                std::ofstream h(hdr, std::ios::binary | std::ios::trunc);
                h << want;
            }
        }
    } else {
        // Patch mode: one unified diff per file, sorted by path; a created
        // acr.h appears as a new-file hunk.
        std::string patch;
        bool header_hunk = header_needed;
        if (header_needed) {
            fs::path hdr = fs::path(root) / std::string(kSupportHeaderName);
            if (fs::exists(hdr)) header_hunk = false;
        }
        std::vector<std::size_t> order(works.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        bool header_done = false;
        for (std::size_t i : order) {
            if (!outputs[i].edited) continue;
            if (header_hunk && !header_done && works[i].path > kSupportHeaderName) {
                patch += unified_diff("", emit_support_header(), "/dev/null",
                                      std::string("b/") + std::string(kSupportHeaderName));
                header_done = true;
            }
            patch += unified_diff(outputs[i].old_content, outputs[i].new_content,
                                  "a/" + works[i].path, "b/" + works[i].path);
        }
        if (header_hunk && !header_done)
            patch += unified_diff("", emit_support_header(), "/dev/null",
                                  std::string("b/") + std::string(kSupportHeaderName));
        result.patch = std::move(patch);
    }
    return result;
}

}  // namespace acr
