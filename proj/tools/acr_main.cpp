// acr - alert-driven automated code repair for C.
//
// Subcommands: ingest, repair, check (alias), recurrence, freq, sigloc, header.
// stdout carries machine artifacts (patches, dumps, CSV); stderr carries
// human-readable summaries. Exit codes: 0 success, 1 partial declines,
// 2 usage or I/O failure.

#include "acr/alerts.hpp"
#include "acr/eval.hpp"
#include "acr/ingest.hpp"
#include "acr/repair.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace acr;

struct CliConfig {
    std::string root = ".";
    std::string mapping = "builtin";
    std::string format = "generic";
    std::string error_handler;
    bool msc12 = false;
    bool in_place = false;
    bool backup = true;
    bool check = false;
    int workers = 1;
};

bool parse_bool(const std::string& v) {
    return v == "1" || v == "true" || v == "yes" || v == "on";
}

/// key = value file; '#' starts a comment. Unknown keys are an error.
bool load_config_file(const std::string& path, CliConfig& cfg, std::string& err) {
    std::ifstream in(path);
    if (!in) {
        err = "cannot open config file: " + path;
        return false;
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = line;
        if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
        auto trim = [](std::string& t) {
            t.erase(0, t.find_first_not_of(" \t\r"));
            auto last = t.find_last_not_of(" \t\r");
            t.erase(last == std::string::npos ? 0 : last + 1);
        };
        trim(s);
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            err = path + ": line " + std::to_string(line_no) + ": expected key = value";
            return false;
        }
        std::string key = s.substr(0, eq), value = s.substr(eq + 1);
        trim(key);
        trim(value);
        if (key == "root") cfg.root = value;
        else if (key == "mapping") cfg.mapping = value;
        else if (key == "format") cfg.format = value;
        else if (key == "error_handler") cfg.error_handler = value;
        else if (key == "msc12") cfg.msc12 = parse_bool(value);
        else if (key == "in_place") cfg.in_place = parse_bool(value);
        else if (key == "backup") cfg.backup = parse_bool(value);
        else if (key == "check") cfg.check = parse_bool(value);
        else if (key == "workers") cfg.workers = std::max(1, std::atoi(value.c_str()));
        else {
            err = path + ": line " + std::to_string(line_no) + ": unknown key '" + key + "'";
            return false;
        }
    }
    return true;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// "FORMAT:PATH" or plain PATH (using the default format).
struct AlertInput {
    std::string format;
    std::string path;
};

AlertInput split_input(const std::string& spec, const std::string& default_format) {
    for (const char* f : {"cppcheck-xml", "clang-tidy", "generic"}) {
        std::string prefix = std::string(f) + ":";
        if (spec.rfind(prefix, 0) == 0) return {f, spec.substr(prefix.size())};
    }
    return {default_format, spec};
}

int ingest_one(const AlertInput& input, const CheckerMapping& mapping, const std::string& root,
               IngestReport& merged) {
    auto content = read_file(input.path);
    if (!content) {
        std::cerr << "acr: cannot read " << input.path << "\n";
        return 2;
    }
    IngestReport report;
    try {
        if (input.format == "cppcheck-xml") report = parse_cppcheck_xml(*content);
        else if (input.format == "clang-tidy") report = parse_clang_tidy(*content);
        else if (input.format == "generic") report = parse_generic(*content);
        else {
            std::cerr << "acr: unknown format '" << input.format << "'\n";
            return 2;
        }
    } catch (const ParseError& e) {
        std::cerr << "acr: " << input.path << ": " << e.what() << "\n";
        return 2;
    }
    relativize_paths(report, root);
    for (auto& a : report.alerts) merged.alerts.push_back(map_alert(std::move(a), mapping));
    merged.skipped_lines += report.skipped_lines;
    for (auto& n : report.parse_notes) merged.parse_notes.push_back(std::move(n));
    return 0;
}

int cmd_ingest(const CliConfig& cfg, const std::vector<std::string>& inputs) {
    CheckerMapping mapping;
    try {
        mapping = CheckerMapping::load(cfg.mapping);
    } catch (const MappingError& e) {
        std::cerr << "acr: " << e.what() << "\n";
        return 2;
    }
    IngestReport merged;
    for (const auto& spec : inputs) {
        int rc = ingest_one(split_input(spec, cfg.format), mapping, cfg.root, merged);
        if (rc != 0) return rc;
    }
    std::cout << emit_generic(merged.alerts);
    if (merged.skipped_lines > 0)
        std::cerr << "skipped " << merged.skipped_lines << " unrecognized record(s)\n";
    for (const auto& [locus, reason] : merged.parse_notes)
        std::cerr << "note: " << locus << ": " << reason << "\n";
    return 0;
}

int load_alerts(const CliConfig& cfg, const std::vector<std::string>& inputs,
                std::vector<Alert>& out) {
    CheckerMapping mapping;
    try {
        mapping = CheckerMapping::load(cfg.mapping);
    } catch (const MappingError& e) {
        std::cerr << "acr: " << e.what() << "\n";
        return 2;
    }
    IngestReport merged;
    for (const auto& spec : inputs) {
        int rc = ingest_one(split_input(spec, cfg.format), mapping, cfg.root, merged);
        if (rc != 0) return rc;
    }
    out = std::move(merged.alerts);
    return 0;
}

int cmd_repair(const CliConfig& cfg, const std::vector<std::string>& inputs) {
    std::vector<Alert> alerts;
    if (int rc = load_alerts(cfg, inputs, alerts); rc != 0) return rc;
    if (!std::filesystem::exists(cfg.root)) {
        std::cerr << "acr: source root '" << cfg.root << "' not found\n";
        return 2;
    }

    RepairConfig rc;
    rc.error_handler = cfg.error_handler;
    rc.msc12_enabled = cfg.msc12;
    rc.in_place = cfg.in_place;
    rc.backup = cfg.backup;
    rc.check_only = cfg.check;
    rc.workers = cfg.workers;

    RunResult run = run_repair(cfg.root, alerts, rc);

    if (cfg.check) {
        for (const auto& o : run.report.outcomes) {
            std::cout << status_name(o.status) << "\t" << o.key;
            if (!o.detail.empty()) std::cout << "\t" << o.detail;
            std::cout << "\n";
        }
    } else if (!cfg.in_place) {
        std::cout << run.patch;
    }

    std::cerr << run.report.summary_table();
    int repaired = 0;
    for (const auto& o : run.report.outcomes)
        if (o.status == RepairStatus::Repaired) ++repaired;
    std::cerr << "Repaired: " << repaired << "  Edits: " << run.report.total_edits()
              << "  Files changed: " << run.report.edits_by_file.size() << "\n";
    for (const auto& err : run.report.file_errors) std::cerr << "declined: " << err << "\n";
    return run.report.file_errors.empty() ? 0 : 1;
}

int cmd_recurrence(const CliConfig& cfg, const std::string& before_path,
                   const std::string& after_path) {
    std::vector<Alert> before, after;
    if (int rc = load_alerts(cfg, {before_path}, before); rc != 0) return rc;
    if (int rc = load_alerts(cfg, {after_path}, after); rc != 0) return rc;
    auto report = diff_alert_sets(before, after);
    std::cout << report.to_csv();
    std::cerr << report.to_text();
    return 0;
}

int cmd_freq(const CliConfig& cfg, const std::vector<std::string>& inputs,
             const std::string& label) {
    std::vector<std::pair<std::string, std::vector<Alert>>> labeled;
    for (const auto& spec : inputs) {
        AlertInput input = split_input(spec, cfg.format);
        std::vector<Alert> alerts;
        if (int rc = load_alerts(cfg, {spec}, alerts); rc != 0) return rc;
        std::string codebase = label;
        if (codebase.empty()) {
            auto stem = std::filesystem::path(input.path).stem().string();
            codebase = stem.empty() ? input.path : stem;
        }
        labeled.emplace_back(codebase, std::move(alerts));
    }
    auto report = frequency_report(labeled);
    std::cout << report.to_csv();
    std::cerr << report.to_text();
    return 0;
}

int cmd_sigloc(const CliConfig& cfg, const std::string& root,
               std::vector<std::string> extensions) {
    (void)cfg;
    if (extensions.empty()) extensions = {".c", ".h"};
    auto report = sigloc_report(root, extensions);
    std::cout << report.to_csv();
    for (const auto& n : report.notes) std::cerr << "note: " << n << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alert-driven automated code repair for C"};
    app.require_subcommand(1);

    CliConfig cfg;
    std::string config_path;
    std::vector<std::string> inputs;
    std::string before_path, after_path, label, sigloc_root;
    std::vector<std::string> extensions;
    bool no_msc12 = false, no_backup = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--root", cfg.root, "source root for repairs and path relativization");
        sub->add_option("--mapping", cfg.mapping, "checker mapping TSV file or 'builtin'");
        sub->add_option("--format", cfg.format,
                        "alert input format: cppcheck-xml, clang-tidy, generic")
            ->check(CLI::IsMember({"cppcheck-xml", "clang-tidy", "generic"}));
        sub->add_option("--config", config_path, "key = value configuration file");
    };

    CLI::App* ingest = app.add_subcommand("ingest", "normalize SA tool output to the generic format");
    add_common(ingest);
    ingest->add_option("inputs", inputs, "alert files, optionally FORMAT:PATH")->required();

    CLI::App* repair = app.add_subcommand("repair", "repair alerts in a source tree");
    add_common(repair);
    repair->add_option("--alerts", inputs, "alert files, optionally FORMAT:PATH")->required();
    repair->add_option("--error-handler", cfg.error_handler,
                       "verbatim C statement for the failure branch");
    repair->add_flag("--msc12", cfg.msc12, "enable MSC12-C (ineffective code) repairs");
    repair->add_flag("--no-msc12", no_msc12, "disable MSC12-C repairs");
    repair->add_flag("--in-place", cfg.in_place, "edit files in place (default: patch to stdout)");
    repair->add_flag("--no-backup", no_backup, "do not write FILE.orig backups");
    repair->add_flag("--check", cfg.check, "dry run: print outcomes, write nothing");
    repair->add_option("--workers", cfg.workers, "parallel file workers")
        ->check(CLI::PositiveNumber);

    CLI::App* recurrence =
        app.add_subcommand("recurrence", "diff before/after alert sets by alert key");
    add_common(recurrence);
    recurrence->add_option("before", before_path, "alert dump before repair")->required();
    recurrence->add_option("after", after_path, "alert dump after repair")->required();

    CLI::App* freq = app.add_subcommand("freq", "guideline frequency ranking");
    add_common(freq);
    freq->add_option("inputs", inputs, "alert files, optionally FORMAT:PATH")->required();
    freq->add_option("--label", label, "codebase label (default: input file stem)");

    CLI::App* sigloc = app.add_subcommand("sigloc", "count significant lines of code");
    sigloc->add_option("root", sigloc_root, "directory or file to scan")->required();
    sigloc->add_option("--ext", extensions, "file extensions to include (default .c .h)");

    app.add_subcommand("header", "print the acr.h support header");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // Precedence: explicit flags > REPAIR_MSC12 environment > config file.
    CliConfig file_cfg;
    bool have_config = false;
    if (!config_path.empty()) {
        std::string err;
        if (!load_config_file(config_path, file_cfg, err)) {
            std::cerr << "acr: " << err << "\n";
            return 2;
        }
        have_config = true;
    }
    auto chosen = [&](const CLI::App* sub, const std::string& flag) {
        return sub->count(flag) > 0;
    };
    const CLI::App* active = app.get_subcommands().front();
    if (have_config) {
        if (!chosen(active, "--root") && active->get_option_no_throw("--root")) cfg.root = file_cfg.root;
        if (!chosen(active, "--mapping") && active->get_option_no_throw("--mapping"))
            cfg.mapping = file_cfg.mapping;
        if (!chosen(active, "--format") && active->get_option_no_throw("--format"))
            cfg.format = file_cfg.format;
        if (active == repair) {
            if (!chosen(active, "--error-handler")) cfg.error_handler = file_cfg.error_handler;
            if (!chosen(active, "--msc12") && !chosen(active, "--no-msc12"))
                cfg.msc12 = file_cfg.msc12;
            if (!chosen(active, "--in-place")) cfg.in_place = file_cfg.in_place;
            if (!chosen(active, "--no-backup")) cfg.backup = file_cfg.backup;
            if (!chosen(active, "--check")) cfg.check = file_cfg.check;
            if (!chosen(active, "--workers")) cfg.workers = file_cfg.workers;
        }
    }
    if (active == repair) {
        if (std::getenv("REPAIR_MSC12") != nullptr && !chosen(active, "--msc12") &&
            !chosen(active, "--no-msc12"))
            cfg.msc12 = true;
        if (no_msc12) cfg.msc12 = false;
        if (no_backup) cfg.backup = false;
    }

    if (ingest->parsed()) return cmd_ingest(cfg, inputs);
    if (repair->parsed()) return cmd_repair(cfg, inputs);
    if (recurrence->parsed()) return cmd_recurrence(cfg, before_path, after_path);
    if (freq->parsed()) return cmd_freq(cfg, inputs, label);
    if (sigloc->parsed()) return cmd_sigloc(cfg, sigloc_root, extensions);
    std::cout << acr::emit_support_header();
    return 0;
}
