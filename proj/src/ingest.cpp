#include "acr/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <regex>

namespace acr {

namespace {

// --- Minimal XML reader, just enough for Cppcheck's version-2 output. ------
//
// Handles the prolog, comments, CDATA, elements with attributes, and the
// predefined + numeric character references Cppcheck emits in attribute
// values. Gives byte offsets on every failure.

struct XmlAttr {
    std::string name;
    std::string value;
};

struct XmlEvent {
    enum Kind { StartElement, EndElement } kind;
    std::string name;
    std::vector<XmlAttr> attrs;
    bool self_closing = false;
};

class XmlReader {
public:
    explicit XmlReader(std::string_view text) : text_(text) {}

    // Returns false at end of input.
    bool next(XmlEvent& ev);

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }
    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r'))
            ++pos_;
    }
    bool consume(std::string_view s) {
        if (text_.substr(pos_, s.size()) == s) {
            pos_ += s.size();
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    std::string read_name();
    std::string read_attr_value();
    static std::string decode_entities(std::string_view raw, std::size_t base_offset);
};

std::string XmlReader::read_name() {
    std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                      peek() == '-' || peek() == ':' || peek() == '.'))
        ++pos_;
    if (pos_ == start) fail("expected name");
    return std::string(text_.substr(start, pos_ - start));
}

std::string XmlReader::decode_entities(std::string_view raw, std::size_t base_offset) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '&') {
            out.push_back(raw[i]);
            continue;
        }
        std::size_t semi = raw.find(';', i);
        if (semi == std::string_view::npos)
            throw ParseError(base_offset + i, "unterminated character reference");
        std::string_view ent = raw.substr(i + 1, semi - i - 1);
        if (ent == "amp") out.push_back('&');
        else if (ent == "lt") out.push_back('<');
        else if (ent == "gt") out.push_back('>');
        else if (ent == "quot") out.push_back('"');
        else if (ent == "apos") out.push_back('\'');
        else if (!ent.empty() && ent[0] == '#') {
            int code = 0;
            bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
            std::string_view digits = ent.substr(hex ? 2 : 1);
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), code,
                                           hex ? 16 : 10);
            if (ec != std::errc() || p != digits.data() + digits.size() || code <= 0 || code > 0x10FFFF)
                throw ParseError(base_offset + i, "bad numeric character reference");
            // Encode as UTF-8.
            if (code < 0x80) {
                out.push_back(static_cast<char>(code));
            } else if (code < 0x800) {
                out.push_back(static_cast<char>(0xC0 | (code >> 6)));
                out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
            } else if (code < 0x10000) {
                out.push_back(static_cast<char>(0xE0 | (code >> 12)));
                out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
            } else {
                out.push_back(static_cast<char>(0xF0 | (code >> 18)));
                out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
            }
        } else {
            throw ParseError(base_offset + i, "unknown entity '&" + std::string(ent) + ";'");
        }
        i = semi;
    }
    return out;
}

std::string XmlReader::read_attr_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected attribute value");
    char quote = peek();
    ++pos_;
    std::size_t start = pos_;
    std::size_t end = text_.find(quote, pos_);
    if (end == std::string_view::npos) {
        pos_ = start;
        fail("unterminated attribute value");
    }
    pos_ = end + 1;
    return decode_entities(text_.substr(start, end - start), start);
}

bool XmlReader::next(XmlEvent& ev) {
    while (true) {
        skip_ws();
        if (eof()) return false;
        if (peek() != '<') {
            // Text content; Cppcheck output has none we care about.
            while (!eof() && peek() != '<') ++pos_;
            continue;
        }
        if (consume("<?")) {
            std::size_t end = text_.find("?>", pos_);
            if (end == std::string_view::npos) fail("unterminated processing instruction");
            pos_ = end + 2;
            continue;
        }
        if (consume("<!--")) {
            std::size_t end = text_.find("-->", pos_);
            if (end == std::string_view::npos) fail("unterminated comment");
            pos_ = end + 3;
            continue;
        }
        if (consume("<![CDATA[")) {
            std::size_t end = text_.find("]]>", pos_);
            if (end == std::string_view::npos) fail("unterminated CDATA section");
            pos_ = end + 3;
            continue;
        }
        if (consume("<!")) {
            std::size_t end = text_.find('>', pos_);
            if (end == std::string_view::npos) fail("unterminated declaration");
            pos_ = end + 1;
            continue;
        }
        if (consume("</")) {
            ev.kind = XmlEvent::EndElement;
            ev.name = read_name();
            ev.attrs.clear();
            ev.self_closing = false;
            skip_ws();
            expect('>');
            return true;
        }
        expect('<');
        ev.kind = XmlEvent::StartElement;
        ev.name = read_name();
        ev.attrs.clear();
        ev.self_closing = false;
        while (true) {
            skip_ws();
            if (eof()) fail("unterminated element");
            if (consume("/>")) {
                ev.self_closing = true;
                return true;
            }
            if (consume(">")) return true;
            XmlAttr attr;
            attr.name = read_name();
            skip_ws();
            expect('=');
            skip_ws();
            attr.value = read_attr_value();
            ev.attrs.push_back(std::move(attr));
        }
    }
}

const std::string* attr_value(const XmlEvent& ev, std::string_view name) {
    for (const auto& a : ev.attrs)
        if (a.name == name) return &a.value;
    return nullptr;
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

IngestReport parse_cppcheck_xml(std::string_view input) {
    IngestReport report;
    XmlReader reader(input);
    XmlEvent ev;

    bool in_error = false;
    Alert current;
    bool have_location = false;

    auto flush = [&](int /*unused*/) {
        if (!in_error) return;
        if (have_location) {
            report.alerts.push_back(current);
        } else {
            report.parse_notes.emplace_back("error id=" + current.checker_id,
                                            "no <location> element");
        }
        in_error = false;
    };

    while (reader.next(ev)) {
        if (ev.kind == XmlEvent::StartElement && ev.name == "error") {
            current = Alert{};
            current.tool = Tool::Cppcheck;
            if (const auto* id = attr_value(ev, "id")) current.checker_id = *id;
            if (const auto* msg = attr_value(ev, "msg")) current.message = *msg;
            if (const auto* sev = attr_value(ev, "severity")) current.severity = *sev;
            if (const auto* cwe = attr_value(ev, "cwe")) current.cwe = parse_int(*cwe);
            have_location = false;
            in_error = true;
            if (ev.self_closing) flush(0);
        } else if (ev.kind == XmlEvent::StartElement && ev.name == "location" && in_error) {
            if (!have_location) {  // primary locus only
                if (const auto* f = attr_value(ev, "file")) current.file = *f;
                if (const auto* l = attr_value(ev, "line")) {
                    if (auto v = parse_int(*l); v && *v >= 1) current.line = *v;
                }
                if (const auto* c = attr_value(ev, "column")) {
                    if (auto v = parse_int(*c); v && *v >= 1) current.column = *v;
                }
                have_location = !current.file.empty();
            }
        } else if (ev.kind == XmlEvent::EndElement && ev.name == "error") {
            flush(0);
        }
    }
    flush(0);
    return report;
}

IngestReport parse_clang_tidy(std::string_view input) {
    static const std::regex diag_re(R"(^(.+?):(\d+):(\d+): (warning|error): (.*)$)",
                                    std::regex::optimize);
    static const std::regex check_re(R"(^(.*) \[([^\[\]]+)\]\s*$)", std::regex::optimize);

    IngestReport report;
    std::size_t pos = 0;
    while (pos <= input.size()) {
        std::size_t nl = input.find('\n', pos);
        std::string_view line_view = input.substr(pos, nl == std::string_view::npos
                                                           ? std::string_view::npos
                                                           : nl - pos);
        if (nl == std::string_view::npos && line_view.empty()) break;
        std::string line(line_view);
        if (!line.empty() && line.back() == '\r') line.pop_back();

        std::smatch m;
        if (std::regex_match(line, m, diag_re)) {
            Alert a;
            a.tool = Tool::ClangTidy;
            a.file = m[1];
            a.line = std::max(1, std::stoi(m[2]));
            a.column = std::max(1, std::stoi(m[3]));
            a.severity = m[4];
            std::string msg = m[5];
            std::smatch cm;
            if (std::regex_match(msg, cm, check_re)) {
                a.message = cm[1];
                a.checker_id = cm[2];
            } else {
                a.message = msg;
                a.checker_id = "unknown";
            }
            report.alerts.push_back(std::move(a));
        } else {
            ++report.skipped_lines;
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return report;
}

IngestReport parse_generic(std::string_view input) {
    IngestReport report;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= input.size()) {
        std::size_t nl = input.find('\n', pos);
        std::string_view line = input.substr(pos, nl == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : nl - pos);
        if (nl == std::string_view::npos && line.empty()) break;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        auto note = [&](const std::string& reason) {
            report.parse_notes.emplace_back("line " + std::to_string(line_no), reason);
            ++report.skipped_lines;
        };

        // Split on the first five '|'; the message keeps any further '|'.
        std::array<std::string_view, 6> f;
        std::size_t field = 0, start = 0;
        for (; field < 5; ++field) {
            std::size_t bar = line.find('|', start);
            if (bar == std::string_view::npos) break;
            f[field] = line.substr(start, bar - start);
            start = bar + 1;
        }
        if (field < 5) {
            note("expected 6 '|'-separated fields");
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
            continue;
        }
        f[5] = line.substr(start);

        Alert a;
        a.tool = tool_from_name(f[0]).value_or(Tool::Generic);
        a.checker_id = std::string(f[1]);
        a.file = std::string(f[2]);
        auto ln = parse_int(f[3]);
        if (!ln || *ln < 1) {
            note("bad line number '" + std::string(f[3]) + "'");
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
            continue;
        }
        a.line = *ln;
        if (!f[4].empty()) {
            auto col = parse_int(f[4]);
            if (!col || *col < 1) {
                note("bad column '" + std::string(f[4]) + "'");
                if (nl == std::string_view::npos) break;
                pos = nl + 1;
                continue;
            }
            a.column = *col;
        }
        if (a.file.empty()) {
            note("empty file path");
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
            continue;
        }
        a.message = std::string(f[5]);
        report.alerts.push_back(std::move(a));

        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return report;
}

std::string emit_generic(const std::vector<Alert>& alerts) {
    std::string out;
    for (const auto& a : alerts) {
        out += tool_name(a.tool);
        out += '|';
        out += a.checker_id;
        out += '|';
        out += a.file;
        out += '|';
        out += std::to_string(a.line);
        out += '|';
        if (a.column) out += std::to_string(*a.column);
        out += '|';
        out += a.message;
        out += '\n';
    }
    return out;
}

std::string normalize_alert_path(std::string_view path, std::string_view root) {
    std::string p(path);
    std::replace(p.begin(), p.end(), '\\', '/');
    namespace fs = std::filesystem;
    fs::path fp(p);
    if (!root.empty() && fp.is_absolute()) {
        fs::path r{std::string(root)};
        auto rel = fp.lexically_relative(r);
        if (!rel.empty() && rel.native().substr(0, 2) != "..") fp = rel;
    }
    fs::path norm = fp.lexically_normal();
    std::string s = norm.generic_string();
    if (s == "." || s.substr(0, 2) == "..") return {};
    // Keep repair-time lookups root-relative.
    while (s.substr(0, 2) == "./") s = s.substr(2);
    return s;
}

void relativize_paths(IngestReport& report, std::string_view root) {
    std::vector<Alert> kept;
    kept.reserve(report.alerts.size());
    for (auto& a : report.alerts) {
        std::string norm = normalize_alert_path(a.file, root);
        if (norm.empty()) {
            report.parse_notes.emplace_back(a.file, "path escapes the source root");
            ++report.skipped_lines;
            continue;
        }
        a.file = std::move(norm);
        kept.push_back(std::move(a));
    }
    report.alerts = std::move(kept);
}

}  // namespace acr
