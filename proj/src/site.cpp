#include "acr/site.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <climits>
#include <set>

namespace acr {

namespace {

bool is_code_kind(TokenKind k) {
    return k != TokenKind::Comment && k != TokenKind::Whitespace && k != TokenKind::DirectiveLine;
}

const std::set<std::string_view>& keywords() {
    static const std::set<std::string_view> kw = {
        "auto", "break", "case", "char", "const", "continue", "default", "do",
        "double", "else", "enum", "extern", "float", "for", "goto", "if",
        "inline", "int", "long", "register", "restrict", "return", "short",
        "signed", "sizeof", "static", "struct", "switch", "typedef", "union",
        "unsigned", "void", "volatile", "while", "_Bool", "_Complex", "_Noreturn"};
    return kw;
}

const std::set<std::string_view>& type_starters() {
    static const std::set<std::string_view> ts = {
        "void", "char", "short", "int", "long", "float", "double", "signed",
        "unsigned", "_Bool", "_Complex", "struct", "union", "enum", "const",
        "volatile", "static", "register", "auto", "extern", "inline"};
    return ts;
}

struct Nav {
    const SourceModel& m;

    std::string_view text(int i) const { return m.slice(m.tokens[static_cast<std::size_t>(i)].range); }
    const Token& tok(int i) const { return m.tokens[static_cast<std::size_t>(i)]; }
    int count() const { return static_cast<int>(m.tokens.size()); }

    int next_code(int i) const {
        for (int j = i + 1; j < count(); ++j)
            if (is_code_kind(tok(j).kind)) return j;
        return -1;
    }
    int prev_code(int i) const {
        for (int j = i - 1; j >= 0; --j)
            if (is_code_kind(tok(j).kind)) return j;
        return -1;
    }
    bool is(int i, std::string_view s) const { return i >= 0 && text(i) == s; }
    bool is_ident(int i) const { return i >= 0 && tok(i).kind == TokenKind::Identifier; }
    bool is_keyword(int i) const { return is_ident(i) && keywords().count(text(i)) != 0; }

    int match_forward(int open_idx) const {
        std::string_view open = text(open_idx);
        std::string_view close = open == "(" ? ")" : open == "[" ? "]" : "}";
        int depth = 0;
        for (int j = open_idx; j < count(); ++j) {
            if (!is_code_kind(tok(j).kind)) continue;
            if (text(j) == open) ++depth;
            else if (text(j) == close && --depth == 0) return j;
        }
        return -1;
    }
    int match_backward(int close_idx) const {
        std::string_view close = text(close_idx);
        std::string_view open = close == ")" ? "(" : close == "]" ? "[" : "{";
        int depth = 0;
        for (int j = close_idx; j >= 0; --j) {
            if (!is_code_kind(tok(j).kind)) continue;
            if (text(j) == close) ++depth;
            else if (text(j) == open && --depth == 0) return j;
        }
        return -1;
    }
};

/// Smallest statement span around the anchor, bounded by ';', '{', '}' at
/// the anchor's paren/bracket depth. Token index range; `last` is the
/// terminating ';' when that is the bound.
struct StmtTokens {
    int first = -1;
    int last = -1;
};

StmtTokens statement_tokens(const Nav& nav, int anchor) {
    StmtTokens out;
    int p = 0, b = 0;
    out.first = anchor;
    for (int j = nav.prev_code(anchor); j >= 0; j = nav.prev_code(j)) {
        std::string_view t = nav.text(j);
        if (t == ")") ++p;
        else if (t == "(") --p;
        else if (t == "]") ++b;
        else if (t == "[") --b;
        else if ((t == ";" || t == "{" || t == "}") && p <= 0 && b <= 0) break;
        out.first = j;
    }
    p = b = 0;
    out.last = anchor;
    for (int j = anchor; j >= 0; j = nav.next_code(j)) {
        std::string_view t = nav.text(j);
        if (t == "(") ++p;
        else if (t == ")") --p;
        else if (t == "[") ++b;
        else if (t == "]") --b;
        else if (t == ";" && p <= 0 && b <= 0) {
            out.last = j;
            break;
        } else if ((t == "{" || t == "}") && p <= 0 && b <= 0) {
            break;
        }
        out.last = j;
    }
    return out;
}

ByteRange stmt_byte_range(const Nav& nav, const StmtTokens& s) {
    return {nav.tok(s.first).range.begin, nav.tok(s.last).range.end};
}

std::vector<int> code_tokens_on_line(const SourceModel& m, int line) {
    std::vector<int> out;
    std::size_t begin = m.line_begin(line);
    std::size_t end = m.line_end(line);
    for (int i = 0; i < static_cast<int>(m.tokens.size()); ++i) {
        const Token& t = m.tokens[static_cast<std::size_t>(i)];
        if (t.range.begin >= end) break;
        if (t.range.end <= begin) continue;
        if (is_code_kind(t.kind)) out.push_back(i);
    }
    return out;
}

bool is_caps_macro_name(std::string_view s) {
    if (s.size() < 2) return false;
    bool has_alpha = false;
    for (char c : s) {
        if (c >= 'A' && c <= 'Z') has_alpha = true;
        else if (c != '_' && !(c >= '0' && c <= '9')) return false;
    }
    return has_alpha;
}

// --- expression extraction ---------------------------------------------------

struct ExprSpan {
    int first = -1;
    int last = -1;
    int base_ident = -1;         // leftmost primary identifier
    bool starts_with_amp = false;
    bool is_string = false;
    bool lvalue_prefix = false;  // ++/-- immediately before the expression
};

/// Operand following a unary '*': optional &/* prefixes, a primary
/// (identifier, string, or parenthesized group), then member/subscript/call
/// suffixes. Postfix ++/-- is not absorbed; it marks an lvalue use.
std::optional<ExprSpan> parse_operand(const Nav& nav, int start) {
    ExprSpan e;
    int i = start;
    while (i >= 0) {
        if (nav.is(i, "*")) {
            i = nav.next_code(i);
        } else if (nav.is(i, "&")) {
            if (e.first < 0) {
                e.starts_with_amp = true;
                e.first = i;
            }
            i = nav.next_code(i);
        } else if (nav.is(i, "++") || nav.is(i, "--")) {
            e.lvalue_prefix = true;
            i = nav.next_code(i);
        } else {
            break;
        }
    }
    if (i < 0) return std::nullopt;
    if (e.first < 0) e.first = i;

    if (nav.is_ident(i) && !nav.is_keyword(i)) {
        e.base_ident = i;
        e.last = i;
    } else if (nav.tok(i).kind == TokenKind::String) {
        e.is_string = true;
        e.last = i;
    } else if (nav.is(i, "(")) {
        int close = nav.match_forward(i);
        if (close < 0) return std::nullopt;
        for (int j = nav.next_code(i); j >= 0 && j < close; j = nav.next_code(j)) {
            if (nav.is_ident(j) && !nav.is_keyword(j)) {
                e.base_ident = j;
                break;
            }
        }
        e.last = close;
    } else {
        return std::nullopt;
    }

    int j = nav.next_code(e.last);
    while (j >= 0) {
        if (nav.is(j, ".") || nav.is(j, "->")) {
            int field = nav.next_code(j);
            if (!nav.is_ident(field)) break;
            e.last = field;
            j = nav.next_code(field);
        } else if (nav.is(j, "[") || nav.is(j, "(")) {
            int close = nav.match_forward(j);
            if (close < 0) break;
            e.last = close;
            j = nav.next_code(close);
        } else {
            break;
        }
    }
    return e;
}

/// Postfix chain ending immediately before `op_idx` (a '->' or '[' token).
std::optional<ExprSpan> parse_postfix_left(const Nav& nav, int op_idx) {
    ExprSpan e;
    int i = nav.prev_code(op_idx);
    if (i < 0) return std::nullopt;
    while (i >= 0) {
        if (nav.is_ident(i) && !nav.is_keyword(i)) {
            e.first = i;
            e.base_ident = i;
            if (e.last < 0) e.last = i;
            int prev = nav.prev_code(i);
            if (prev >= 0 && (nav.is(prev, ".") || nav.is(prev, "->"))) {
                int before = nav.prev_code(prev);
                if (before >= 0 &&
                    (nav.is_ident(before) || nav.is(before, "]") || nav.is(before, ")"))) {
                    i = before;
                    continue;
                }
            }
            break;
        }
        if (nav.is(i, "]") || nav.is(i, ")")) {
            int open = nav.match_backward(i);
            if (open < 0) return std::nullopt;
            if (e.last < 0) e.last = i;
            e.first = open;
            int prev = nav.prev_code(open);
            if (prev >= 0 && nav.is_ident(prev) && !nav.is_keyword(prev)) {
                i = prev;
                continue;
            }
            if (prev >= 0 && (nav.is(prev, ".") || nav.is(prev, "->"))) {
                int before = nav.prev_code(prev);
                if (before >= 0 &&
                    (nav.is_ident(before) || nav.is(before, "]") || nav.is(before, ")"))) {
                    i = before;
                    continue;
                }
            }
            break;
        }
        return std::nullopt;
    }
    if (e.first < 0 || e.last < 0) return std::nullopt;
    if (e.base_ident < 0) {
        for (int j = e.first; j >= 0 && j <= e.last; j = nav.next_code(j)) {
            if (nav.is_ident(j) && !nav.is_keyword(j)) {
                e.base_ident = j;
                break;
            }
        }
    }
    return e;
}

/// True when the operator at `idx` is prefix/unary: nothing value-like
/// directly before it.
bool is_unary_context(const Nav& nav, int idx) {
    int prev = nav.prev_code(idx);
    if (prev < 0) return true;
    const Token& t = nav.tok(prev);
    if (t.kind == TokenKind::Number || t.kind == TokenKind::String ||
        t.kind == TokenKind::CharLiteral)
        return false;
    if (t.kind == TokenKind::Identifier) return nav.is_keyword(prev);
    std::string_view s = nav.text(prev);
    if (s == ")" || s == "]" || s == "++" || s == "--") return false;
    return true;
}

bool is_unary_star(const Nav& nav, int star_idx) { return is_unary_context(nav, star_idx); }

struct DerefCandidate {
    ExprSpan expr;
    ByteRange range;
};

std::vector<DerefCandidate> collect_deref_candidates(const Nav& nav,
                                                     const std::vector<int>& line_tokens) {
    std::vector<DerefCandidate> out;
    auto add = [&](const std::optional<ExprSpan>& e) {
        if (!e || e->first < 0 || e->last < 0) return;
        DerefCandidate c;
        c.expr = *e;
        c.range = {nav.tok(e->first).range.begin, nav.tok(e->last).range.end};
        for (const auto& existing : out)
            if (existing.range == c.range) return;
        out.push_back(c);
    };
    for (int idx : line_tokens) {
        std::string_view t = nav.text(idx);
        if (t == "*" && is_unary_star(nav, idx)) {
            add(parse_operand(nav, nav.next_code(idx)));
        } else if (t == "->") {
            add(parse_postfix_left(nav, idx));
        } else if (t == "[") {
            int prev = nav.prev_code(idx);
            if (prev >= 0 && (nav.is(prev, "]") || nav.is(prev, ")") ||
                              (nav.is_ident(prev) && !nav.is_keyword(prev))))
                add(parse_postfix_left(nav, idx));
        }
    }
    return out;
}

// --- declaration lookup ------------------------------------------------------

struct DeclInfo {
    int name_idx = -1;
    ByteRange decl_range;  // name plus any array suffix
    ByteRange stmt_range;
    bool has_initializer = false;
    bool is_extern = false;
    bool is_register = false;
    bool is_parameter = false;
    bool is_array = false;
    std::string zero_text = "0";
};

/// Backward scope scan for the declaration of `name` visible at `anchor`.
/// The anchor itself participates: an alert may point straight at the
/// declaration line.
std::optional<DeclInfo> find_declaration(const Nav& nav, int anchor, std::string_view name) {
    int brace = 0;  // >0: inside a sibling scope that closed before the anchor
    int start = nav.is_ident(anchor) && nav.text(anchor) == name ? anchor
                                                                 : nav.prev_code(anchor);
    for (int j = start; j >= 0; j = nav.prev_code(j)) {
        std::string_view t = nav.text(j);
        if (t == "}") {
            ++brace;
            continue;
        }
        if (t == "{") {
            if (brace > 0) --brace;
            continue;
        }
        if (brace > 0) continue;
        if (!nav.is_ident(j) || nav.text(j) != name) continue;

        StmtTokens stmt = statement_tokens(nav, j);
        int first = stmt.first;
        bool type_start = false;
        if (nav.is_ident(first) && type_starters().count(nav.text(first)) != 0) {
            type_start = true;
        } else if (nav.is_ident(first) && !nav.is_keyword(first)) {
            int second = nav.next_code(first);
            if (second >= 0 && second <= stmt.last &&
                ((nav.is_ident(second) && !nav.is_keyword(second)) || nav.is(second, "*")))
                type_start = true;  // typedef-name declaration
        }
        if (!type_start) continue;

        int depth = 0;
        for (int k = first; k >= 0 && k < j; k = nav.next_code(k)) {
            std::string_view s = nav.text(k);
            if (s == "(") ++depth;
            else if (s == ")") --depth;
        }
        int after_stmt = nav.next_code(stmt.last);
        bool stmt_opens_body =
            !nav.is(stmt.last, ";") && after_stmt >= 0 && nav.is(after_stmt, "{");
        if (depth > 0) {
            if (stmt_opens_body || nav.is(stmt.last, ")")) {
                DeclInfo info;
                info.name_idx = j;
                info.is_parameter = true;
                info.decl_range = nav.tok(j).range;
                info.stmt_range = stmt_byte_range(nav, stmt);
                return info;
            }
            continue;  // inside a call or initializer, not a declarator
        }

        int next = nav.next_code(j);
        if (next < 0) continue;
        std::string_view nx = nav.text(next);
        if (nx != ";" && nx != "," && nx != "=" && nx != "[") continue;
        int prev = nav.prev_code(j);
        if (prev < 0) continue;
        bool prev_ok = nav.is(prev, "*") || nav.is(prev, ",") ||
                       (nav.is_ident(prev) && !nav.is_keyword(prev)) ||
                       (nav.is_ident(prev) && type_starters().count(nav.text(prev)) != 0);
        if (!prev_ok) continue;

        DeclInfo info;
        info.name_idx = j;
        info.stmt_range = stmt_byte_range(nav, stmt);

        int decl_end = j;
        int k = next;
        while (k >= 0 && nav.is(k, "[")) {
            int close = nav.match_forward(k);
            if (close < 0) break;
            info.is_array = true;
            decl_end = close;
            k = nav.next_code(close);
        }
        info.decl_range = {nav.tok(j).range.begin, nav.tok(decl_end).range.end};
        info.has_initializer = k >= 0 && nav.is(k, "=");

        bool pointer = false;
        int segment_start = first;
        for (int s = first; s >= 0 && s < j; s = nav.next_code(s))
            if (nav.is(s, ",")) segment_start = s;
        for (int s = segment_start; s >= 0 && s < j; s = nav.next_code(s))
            if (nav.is(s, "*")) pointer = true;

        bool is_float = false, is_double = false, is_aggregate = false;
        for (int s = first; s >= 0 && s < j; s = nav.next_code(s)) {
            std::string_view sv = nav.text(s);
            if (sv == "extern") info.is_extern = true;
            else if (sv == "register") info.is_register = true;
            else if (sv == "float") is_float = true;
            else if (sv == "double") is_double = true;
            else if (sv == "struct" || sv == "union") is_aggregate = true;
        }
        if (info.is_array) info.zero_text = "{0}";
        else if (pointer) info.zero_text = "0";
        else if (is_aggregate) info.zero_text = "{0}";
        else if (is_float) info.zero_text = "0.0f";
        else if (is_double) info.zero_text = "0.0";
        else info.zero_text = "0";
        return info;
    }
    return std::nullopt;
}

/// True when `field` is declared as a bit-field anywhere in the file:
/// a type keyword, the name, ':', an integer width, then ';' or ','.
bool looks_like_bitfield(const Nav& nav, std::string_view field) {
    for (int i = 0; i < nav.count(); ++i) {
        if (!nav.is_ident(i) || nav.text(i) != field) continue;
        int prev = nav.prev_code(i);
        if (prev < 0 || !nav.is_ident(prev) || type_starters().count(nav.text(prev)) == 0)
            continue;
        int colon = nav.next_code(i);
        if (colon < 0 || !nav.is(colon, ":")) continue;
        int width = nav.next_code(colon);
        if (width < 0 || nav.tok(width).kind != TokenKind::Number) continue;
        int after = nav.next_code(width);
        if (after >= 0 && (nav.is(after, ";") || nav.is(after, ","))) return true;
    }
    return false;
}

/// True when the expression sits inside the argument list of an ALL_CAPS
/// function-like invocation, i.e. behind an unknown macro expansion.
bool inside_caps_invocation(const Nav& nav, int expr_first, const StmtTokens& stmt) {
    int depth = 0;
    for (int j = nav.prev_code(expr_first); j >= 0 && j >= stmt.first; j = nav.prev_code(j)) {
        std::string_view t = nav.text(j);
        if (t == ")") ++depth;
        else if (t == "(") {
            if (depth > 0) {
                --depth;
            } else {
                int prev = nav.prev_code(j);
                if (prev >= 0 && nav.is_ident(prev) && is_caps_macro_name(nav.text(prev)))
                    return true;
            }
        }
    }
    return false;
}

}  // namespace

std::vector<std::string> function_names(const SourceModel& m) {
    Nav nav{m};
    std::vector<std::string> names;
    int depth = 0;
    int chunk_start = -1;
    for (int i = 0; i < nav.count(); ++i) {
        if (!is_code_kind(nav.tok(i).kind)) continue;
        std::string_view t = nav.text(i);
        if (t == "{") {
            if (depth == 0 && chunk_start >= 0) {
                for (int j = chunk_start; j >= 0 && j < i; j = nav.next_code(j)) {
                    if (nav.is(j, "(")) {
                        int prev = nav.prev_code(j);
                        if (prev >= chunk_start && nav.is_ident(prev) && !nav.is_keyword(prev))
                            names.push_back(std::string(nav.text(prev)));
                        break;
                    }
                }
            }
            ++depth;
            continue;
        }
        if (t == "}") {
            if (depth > 0) --depth;
            if (depth == 0) chunk_start = -1;
            continue;
        }
        if (depth > 0) continue;
        if (t == ";") {
            if (chunk_start >= 0) {
                int close = nav.prev_code(i);
                if (close >= 0 && nav.is(close, ")")) {
                    int open = nav.match_backward(close);
                    int name = open >= 0 ? nav.prev_code(open) : -1;
                    if (name >= chunk_start && nav.is_ident(name) && !nav.is_keyword(name))
                        names.push_back(std::string(nav.text(name)));
                }
            }
            chunk_start = -1;
            continue;
        }
        if (chunk_start < 0) chunk_start = i;
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    return names;
}

std::optional<FunctionContext> enclosing_function(const SourceModel& m, std::size_t offset) {
    Nav nav{m};
    int depth = 0;
    int chunk_start = -1, last_top_code = -1;
    int prev_chunk_start = -1, prev_chunk_last = -1;

    for (int i = 0; i < nav.count(); ++i) {
        if (!is_code_kind(nav.tok(i).kind)) continue;
        std::string_view t = nav.text(i);
        if (t == "{" && depth == 0) {
            int body_open = i;
            int body_close = nav.match_forward(i);
            if (body_close < 0) return std::nullopt;
            if (!(nav.tok(body_open).range.begin <= offset &&
                  offset < nav.tok(body_close).range.end)) {
                prev_chunk_start = chunk_start;
                prev_chunk_last = last_top_code;
                chunk_start = -1;
                last_top_code = -1;
                i = body_close;
                continue;
            }

            int sig_first = chunk_start;
            int sig_last = last_top_code;
            bool has_paren = false, has_assign = false;
            for (int j = sig_first; j >= 0 && j <= sig_last; j = nav.next_code(j)) {
                if (nav.is(j, "(")) {
                    has_paren = true;
                    j = nav.match_forward(j);
                    if (j < 0) break;
                    continue;
                }
                if (nav.is(j, "=")) has_assign = true;
            }
            // K&R parameter declarations sit between ')' and '{', leaving an
            // empty chunk before the body; the real signature is one back.
            if (sig_first < 0 && prev_chunk_start >= 0 && prev_chunk_last >= 0) {
                bool prev_paren = false, prev_assign = false;
                for (int j = prev_chunk_start; j >= 0 && j <= prev_chunk_last;
                     j = nav.next_code(j)) {
                    if (nav.is(j, "(")) {
                        prev_paren = true;
                        j = nav.match_forward(j);
                        if (j < 0) break;
                        continue;
                    }
                    if (nav.is(j, "=")) prev_assign = true;
                }
                if (prev_paren && !prev_assign) {
                    sig_first = prev_chunk_start;
                    sig_last = prev_chunk_last;
                    has_paren = true;
                }
            }
            if (sig_first < 0 || !has_paren || has_assign) return std::nullopt;

            FunctionContext ctx;
            ctx.body_range = {nav.tok(body_open).range.begin, nav.tok(body_close).range.end};

            int name_idx = -1;
            for (int j = sig_first; j >= 0 && j < body_open; j = nav.next_code(j)) {
                if (nav.is(j, "(")) {
                    int prev = nav.prev_code(j);
                    if (prev >= sig_first && nav.is_ident(prev) && !nav.is_keyword(prev))
                        name_idx = prev;
                    break;
                }
            }
            if (name_idx >= 0) ctx.name = std::string(nav.text(name_idx));

            bool saw_star = false, saw_enum = false, saw_void = false, saw_int = false;
            bool saw_other_type = false;
            static const std::set<std::string_view> int_kw = {
                "int", "long", "short", "char", "unsigned", "signed", "_Bool"};
            static const std::set<std::string_view> qualifiers = {
                "static", "inline", "extern", "const", "volatile", "_Noreturn"};
            int leading_end = name_idx >= 0 ? name_idx : body_open;
            for (int j = sig_first; j >= 0 && j < leading_end; j = nav.next_code(j)) {
                std::string_view s = nav.text(j);
                if (s == "*") saw_star = true;
                else if (s == "enum") saw_enum = true;
                else if (s == "void") saw_void = true;
                else if (int_kw.count(s)) saw_int = true;
                else if (qualifiers.count(s)) continue;
                else saw_other_type = true;
            }
            if (name_idx < 0) ctx.return_class = ReturnClass::Other;
            else if (saw_star) ctx.return_class = ReturnClass::Pointer;
            else if (saw_enum) ctx.return_class = ReturnClass::EnumLike;
            else if (saw_void) ctx.return_class = ReturnClass::Void;
            else if (saw_int && !saw_other_type) ctx.return_class = ReturnClass::Integer;
            else ctx.return_class = ReturnClass::Other;

            for (int j = nav.next_code(body_open); j >= 0 && j < body_close;
                 j = nav.next_code(j)) {
                if (!nav.is(j, "return")) continue;
                ReturnRecord rec;
                int k = nav.next_code(j);
                int n_tokens = 0;
                int last = j;
                std::vector<std::string> toks;
                while (k >= 0 && k < body_close && !nav.is(k, ";")) {
                    ++n_tokens;
                    if (n_tokens <= 2) toks.push_back(std::string(nav.text(k)));
                    last = k;
                    k = nav.next_code(k);
                }
                rec.range = {nav.tok(j).range.begin, k >= 0 && nav.is(k, ";")
                                                         ? nav.tok(k).range.end
                                                         : nav.tok(last).range.end};
                if (n_tokens == 0) rec.value.clear();
                else if (n_tokens == 1) rec.value = toks[0];
                else if (n_tokens == 2 && (toks[0] == "-" || toks[0] == "+"))
                    rec.value = toks[0] + toks[1];  // signed literal, e.g. return -1
                else rec.value = "complex";
                ctx.returns.push_back(rec);
                if (k >= 0) j = k;
            }
            if (!ctx.returns.empty()) ctx.returns.back().is_final = true;
            return ctx;
        }
        if (t == "{") { ++depth; continue; }
        if (t == "}") { if (depth > 0) --depth; continue; }
        if (depth > 0) continue;
        if (t == ";") {
            prev_chunk_start = chunk_start;
            prev_chunk_last = i > 0 ? nav.prev_code(i) : -1;
            chunk_start = -1;
            last_top_code = -1;
            continue;
        }
        if (chunk_start < 0) chunk_start = i;
        last_top_code = i;
    }
    return std::nullopt;
}

std::string ErrorStrategy::render() const {
    switch (kind) {
    case Kind::ReturnValue: return "return " + text;
    case Kind::ReturnNull: return "return NULL";
    case Kind::ReturnVoid: return "return";
    case Kind::Abort: return "abort()";
    case Kind::Custom: return text;
    }
    return "abort()";
}

ValueCategory value_category(const SourceModel& m, ByteRange expr_range) {
    if (expr_range.empty() || expr_range.end > m.text.size()) return ValueCategory::Rvalue;
    Nav nav{m};
    int first = m.token_at(expr_range.begin);
    int last = m.token_at(expr_range.end - 1);
    if (first < 0 || last < 0) return ValueCategory::Rvalue;
    if (!is_code_kind(nav.tok(first).kind)) first = nav.next_code(first);
    if (last >= 0 && !is_code_kind(nav.tok(last).kind)) last = nav.prev_code(last);
    if (first < 0 || last < first) return ValueCategory::Rvalue;

    static const std::set<std::string_view> assign_ops = {
        "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="};

    bool lvalue_use = false;
    int after = nav.next_code(last);
    int before = nav.prev_code(first);
    if (after >= 0 && (nav.is(after, "++") || nav.is(after, "--"))) lvalue_use = true;
    if (before >= 0 && (nav.is(before, "++") || nav.is(before, "--"))) lvalue_use = true;
    if (before >= 0 && nav.is(before, "&") && is_unary_context(nav, before)) lvalue_use = true;
    if (after >= 0 && nav.tok(after).kind == TokenKind::Punctuator &&
        assign_ops.count(nav.text(after)) != 0) {
        // `*expr = ...` assigns through the pointer; expr itself is only read.
        bool deref_operand = before >= 0 && nav.is(before, "*") && is_unary_star(nav, before);
        if (!deref_operand) lvalue_use = true;
    }
    if (!lvalue_use) return ValueCategory::Rvalue;

    for (int j = first; j >= 0 && j <= last; j = nav.next_code(j)) {
        if (nav.is(j, ".") || nav.is(j, "->")) {
            int field = nav.next_code(j);
            if (field >= 0 && nav.is_ident(field) && looks_like_bitfield(nav, nav.text(field)))
                return ValueCategory::NonAddressableLvalue;
        }
    }
    if (first == last && nav.is_ident(first) && !nav.is_keyword(first)) {
        auto dinfo = find_declaration(nav, first, nav.text(first));
        if (dinfo && dinfo->is_register) return ValueCategory::NonAddressableLvalue;
    }
    return ValueCategory::AddressableLvalue;
}

ErrorStrategy infer_error_strategy(const FunctionContext* f, const std::string& custom_handler) {
    if (!custom_handler.empty()) return {ErrorStrategy::Kind::Custom, custom_handler};
    if (f) {
        const ReturnRecord* final_ret = nullptr;
        for (const auto& r : f->returns)
            if (r.is_final) final_ret = &r;
        if (f->return_class == ReturnClass::Integer && final_ret && !final_ret->value.empty() &&
            final_ret->value != "complex") {
            for (const auto& r : f->returns) {
                if (r.is_final || r.value.empty() || r.value == "complex") continue;
                if (r.value != final_ret->value)
                    return {ErrorStrategy::Kind::ReturnValue, r.value};
            }
        }
        if (f->return_class == ReturnClass::Pointer && final_ret &&
            final_ret->value != "NULL" && final_ret->value != "0") {
            for (const auto& r : f->returns) {
                if (r.is_final) continue;
                if (r.value == "NULL" || r.value == "0")
                    return {ErrorStrategy::Kind::ReturnNull, {}};
            }
        }
        if (f->return_class == ReturnClass::Void) return {ErrorStrategy::Kind::ReturnVoid, {}};
        if (f->return_class == ReturnClass::EnumLike) return {ErrorStrategy::Kind::Abort, {}};
    }
    return {ErrorStrategy::Kind::Abort, {}};
}

namespace {

SiteResult decline(std::string_view reason) {
    return SiteResult{std::nullopt, std::string(reason)};
}

SiteResult locate_null_deref(const SourceModel& m, const Alert& alert, int line) {
    Nav nav{m};
    auto line_tokens = code_tokens_on_line(m, line);
    if (line_tokens.empty()) return decline(kDeclineUnresolvable);

    auto candidates = collect_deref_candidates(nav, line_tokens);

    std::optional<std::size_t> col_offset;
    if (alert.column) {
        std::size_t off = m.line_begin(line) + static_cast<std::size_t>(*alert.column - 1);
        if (off <= m.line_end(line)) col_offset = off;
    }

    if (candidates.empty()) {
        int anchor = -1;
        if (col_offset) anchor = m.token_at(*col_offset);
        if (anchor < 0 || !is_code_kind(nav.tok(anchor).kind)) anchor = line_tokens.front();
        StmtTokens stmt = statement_tokens(nav, anchor);
        if (inside_caps_invocation(nav, anchor, stmt)) return decline(kDeclineMacro);
        for (int idx : line_tokens) {
            if (nav.is_ident(idx) && is_caps_macro_name(nav.text(idx))) {
                int next = nav.next_code(idx);
                if (next >= 0 && nav.is(next, "(")) return decline(kDeclineMacro);
            }
        }
        return decline(kDeclineUnresolvable);
    }

    const DerefCandidate* chosen = nullptr;
    if (col_offset) {
        std::size_t best = SIZE_MAX, best_size = SIZE_MAX;
        for (const auto& c : candidates) {
            std::size_t dist;
            if (c.range.contains(*col_offset)) dist = 0;
            else if (*col_offset < c.range.begin) dist = c.range.begin - *col_offset;
            else dist = *col_offset - (c.range.end - 1);
            if (dist < best || (dist == best && c.range.size() < best_size)) {
                best = dist;
                best_size = c.range.size();
                chosen = &c;
            }
        }
    } else {
        std::set<std::string> texts;
        for (const auto& c : candidates) texts.insert(std::string(m.slice(c.range)));
        if (texts.size() > 1) return decline(kDeclineAmbiguous);
        chosen = &candidates.front();
    }
    if (!chosen) return decline(kDeclineUnresolvable);

    StmtTokens stmt = statement_tokens(nav, chosen->expr.first);
    if (inside_caps_invocation(nav, chosen->expr.first, stmt)) return decline(kDeclineMacro);

    RepairSite site;
    site.alert = alert;
    site.stmt_range = stmt_byte_range(nav, stmt);
    site.expr_range = chosen->range;
    if (chosen->expr.base_ident >= 0)
        site.variable = std::string(nav.text(chosen->expr.base_ident));

    if (chosen->expr.starts_with_amp || chosen->expr.is_string) {
        site.provably_non_null = true;
    } else if (chosen->expr.base_ident >= 0 && chosen->expr.first == chosen->expr.last) {
        std::string_view name = nav.text(chosen->expr.base_ident);
        auto dinfo = find_declaration(nav, chosen->expr.base_ident, name);
        if (dinfo && dinfo->is_array && !dinfo->is_parameter) {
            site.provably_non_null = true;
        } else if (!dinfo) {
            auto fns = function_names(m);
            if (std::binary_search(fns.begin(), fns.end(), std::string(name)))
                site.provably_non_null = true;
        }
    }

    site.value_category = value_category(m, chosen->range);
    return SiteResult{site, {}};
}

SiteResult locate_uninit(const SourceModel& m, const Alert& alert, int line) {
    Nav nav{m};
    auto line_tokens = code_tokens_on_line(m, line);
    if (line_tokens.empty()) return decline(kDeclineUnresolvable);

    int anchor = -1;
    if (alert.column) {
        std::size_t off = m.line_begin(line) + static_cast<std::size_t>(*alert.column - 1);
        int t = m.token_at(off);
        if (t >= 0 && nav.is_ident(t) && !nav.is_keyword(t)) anchor = t;
    }
    if (anchor < 0) {
        std::size_t col_off =
            alert.column ? m.line_begin(line) + static_cast<std::size_t>(*alert.column - 1)
                         : m.line_begin(line);
        std::size_t best = SIZE_MAX;
        for (int idx : line_tokens) {
            if (!nav.is_ident(idx) || nav.is_keyword(idx)) continue;
            const ByteRange& r = nav.tok(idx).range;
            std::size_t dist = r.contains(col_off)
                                   ? 0
                                   : (col_off < r.begin ? r.begin - col_off
                                                        : col_off - (r.end - 1));
            if (dist < best) {
                best = dist;
                anchor = idx;
            }
        }
    }
    if (anchor < 0) return decline(kDeclineUnresolvable);

    std::string name(nav.text(anchor));
    auto dinfo = find_declaration(nav, anchor, name);
    if (!dinfo) return decline(kDeclineNoDecl);

    RepairSite site;
    site.alert = alert;
    StmtTokens stmt = statement_tokens(nav, anchor);
    site.stmt_range = stmt_byte_range(nav, stmt);
    site.expr_range = nav.tok(anchor).range;
    site.variable = name;
    site.decl_range = dinfo->decl_range;
    site.decl_stmt_range = dinfo->stmt_range;
    site.zero_text = dinfo->zero_text;
    site.decl_has_initializer = dinfo->has_initializer;
    site.decl_is_extern = dinfo->is_extern;
    site.decl_is_parameter = dinfo->is_parameter;
    return SiteResult{site, {}};
}

SiteResult locate_dead_code(const SourceModel& m, const Alert& alert, int line) {
    Nav nav{m};
    auto line_tokens = code_tokens_on_line(m, line);

    bool label_checker = alert.checker_id.find("Label") != std::string::npos ||
                         alert.checker_id.find("label") != std::string::npos;

    // Unused label: identifier followed by ':' at statement start.
    for (int idx : line_tokens) {
        if (!nav.is_ident(idx) || nav.is_keyword(idx)) continue;
        int next = nav.next_code(idx);
        if (next < 0 || !nav.is(next, ":")) continue;
        int prev = nav.prev_code(idx);
        if (prev >= 0 && !nav.is(prev, ";") && !nav.is(prev, "{") && !nav.is(prev, "}"))
            continue;
        RepairSite site;
        site.alert = alert;
        site.msc12 = Msc12Kind::Label;
        site.expr_range = {nav.tok(idx).range.begin, nav.tok(next).range.end};
        StmtTokens stmt = statement_tokens(nav, idx);
        site.stmt_range = stmt_byte_range(nav, stmt);
        site.variable = std::string(nav.text(idx));
        return SiteResult{site, {}};
    }
    if (label_checker) return decline(kDeclineLabelGone);

    // Unused-value assignment: IDENT = <expr with a call> ;
    for (int idx : line_tokens) {
        if (!nav.is_ident(idx) || nav.is_keyword(idx)) continue;
        StmtTokens stmt = statement_tokens(nav, idx);
        if (stmt.first != idx) continue;
        int eq = nav.next_code(idx);
        if (eq < 0 || !nav.is(eq, "=")) continue;
        if (!nav.is(stmt.last, ";")) continue;
        int rhs_first = nav.next_code(eq);
        if (rhs_first < 0 || rhs_first > stmt.last) continue;
        bool has_call = false;
        for (int j = rhs_first; j >= 0 && j < stmt.last; j = nav.next_code(j)) {
            if (nav.is_ident(j) && !nav.is_keyword(j)) {
                int nx = nav.next_code(j);
                if (nx >= 0 && nav.is(nx, "(")) {
                    has_call = true;
                    break;
                }
            }
        }
        RepairSite site;
        site.alert = alert;
        site.stmt_range = stmt_byte_range(nav, stmt);
        site.variable = std::string(nav.text(idx));
        if (has_call) {
            site.msc12 = Msc12Kind::Assignment;
            site.expr_range = {nav.tok(rhs_first).range.begin, nav.tok(stmt.last).range.end};
            // The bytes to replace with "(void) ": variable through '='.
            site.decl_range = ByteRange{nav.tok(idx).range.begin, nav.tok(rhs_first).range.begin};
        } else {
            site.msc12 = Msc12Kind::None;
            site.expr_range = site.stmt_range;
        }
        return SiteResult{site, {}};
    }

    if (line_tokens.empty()) return decline(kDeclineUnresolvable);
    RepairSite site;
    site.alert = alert;
    StmtTokens stmt = statement_tokens(nav, line_tokens.front());
    site.stmt_range = stmt_byte_range(nav, stmt);
    site.expr_range = site.stmt_range;
    site.msc12 = Msc12Kind::None;
    return SiteResult{site, {}};
}

}  // namespace

SiteResult locate_site_at_line(const SourceModel& m, const Alert& alert, int line) {
    if (line < 1 || line > m.line_count())
        return SiteResult{std::nullopt, std::string(kDeclineUnresolvable)};
    std::string g = alert.guideline ? *alert.guideline : std::string{};
    if (g == kUninitRead) return locate_uninit(m, alert, line);
    if (g == kIneffectiveCode) return locate_dead_code(m, alert, line);
    return locate_null_deref(m, alert, line);
}

SiteResult locate_site(const SourceModel& m, const Alert& alert) {
    return locate_site_at_line(m, alert, alert.line);
}

}  // namespace acr
