#include "acr/scanner.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace acr {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_hspace(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f' || c == '\r'; }

class Scanner {
public:
    explicit Scanner(std::string_view src) : src_(src) {}

    std::vector<Token> run();

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    bool at_line_start_ = true;
    std::vector<Token> tokens_;

    bool eof() const { return pos_ >= src_.size(); }
    char cur() const { return src_[pos_]; }
    char at(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

    void advance() {
        if (src_[pos_] == '\n') ++line_;
        ++pos_;
    }

    void emit(TokenKind kind, std::size_t begin, int begin_line) {
        if (pos_ > begin) tokens_.push_back({kind, {begin, pos_}, begin_line});
    }

    void scan_whitespace();
    void scan_line_comment();
    void scan_block_comment();
    void scan_string(char quote);
    void scan_identifier();
    void scan_number();
    void scan_punctuator();
    void scan_directive_line();
};

void Scanner::scan_whitespace() {
    std::size_t begin = pos_;
    int bl = line_;
    while (!eof()) {
        char c = cur();
        if (c == '\n' || is_hspace(c)) {
            advance();
        } else if (c == '\\' && (at(pos_ + 1) == '\n' ||
                                 (at(pos_ + 1) == '\r' && at(pos_ + 2) == '\n'))) {
            // Line splice outside any token.
            advance();
            if (cur() == '\r') advance();
            advance();
        } else {
            break;
        }
    }
    emit(TokenKind::Whitespace, begin, bl);
}

void Scanner::scan_line_comment() {
    std::size_t begin = pos_;
    int bl = line_;
    advance();  // /
    advance();  // /
    while (!eof() && cur() != '\n') {
        // A spliced line continues the comment.
        if (cur() == '\\' && (at(pos_ + 1) == '\n' ||
                              (at(pos_ + 1) == '\r' && at(pos_ + 2) == '\n'))) {
            advance();
            if (cur() == '\r') advance();
            advance();
            continue;
        }
        advance();
    }
    emit(TokenKind::Comment, begin, bl);
}

void Scanner::scan_block_comment() {
    std::size_t begin = pos_;
    int bl = line_;
    advance();  // /
    advance();  // *
    while (true) {
        if (eof()) throw ScanError(bl, "unterminated block comment");
        if (cur() == '*' && at(pos_ + 1) == '/') {
            advance();
            advance();
            break;
        }
        advance();
    }
    emit(TokenKind::Comment, begin, bl);
}

void Scanner::scan_string(char quote) {
    std::size_t begin = pos_;
    int bl = line_;
    advance();  // opening quote
    while (true) {
        if (eof()) {
            throw ScanError(bl, quote == '"' ? "unterminated string literal"
                                             : "unterminated character literal");
        }
        char c = cur();
        if (c == '\n') {
            throw ScanError(bl, quote == '"' ? "unterminated string literal"
                                             : "unterminated character literal");
        }
        if (c == '\\') {
            advance();
            if (eof()) throw ScanError(bl, "unterminated escape sequence");
            if (cur() == '\r' && at(pos_ + 1) == '\n') advance();
            advance();  // escaped char or spliced newline
            continue;
        }
        advance();
        if (c == quote) break;
    }
    emit(quote == '"' ? TokenKind::String : TokenKind::CharLiteral, begin, bl);
}

void Scanner::scan_identifier() {
    std::size_t begin = pos_;
    int bl = line_;
    while (!eof() && is_ident_char(cur())) advance();
    emit(TokenKind::Identifier, begin, bl);
}

void Scanner::scan_number() {
    // pp-number: digits, letters, '.', '_', and sign after e/E/p/P.
    std::size_t begin = pos_;
    int bl = line_;
    while (!eof()) {
        char c = cur();
        if (is_ident_char(c) || c == '.') {
            advance();
        } else if ((c == '+' || c == '-') && pos_ > begin) {
            char prev = src_[pos_ - 1];
            if (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P') advance();
            else break;
        } else {
            break;
        }
    }
    emit(TokenKind::Number, begin, bl);
}

void Scanner::scan_punctuator() {
    static constexpr std::string_view three[] = {"<<=", ">>=", "..."};
    static constexpr std::string_view two[] = {"->", "++", "--", "<<", ">>", "<=", ">=",
                                               "==", "!=", "&&", "||", "+=", "-=", "*=",
                                               "/=", "%=", "&=", "^=", "|=", "##"};
    std::size_t begin = pos_;
    int bl = line_;
    std::string_view rest = src_.substr(pos_);
    for (auto t : three) {
        if (rest.substr(0, 3) == t) {
            pos_ += 3;
            emit(TokenKind::Punctuator, begin, bl);
            return;
        }
    }
    for (auto t : two) {
        if (rest.substr(0, 2) == t) {
            pos_ += 2;
            emit(TokenKind::Punctuator, begin, bl);
            return;
        }
    }
    advance();
    emit(TokenKind::Punctuator, begin, bl);
}

// The whole logical directive line is one token: through backslash
// continuations and any block comment that spans a newline inside it.
void Scanner::scan_directive_line() {
    std::size_t begin = pos_;
    int bl = line_;
    advance();  // '#'
    while (!eof()) {
        char c = cur();
        if (c == '\n') {
            advance();  // directive token includes its terminating newline
            break;
        }
        if (c == '\\') {
            advance();
            if (!eof() && cur() == '\r') advance();
            if (!eof() && cur() == '\n') advance();
            continue;
        }
        if (c == '/' && at(pos_ + 1) == '*') {
            std::size_t comment_line = static_cast<std::size_t>(line_);
            advance();
            advance();
            while (true) {
                if (eof()) throw ScanError(static_cast<int>(comment_line), "unterminated block comment");
                if (cur() == '*' && at(pos_ + 1) == '/') {
                    advance();
                    advance();
                    break;
                }
                advance();
            }
            continue;
        }
        if (c == '/' && at(pos_ + 1) == '/') {
            while (!eof() && cur() != '\n') advance();
            continue;
        }
        advance();
    }
    emit(TokenKind::DirectiveLine, begin, bl);
}

std::vector<Token> Scanner::run() {
    while (!eof()) {
        char c = cur();
        if (at_line_start_ && c == '#') {
            scan_directive_line();
            at_line_start_ = true;
            continue;
        }
        if (c == '\n' || is_hspace(c) ||
            (c == '\\' && (at(pos_ + 1) == '\n' || (at(pos_ + 1) == '\r' && at(pos_ + 2) == '\n')))) {
            std::size_t before = pos_;
            scan_whitespace();
            // '#' only opens a directive after nothing but whitespace on its line.
            bool crossed_newline = src_.find('\n', before) < pos_;
            if (crossed_newline) at_line_start_ = true;
            continue;
        }
        if (c == '/' && at(pos_ + 1) == '/') {
            scan_line_comment();
            at_line_start_ = false;
            continue;
        }
        if (c == '/' && at(pos_ + 1) == '*') {
            std::size_t before_line = static_cast<std::size_t>(line_);
            scan_block_comment();
            // A multi-line comment leaves us mid-line only in spirit; '#'
            // directly after it on a fresh line still opens a directive.
            at_line_start_ = static_cast<std::size_t>(line_) != before_line;
            continue;
        }
        if (c == '"' || c == '\'') {
            scan_string(c);
            at_line_start_ = false;
            continue;
        }
        if (is_ident_start(c)) {
            scan_identifier();
            at_line_start_ = false;
            continue;
        }
        if (is_digit(c) || (c == '.' && is_digit(at(pos_ + 1)))) {
            scan_number();
            at_line_start_ = false;
            continue;
        }
        scan_punctuator();
        at_line_start_ = false;
    }
    return std::move(tokens_);
}

std::optional<DirectiveKind> directive_kind(std::string_view directive_text) {
    // directive_text starts at '#'. Skip '#', whitespace and comments, then
    // read the directive name.
    std::size_t i = 1;
    while (i < directive_text.size()) {
        char c = directive_text[i];
        if (is_hspace(c)) {
            ++i;
        } else if (c == '/' && i + 1 < directive_text.size() && directive_text[i + 1] == '*') {
            std::size_t close = directive_text.find("*/", i + 2);
            if (close == std::string_view::npos) return std::nullopt;
            i = close + 2;
        } else {
            break;
        }
    }
    std::size_t start = i;
    while (i < directive_text.size() && is_ident_char(directive_text[i])) ++i;
    std::string_view name = directive_text.substr(start, i - start);
    if (name == "if") return DirectiveKind::If;
    if (name == "ifdef") return DirectiveKind::Ifdef;
    if (name == "ifndef") return DirectiveKind::Ifndef;
    if (name == "elif") return DirectiveKind::Elif;
    if (name == "else") return DirectiveKind::Else;
    if (name == "endif") return DirectiveKind::Endif;
    return std::nullopt;
}

}  // namespace

std::vector<Token> scan_tokens(std::string_view source) {
    return Scanner(source).run();
}

namespace {

std::vector<DirectiveRegion> directives_from_tokens(std::string_view source,
                                                    const std::vector<Token>& tokens) {
    std::vector<DirectiveRegion> out;
    struct Open {
        int group_id;
        int line;
        bool saw_else;
    };
    std::vector<Open> stack;
    int next_group = 0;

    for (const auto& tok : tokens) {
        if (tok.kind != TokenKind::DirectiveLine) continue;
        auto kind = directive_kind(source.substr(tok.range.begin, tok.range.size()));
        if (!kind) continue;  // #include, #define, ... are not conditional

        DirectiveRegion region;
        region.kind = *kind;
        region.range = tok.range;
        region.line = tok.line;

        switch (*kind) {
        case DirectiveKind::If:
        case DirectiveKind::Ifdef:
        case DirectiveKind::Ifndef:
            stack.push_back({next_group++, tok.line, false});
            region.group_id = stack.back().group_id;
            region.depth = static_cast<int>(stack.size());
            break;
        case DirectiveKind::Elif:
        case DirectiveKind::Else:
            if (stack.empty())
                throw ScanError(tok.line, "#elif/#else without matching #if");
            if (*kind == DirectiveKind::Else) {
                if (stack.back().saw_else)
                    throw ScanError(tok.line, "duplicate #else in conditional group");
                stack.back().saw_else = true;
            } else if (stack.back().saw_else) {
                throw ScanError(tok.line, "#elif after #else");
            }
            region.group_id = stack.back().group_id;
            region.depth = static_cast<int>(stack.size());
            break;
        case DirectiveKind::Endif:
            if (stack.empty()) throw ScanError(tok.line, "unmatched #endif");
            region.group_id = stack.back().group_id;
            region.depth = static_cast<int>(stack.size());
            stack.pop_back();
            break;
        }
        out.push_back(region);
    }
    if (!stack.empty())
        throw ScanError(stack.back().line, "unterminated conditional group (missing #endif)");
    return out;
}

}  // namespace

std::vector<DirectiveRegion> scan_directives(std::string_view source) {
    return directives_from_tokens(source, scan_tokens(source));
}

RangeClass classify_range_impl(const std::vector<Token>& tokens,
                               const std::vector<DirectiveRegion>& directives, ByteRange range) {
    bool touches_directive = false;
    for (const auto& tok : tokens) {
        if (tok.kind == TokenKind::DirectiveLine && tok.range.overlaps(range)) {
            touches_directive = true;
            break;
        }
    }
    if (!touches_directive) return RangeClass::Independent;

    // Group ids are dense; collect intersection/containment per group.
    int max_group = -1;
    for (const auto& d : directives) max_group = std::max(max_group, d.group_id);
    std::vector<char> intersects(static_cast<std::size_t>(max_group + 1), 0);
    std::vector<char> contained(static_cast<std::size_t>(max_group + 1), 1);
    for (const auto& d : directives) {
        if (d.range.overlaps(range)) intersects[static_cast<std::size_t>(d.group_id)] = 1;
        if (!range.encloses(d.range)) contained[static_cast<std::size_t>(d.group_id)] = 0;
    }
    for (int g = 0; g <= max_group; ++g) {
        if (intersects[static_cast<std::size_t>(g)] && !contained[static_cast<std::size_t>(g)])
            return RangeClass::Mixed;
    }
    return RangeClass::Embedded;
}

RangeClass classify_range(std::string_view source, ByteRange range) {
    auto tokens = scan_tokens(source);
    auto directives = directives_from_tokens(source, tokens);
    return classify_range_impl(tokens, directives, range);
}

bool is_independent(std::string_view source, ByteRange range) {
    return classify_range(source, range) == RangeClass::Independent;
}

int count_sigloc(std::string_view source) {
    auto tokens = scan_tokens(source);
    // Mark every line carrying at least one byte of a significant token.
    int lines = 1;
    for (char c : source)
        if (c == '\n') ++lines;
    std::vector<char> significant(static_cast<std::size_t>(lines) + 1, 0);
    int current_line = 1;
    std::size_t scan = 0;
    for (const auto& tok : tokens) {
        if (tok.kind == TokenKind::Comment || tok.kind == TokenKind::Whitespace) continue;
        // Count newlines inside the token to find its last line.
        while (scan < tok.range.begin) {
            if (source[scan] == '\n') ++current_line;
            ++scan;
        }
        int first = tok.line;
        int last = first;
        for (std::size_t i = tok.range.begin; i < tok.range.end; ++i)
            if (source[i] == '\n') ++last;
        // A directive token owns its trailing newline; that newline does not
        // put the directive on the next line.
        if (tok.range.end > tok.range.begin && source[tok.range.end - 1] == '\n') --last;
        for (int l = first; l <= last && l <= lines; ++l)
            significant[static_cast<std::size_t>(l)] = 1;
    }
    int count = 0;
    for (int l = 1; l <= lines; ++l) count += significant[static_cast<std::size_t>(l)];
    return count;
}

SourceModel SourceModel::analyze(std::string text) {
    SourceModel m;
    m.text = std::move(text);
    m.tokens = scan_tokens(m.text);
    m.directives = directives_from_tokens(m.text, m.tokens);
    m.line_offsets.push_back(0);
    for (std::size_t i = 0; i < m.text.size(); ++i)
        if (m.text[i] == '\n') m.line_offsets.push_back(i + 1);
    return m;
}

std::size_t SourceModel::line_begin(int line) const {
    if (line < 1) return 0;
    if (static_cast<std::size_t>(line) > line_offsets.size()) return text.size();
    return line_offsets[static_cast<std::size_t>(line) - 1];
}

std::size_t SourceModel::line_end(int line) const {
    std::size_t begin = line_begin(line);
    std::size_t nl = text.find('\n', begin);
    return nl == std::string::npos ? text.size() : nl;
}

RangeClass SourceModel::classify(ByteRange range) const {
    return classify_range_impl(tokens, directives, range);
}

int SourceModel::token_at(std::size_t offset) const {
    // Tokens tile the file, so binary search on begin offsets works.
    if (tokens.empty()) return -1;
    std::size_t lo = 0, hi = tokens.size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (tokens[mid].range.end <= offset) lo = mid + 1;
        else hi = mid;
    }
    if (lo < tokens.size() && tokens[lo].range.contains(offset)) return static_cast<int>(lo);
    return -1;
}

}  // namespace acr
