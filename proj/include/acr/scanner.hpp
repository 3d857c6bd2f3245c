#ifndef ACR_SCANNER_HPP
#define ACR_SCANNER_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace acr {

struct ByteRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // half-open [begin, end)

    std::size_t size() const { return end - begin; }
    bool empty() const { return begin >= end; }
    bool contains(std::size_t offset) const { return offset >= begin && offset < end; }
    bool overlaps(const ByteRange& o) const { return begin < o.end && o.begin < end; }
    bool encloses(const ByteRange& o) const { return begin <= o.begin && o.end <= end; }
    friend bool operator==(const ByteRange&, const ByteRange&) = default;
};

enum class TokenKind {
    Identifier,
    Number,
    String,
    CharLiteral,
    Punctuator,
    Comment,
    Whitespace,
    DirectiveLine,
};

struct Token {
    TokenKind kind;
    ByteRange range;
    int line = 1;  // 1-based line of the first byte
};

enum class DirectiveKind { If, Ifdef, Ifndef, Elif, Else, Endif };

/// One conditional directive line. Lines of a matched #if...#endif chain
/// share a group_id; depth is the 1-based nesting level.
struct DirectiveRegion {
    DirectiveKind kind;
    ByteRange range;  // the directive line(s) including continuations
    int group_id = 0;
    int depth = 1;
    int line = 1;
};

enum class RangeClass { Independent, Embedded, Mixed };

struct ScanError : std::runtime_error {
    int line;
    ScanError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
};

/// Tokens tile the input: contiguous, non-overlapping, covering every byte.
/// Throws ScanError for unterminated comments and literals.
std::vector<Token> scan_tokens(std::string_view source);

/// Conditional directive structure. Throws ScanError on unmatched #endif /
/// #elif / #else or an unterminated group.
std::vector<DirectiveRegion> scan_directives(std::string_view source);

/// Independent: the range overlaps no directive-line bytes. Embedded: every
/// conditional group touching the range lies wholly inside it. Mixed: some
/// group straddles the range boundary.
RangeClass classify_range(std::string_view source, ByteRange range);
bool is_independent(std::string_view source, ByteRange range);

/// Lines containing at least one token that is neither comment nor whitespace.
int count_sigloc(std::string_view source);

/// Scanned view of one file, shared by the site analyzer and repair engine.
struct SourceModel {
    std::string text;
    std::vector<Token> tokens;
    std::vector<DirectiveRegion> directives;
    std::vector<std::size_t> line_offsets;  // line_offsets[i] = offset of line i+1

    static SourceModel analyze(std::string text);  // throws ScanError

    int line_count() const { return static_cast<int>(line_offsets.size()); }
    /// Byte offset of a 1-based (line, column); nullopt when out of range.
    std::size_t line_begin(int line) const;
    std::size_t line_end(int line) const;  // offset of '\n' or text.size()
    std::string_view slice(ByteRange r) const {
        return std::string_view(text).substr(r.begin, r.end - r.begin);
    }

    RangeClass classify(ByteRange range) const;
    bool independent(ByteRange range) const { return classify(range) == RangeClass::Independent; }

    /// Index into tokens of the token containing `offset`; -1 when none.
    int token_at(std::size_t offset) const;
};

RangeClass classify_range_impl(const std::vector<Token>& tokens,
                               const std::vector<DirectiveRegion>& directives, ByteRange range);

}  // namespace acr

#endif
