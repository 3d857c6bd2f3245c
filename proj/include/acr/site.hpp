#ifndef ACR_SITE_HPP
#define ACR_SITE_HPP

#include "acr/alerts.hpp"
#include "acr/scanner.hpp"

#include <optional>
#include <string>
#include <vector>

namespace acr {

enum class ValueCategory { Rvalue, AddressableLvalue, NonAddressableLvalue };

enum class Msc12Kind { None, Assignment, Label };

/// A resolved repair location for one alert.
struct RepairSite {
    Alert alert;
    ByteRange stmt_range;
    ByteRange expr_range;
    ValueCategory value_category = ValueCategory::Rvalue;
    std::optional<ByteRange> decl_range;       // the alerted declarator (EXP33-C)
    std::optional<ByteRange> decl_stmt_range;  // its whole declaration statement
    std::optional<std::string> variable;
    Msc12Kind msc12 = Msc12Kind::None;
    std::string zero_text;         // EXP33-C initializer, e.g. "0", "0.0f", "{0}"
    bool provably_non_null = false;  // address-of, array name, string literal, function name
    bool decl_has_initializer = false;
    bool decl_is_extern = false;
    bool decl_is_parameter = false;
};

/// Either a site or a one-line decline reason; never both.
struct SiteResult {
    std::optional<RepairSite> site;
    std::string decline_reason;
};

inline constexpr std::string_view kDeclineUnresolvable = "unresolvable site";
inline constexpr std::string_view kDeclineMacro = "macro-obscured site";
inline constexpr std::string_view kDeclineAmbiguous = "ambiguous site";
inline constexpr std::string_view kDeclineNoDecl = "no declaration";
inline constexpr std::string_view kDeclineLabelGone = "label already removed";

SiteResult locate_site(const SourceModel& m, const Alert& alert);
SiteResult locate_site_at_line(const SourceModel& m, const Alert& alert, int line);

enum class ReturnClass { Integer, Pointer, EnumLike, Void, Other };

struct ReturnRecord {
    ByteRange range;
    std::string value;  // single-token text, "" for a bare return, "complex" otherwise
    bool is_final = false;
};

struct FunctionContext {
    std::string name;
    ReturnClass return_class = ReturnClass::Other;
    ByteRange body_range;
    std::vector<ReturnRecord> returns;
};

std::optional<FunctionContext> enclosing_function(const SourceModel& m, std::size_t offset);

/// Names of functions defined or prototyped at file scope.
std::vector<std::string> function_names(const SourceModel& m);

struct ErrorStrategy {
    enum class Kind { ReturnValue, ReturnNull, ReturnVoid, Abort, Custom };
    Kind kind = Kind::Abort;
    std::string text;  // return value or verbatim custom statement

    /// Single C statement without trailing semicolon, e.g. "return -1".
    std::string render() const;
};

/// First matching rule wins: custom handler, distinct integer return,
/// early null return for pointer functions, plain return for void,
/// abort() for enums and everything else. Total and deterministic.
ErrorStrategy infer_error_strategy(const FunctionContext* f, const std::string& custom_handler);

/// Category of the expression at expr_range: an addressable lvalue when it is
/// the direct operand of ++/--/unary & or the left side of an assignment;
/// non-addressable for bit-field members and register variables used that
/// way; otherwise an rvalue.
ValueCategory value_category(const SourceModel& m, ByteRange expr_range);

}  // namespace acr

#endif
