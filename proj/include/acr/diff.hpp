#ifndef ACR_DIFF_HPP
#define ACR_DIFF_HPP

#include <string>
#include <string_view>

namespace acr {

/// Unified diff between two texts with the standard ---/+++/@@ headers.
/// Pass "/dev/null" as old_label for a created file. Deterministic; no
/// timestamps. Returns an empty string when the texts are identical.
std::string unified_diff(std::string_view old_text, std::string_view new_text,
                         std::string_view old_label, std::string_view new_label,
                         int context = 3);

}  // namespace acr

#endif
