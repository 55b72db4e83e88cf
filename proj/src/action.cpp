#include "reactest/action.hpp"

#include <algorithm>
#include <cctype>

namespace reactest {

bool is_reserved_name(std::string_view name) noexcept {
    return name == kSuccessName || name == "\xCF\x89"; // "ω"
}

bool is_action_name(std::string_view name) noexcept {
    if (name.empty() || is_reserved_name(name)) {
        return false;
    }
    const auto c0 = static_cast<unsigned char>(name.front());
    if (!(std::isalpha(c0) || c0 == '_')) {
        return false;
    }
    return std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isalnum(c) != 0 || c == '_';
    });
}

} // namespace reactest
