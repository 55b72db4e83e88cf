#pragma once

#include <string>
#include <string_view>

namespace reactest {

using Action = std::string;

/// Name of the success marker. It is never an action or a variable.
inline constexpr std::string_view kSuccessName = "omega";

bool is_reserved_name(std::string_view name) noexcept;

/// `[A-Za-z_][A-Za-z0-9_]*` and not reserved.
bool is_action_name(std::string_view name) noexcept;

} // namespace reactest
