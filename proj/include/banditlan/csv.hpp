#pragma once

#include <optional>
#include <string>

namespace banditlan {

/// 17 significant digits, printf "%.17g" semantics.
std::string format_real(double x);

/// Missing values render as the empty string.
std::string format_real(const std::optional<double>& x);

}  // namespace banditlan
