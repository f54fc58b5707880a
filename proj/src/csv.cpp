#include "banditlan/csv.hpp"

#include <array>
#include <charconv>

namespace banditlan {

std::string format_real(double x) {
  std::array<char, 40> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string format_real(const std::optional<double>& x) { return x ? format_real(*x) : std::string(); }

}  // namespace banditlan
