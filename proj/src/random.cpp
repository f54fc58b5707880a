#include "banditlan/random.hpp"

#include <cmath>
#include <numbers>

namespace banditlan {

namespace {
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
}

double RandomStream::uniform() { return static_cast<double>(engine_() >> 11) * kTwoPow53Inv; }

double RandomStream::open_uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * kTwoPow53Inv;
}

double RandomStream::normal() {
  const double u1 = open_uniform();
  const double u2 = open_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace banditlan
