#pragma once

#include <cstdint>
#include <limits>
#include <optional>

// WLANG integer semantics: 64-bit two's complement with wrap-around,
// division and remainder truncating toward zero.
namespace dibg::arith {

inline std::int64_t wrap(std::uint64_t u) { return static_cast<std::int64_t>(u); }

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  return wrap(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  return wrap(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  return wrap(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

inline std::int64_t neg(std::int64_t a) { return wrap(0 - static_cast<std::uint64_t>(a)); }

// nullopt on a zero divisor. INT64_MIN / -1 wraps to INT64_MIN.
inline std::optional<std::int64_t> div(std::int64_t a, std::int64_t b) {
  if (b == 0) return std::nullopt;
  if (b == -1) return neg(a);
  return a / b;
}

// nullopt on a zero divisor. INT64_MIN % -1 is 0.
inline std::optional<std::int64_t> mod(std::int64_t a, std::int64_t b) {
  if (b == 0) return std::nullopt;
  if (b == -1) return 0;
  return a % b;
}

}  // namespace dibg::arith
