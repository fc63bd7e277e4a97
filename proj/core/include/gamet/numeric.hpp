#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gamet {

// Global numeric policy. Two knobs cover the whole artifact:
//  - kMassTol / kPivotTol guard exact-by-construction quantities
//    (probability masses after rational parsing, simplex pivoting),
//  - kFeasTol is the tolerance at which LP results are accepted.
inline constexpr double kMassTol = 1e-9;
inline constexpr double kPivotTol = 1e-9;
inline constexpr double kFeasTol = 1e-7;

/// Exact rational with 64-bit numerator/denominator, always normalized
/// with positive denominator. Used for validating probabilities given
/// as "p/q" or short decimal strings before they are stored as doubles.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational of(std::int64_t n, std::int64_t d);
  Rational plus(const Rational& o) const;
  bool is_one() const { return num == den; }
  bool is_zero() const { return num == 0; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Parses "p/q" or a plain decimal ("0.25", "1", ".5") exactly.
/// Returns nullopt if the text is not one of those forms or overflows.
std::optional<Rational> parse_rational(std::string_view text);

/// Formats a double with the fixed significant-digit policy used by
/// table output (6 significant digits).
std::string format_number(double v);

}  // namespace gamet
