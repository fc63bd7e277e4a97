#include "gamet/numeric.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gamet {

namespace {

bool mul_overflows(std::int64_t a, std::int64_t b, std::int64_t& out) {
  return __builtin_mul_overflow(a, b, &out);
}

bool add_overflows(std::int64_t a, std::int64_t b, std::int64_t& out) {
  return __builtin_add_overflow(a, b, &out);
}

}  // namespace

Rational Rational::of(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return Rational{n, d};
}

Rational Rational::plus(const Rational& o) const {
  std::int64_t g = std::gcd(den, o.den);
  std::int64_t lhs_scale = o.den / g;
  std::int64_t common, a, b, sum;
  if (mul_overflows(den, lhs_scale, common) || mul_overflows(num, lhs_scale, a) ||
      mul_overflows(o.num, den / g, b) || add_overflows(a, b, sum)) {
    throw std::overflow_error("rational sum overflow");
  }
  return Rational::of(sum, common);
}

std::optional<Rational> parse_rational(std::string_view text) {
  // strip surrounding spaces
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::int64_t p = 0, q = 0;
    auto a = text.substr(0, slash);
    auto b = text.substr(slash + 1);
    auto r1 = std::from_chars(a.data(), a.data() + a.size(), p);
    auto r2 = std::from_chars(b.data(), b.data() + b.size(), q);
    if (r1.ec != std::errc() || r1.ptr != a.data() + a.size()) return std::nullopt;
    if (r2.ec != std::errc() || r2.ptr != b.data() + b.size()) return std::nullopt;
    if (q == 0) return std::nullopt;
    return Rational::of(p, q);
  }

  // decimal form: [-]digits[.digits]
  bool negative = false;
  std::string_view rest = text;
  if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  auto dot = rest.find('.');
  std::string_view whole = dot == std::string_view::npos ? rest : rest.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  std::int64_t num = 0;
  for (char c : whole) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    std::int64_t scaled;
    if (mul_overflows(num, 10, scaled) || add_overflows(scaled, c - '0', num)) return std::nullopt;
  }
  std::int64_t den = 1;
  for (char c : frac) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    std::int64_t scaled;
    if (mul_overflows(num, 10, scaled) || add_overflows(scaled, c - '0', num)) return std::nullopt;
    if (mul_overflows(den, 10, den)) return std::nullopt;
  }
  if (negative) num = -num;
  return Rational::of(num, den);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace gamet
