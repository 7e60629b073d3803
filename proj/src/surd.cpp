#include "starbody/surd.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <vector>

#include "starbody/errors.hpp"

namespace starbody {
namespace {

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(x, y, &out)) throw OverflowError("surd coefficient overflow");
  return out;
}

std::int64_t checked_sub(std::int64_t x, std::int64_t y) {
  std::int64_t out = 0;
  if (__builtin_sub_overflow(x, y, &out)) throw OverflowError("surd coefficient overflow");
  return out;
}

std::optional<std::int64_t> to_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw DomainError("isqrt of negative number");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

bool is_perfect_square(std::int64_t n) {
  if (n < 0) return false;
  const auto r = isqrt(n);
  return r * r == n;
}

Surd Surd::make(std::int64_t a, std::int64_t b, std::int64_t d, std::int64_t c) {
  if (c == 0) throw PreconditionError("surd denominator must be non-zero");
  if (d < 0) throw PreconditionError("surd radicand must be non-negative");
  if (b != 0 && is_perfect_square(d)) {
    if (__builtin_add_overflow(a, checked_mul(b, isqrt(d)), &a)) throw OverflowError("surd coefficient overflow");
    b = 0;
  }
  if (b == 0) d = 0;
  if (c < 0) {
    a = -a;
    b = -b;
    c = -c;
  }
  std::int64_t g = std::gcd(std::gcd(a, b), c);
  if (g > 1) {
    a /= g;
    b /= g;
    c /= g;
  }
  return Surd{a, b, d, c};
}

bool Surd::is_irrational() const { return b != 0 && d > 0 && !is_perfect_square(d); }

long double Surd::value() const {
  return (static_cast<long double>(a) + static_cast<long double>(b) * std::sqrt(static_cast<long double>(d))) /
         static_cast<long double>(c);
}

Surd Surd::reciprocal() const {
  // c / (a + b sqrt d) = c (a - b sqrt d) / (a^2 - b^2 d)
  const std::int64_t den = checked_sub(checked_mul(a, a), checked_mul(checked_mul(b, b), d));
  if (den == 0) throw DomainError("reciprocal of zero");
  return make(checked_mul(c, a), checked_mul(-c, b), d, den);
}

std::string Surd::to_string() const {
  return "surd:" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(d) + "," + std::to_string(c);
}

std::optional<Surd> parse_surd(std::string_view text) {
  if (text == "golden") return Surd::golden();
  if (text == "silver") return Surd::make(1, 1, 2, 1);
  if (text.starts_with("sqrt")) {
    auto d = to_int(text.substr(4));
    if (!d || *d < 0) return std::nullopt;
    return Surd::sqrt_of(*d);
  }
  if (!text.starts_with("surd:")) return std::nullopt;
  text.remove_prefix(5);
  std::vector<std::int64_t> parts;
  while (true) {
    const auto comma = text.find(',');
    auto v = to_int(text.substr(0, comma));
    if (!v) return std::nullopt;
    parts.push_back(*v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (parts.size() != 3 && parts.size() != 4) return std::nullopt;
  const std::int64_t c = parts.size() == 4 ? parts[3] : 1;
  if (c == 0 || parts[2] < 0) return std::nullopt;
  return Surd::make(parts[0], parts[1], parts[2], c);
}

}  // namespace starbody
