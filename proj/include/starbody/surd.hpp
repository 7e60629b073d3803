#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace starbody {

// Exact quadratic number (a + b*sqrt(d)) / c with integer coefficients.
// Used wherever irrationality of a slope has to be certified rather than
// assumed.
struct Surd {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t d = 0;
  std::int64_t c = 1;

  // Rejects c == 0 and d < 0; normalizes c > 0 and removes common factors.
  static Surd make(std::int64_t a, std::int64_t b, std::int64_t d, std::int64_t c = 1);

  static Surd golden() { return make(1, 1, 5, 2); }
  static Surd sqrt_of(std::int64_t d) { return make(0, 1, d, 1); }
  static Surd rational(std::int64_t p, std::int64_t q) { return make(p, 0, 0, q); }

  bool is_irrational() const;
  long double value() const;
  Surd reciprocal() const;

  std::string to_string() const;  // "surd:a,b,d,c"

  friend bool operator==(const Surd&, const Surd&) = default;
};

// Integer square root (floor) for non-negative arguments.
std::int64_t isqrt(std::int64_t n);
bool is_perfect_square(std::int64_t n);

// Parses "surd:a,b,d[,c]" or one of the named constants "golden", "sqrt<d>",
// "silver" (1+sqrt 2). Returns nullopt when `text` is neither.
std::optional<Surd> parse_surd(std::string_view text);

}  // namespace starbody
