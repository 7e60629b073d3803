#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "starbody/surd.hpp"

namespace starbody {

using BigInt = boost::multiprecision::cpp_int;

// A real number to expand: exact surd or IEEE double.
using RealInput = std::variant<Surd, double>;

struct Convergent {
  BigInt p;
  BigInt q;
};

struct CFExpansion {
  std::vector<std::int64_t> partial_quotients;  // a_0, a_1, ...
  std::vector<Convergent> convergents;          // p_k / q_k for each a_k
  RealInput source;
  bool terminated = false;  // the input is rational and the expansion is complete
};

// Quotients above this bound end a floating-point expansion with PrecisionError.
inline constexpr double kFloatQuotientGuard = 1e8;

// Expands x > 0 to partial quotients a_0..a_depth (fewer if x is rational).
// Surds use exact integer recurrences; convergents are arbitrary precision.
CFExpansion cf_expand(const RealInput& x, int depth);

// Convergent denominators q_1 < q_2 < ... (the q_k with k >= 1, deduplicated).
// Throws std::length_error when fewer than `count` are available.
std::vector<std::int64_t> nr_sequence(const CFExpansion& cf, std::size_t count);

// Every available q_k (k >= 1, deduplicated) not exceeding max_value.
std::vector<std::int64_t> convergent_denominators(const CFExpansion& cf, std::int64_t max_value);

struct Periodicity {
  std::size_t preperiod = 0;
  std::size_t period = 0;
};

// Detects the eventual period of an irrational surd's expansion by state
// repetition within `max_depth` quotients.
std::optional<Periodicity> detect_period(const Surd& x, int max_depth);

}  // namespace starbody
