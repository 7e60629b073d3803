#include "starbody/cfrac.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include "starbody/errors.hpp"

namespace starbody {
namespace {

BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt quot = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --quot;
  return quot;
}

// x = (P + sqrt(D)) / Q with Q | (D - P^2), D not a perfect square.
struct QuadraticState {
  BigInt p;
  BigInt d;
  BigInt q;
  BigInt root;  // floor(sqrt(D))

  static QuadraticState from(const Surd& x) {
    QuadraticState st;
    const BigInt b = x.b;
    st.d = b * b * BigInt(x.d);
    if (x.b > 0) {
      st.p = x.a;
      st.q = x.c;
    } else {
      st.p = -BigInt(x.a);
      st.q = -BigInt(x.c);
    }
    if ((st.d - st.p * st.p) % st.q != 0) {
      const BigInt absq = abs(st.q);
      st.p *= absq;
      st.d *= st.q * st.q;
      st.q *= absq;
    }
    st.root = boost::multiprecision::sqrt(st.d);
    return st;
  }

  BigInt next_quotient() {
    const BigInt num = p + root + (q < 0 ? 1 : 0);
    const BigInt a = floor_div(num, q);
    p = a * q - p;
    q = (d - p * p) / q;
    return a;
  }
};

std::int64_t to_int64(const BigInt& v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw OverflowError(what);
  return static_cast<std::int64_t>(v);
}

class ConvergentBuilder {
 public:
  explicit ConvergentBuilder(CFExpansion& out) : out_(out) {}

  void push(std::int64_t a) {
    BigInt p = BigInt(a) * p1_ + p2_;
    BigInt q = BigInt(a) * q1_ + q2_;
    p2_ = std::exchange(p1_, p);
    q2_ = std::exchange(q1_, q);
    out_.partial_quotients.push_back(a);
    out_.convergents.push_back({std::move(p), std::move(q)});
  }

 private:
  CFExpansion& out_;
  BigInt p1_ = 1, p2_ = 0, q1_ = 0, q2_ = 1;
};

}  // namespace

CFExpansion cf_expand(const RealInput& x, int depth) {
  if (depth < 1) throw PreconditionError("cf_expand requires depth >= 1");
  CFExpansion cf;
  cf.source = x;
  ConvergentBuilder builder(cf);

  if (const auto* surd = std::get_if<Surd>(&x)) {
    if (!(surd->value() > 0)) throw PreconditionError("cf_expand requires x > 0");
    if (surd->is_irrational()) {
      auto state = QuadraticState::from(*surd);
      for (int k = 0; k <= depth; ++k) builder.push(to_int64(state.next_quotient(), "partial quotient overflow"));
      return cf;
    }
    // rational a / c: Euclid
    BigInt num = surd->a;
    BigInt den = surd->c;
    for (int k = 0; k <= depth && den != 0; ++k) {
      const BigInt a = floor_div(num, den);
      builder.push(to_int64(a, "partial quotient overflow"));
      num = std::exchange(den, BigInt(num - a * den));
    }
    cf.terminated = den == 0;
    return cf;
  }

  const double value = std::get<double>(x);
  if (!std::isfinite(value) || !(value > 0.0)) throw PreconditionError("cf_expand requires finite x > 0");
  long double y = value;
  for (int k = 0; k <= depth; ++k) {
    const long double a = std::floor(y);
    if (k > 0 && a >= kFloatQuotientGuard)
      throw PrecisionError("floating-point continued fraction exceeded the quotient guard at depth " +
                           std::to_string(k));
    if (a > static_cast<long double>(std::numeric_limits<std::int64_t>::max()))
      throw OverflowError("partial quotient overflow");
    builder.push(static_cast<std::int64_t>(a));
    const long double frac = y - a;
    if (frac == 0.0L) {
      cf.terminated = true;
      break;
    }
    y = 1.0L / frac;
  }
  return cf;
}

std::vector<std::int64_t> nr_sequence(const CFExpansion& cf, std::size_t count) {
  std::vector<std::int64_t> out;
  out.reserve(count);
  for (std::size_t k = 1; k < cf.convergents.size() && out.size() < count; ++k) {
    const auto q = to_int64(cf.convergents[k].q, "convergent denominator exceeds 64 bits");
    if (out.empty() || q > out.back()) out.push_back(q);
  }
  if (out.size() < count)
    throw std::length_error("nr_sequence: only " + std::to_string(out.size()) + " convergent denominators available, " +
                            std::to_string(count) + " requested");
  return out;
}

std::vector<std::int64_t> convergent_denominators(const CFExpansion& cf, std::int64_t max_value) {
  std::vector<std::int64_t> out;
  for (std::size_t k = 1; k < cf.convergents.size(); ++k) {
    if (cf.convergents[k].q > max_value) break;
    const auto q = static_cast<std::int64_t>(cf.convergents[k].q);
    if (out.empty() || q > out.back()) out.push_back(q);
  }
  return out;
}

std::optional<Periodicity> detect_period(const Surd& x, int max_depth) {
  if (!x.is_irrational()) return std::nullopt;
  auto state = QuadraticState::from(x);
  std::map<std::pair<BigInt, BigInt>, std::size_t> seen;
  for (int k = 0; k <= max_depth; ++k) {
    auto [it, inserted] = seen.emplace(std::make_pair(state.p, state.q), static_cast<std::size_t>(k));
    if (!inserted) return Periodicity{it->second, static_cast<std::size_t>(k) - it->second};
    state.next_quotient();
  }
  return std::nullopt;
}

}  // namespace starbody
