#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "starbody/circle.hpp"

namespace starbody {

// lambda(N) = 3 / (1 + N_r) with N_r <= N < N_{r+1}. N at or beyond the last
// entry uses the last entry. Throws std::out_of_range for N < nr[0].
double lambda_value(std::int64_t n, std::span<const std::int64_t> nr);

// Radius used for the window starting at index r.
double lambda_at_index(std::span<const std::int64_t> nr, std::size_t r);

enum class R0Policy {
  SmallBalls,  // r0(I) = smallest r with lambda(N_r) < rho / 3
  Any,         // every r is admissible
};

std::string to_string(R0Policy policy);

struct UbiquityConfig {
  std::vector<std::int64_t> nr;
  double kappa = 0.25;
  double rho_min = 0.0;
  R0Policy r0_policy = R0Policy::SmallBalls;

  // Non-decreasing nr and kappa > 0; calibration additionally requires strict
  // increase.
  void validate() const;
};

// Smallest admissible window index for an interval of half-length rho, or
// nullopt when nr is too short to reach it.
std::optional<std::size_t> r0_index(const UbiquityConfig& config, double rho);

struct UbiquityTrial {
  Arc interval;  // I = (center - rho, center + rho)
  std::size_t r = 0;
  std::int64_t n_begin = 0;  // N_r
  std::int64_t n_end = 0;    // N_{r+1}
  double lambda = 0.0;
  double measured = 0.0;  // mu(I intersect union of lambda-balls)
  double bound = 0.0;     // 2 kappa rho
  bool pass = false;

  double ratio() const { return measured / (2.0 * interval.half_length); }
};

struct UbiquityReport {
  std::vector<UbiquityTrial> trials;
  double min_ratio = 0.0;
  bool all_pass() const;
};

// The balls (z_n - lambda, z_n + lambda), N_r <= n < N_{r+1}, as a union.
IntervalUnion window_balls(double y0, double beta, std::int64_t n_begin, std::int64_t n_end, double lambda);

// One ubiquity check for interval I at window r. Throws PreconditionError when
// rho < rho_min or r is below r0(I) under the configured policy.
UbiquityTrial check_ubiquity(double y0, double beta, const UbiquityConfig& config, Arc interval, std::size_t r);

struct RhoRange {
  double lo = 0.01;
  double hi = 0.1;
};

// Window indices tried per interval: r0(I) + offset, offset in [min_offset, max_offset].
struct ROffsetRange {
  std::size_t min_offset = 0;
  std::size_t max_offset = 4;
};

struct KappaCalibration {
  double kappa = 0.0;  // infimum of measured / (2 rho) over all trials
  UbiquityReport report;
  std::optional<UbiquityTrial> offending;  // a trial with measured == 0
};

// Random intervals I (uniform center, rho uniform in rho_range) against random
// admissible windows. Every trial's bound is recomputed with the returned kappa.
// Deterministic for a given seed regardless of `threads`.
KappaCalibration calibrate_kappa(double y0, double beta, std::span<const std::int64_t> nr, int trials, RhoRange rho_range,
                                 ROffsetRange r_range, std::uint64_t seed, unsigned threads = 1);

}  // namespace starbody
