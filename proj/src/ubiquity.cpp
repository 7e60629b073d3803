#include "starbody/ubiquity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "starbody/errors.hpp"
#include "starbody/parallel.hpp"
#include "starbody/random.hpp"

namespace starbody {

double lambda_at_index(std::span<const std::int64_t> nr, std::size_t r) {
  if (r >= nr.size()) throw std::out_of_range("lambda_at_index: r beyond the N_r sequence");
  return 3.0 / (1.0 + static_cast<double>(nr[r]));
}

double lambda_value(std::int64_t n, std::span<const std::int64_t> nr) {
  if (nr.empty() || n < nr.front()) throw std::out_of_range("lambda_value: N below N_0");
  const auto it = std::upper_bound(nr.begin(), nr.end(), n);
  return lambda_at_index(nr, static_cast<std::size_t>(std::distance(nr.begin(), it) - 1));
}

std::string to_string(R0Policy policy) { return policy == R0Policy::SmallBalls ? "small-balls" : "any"; }

void UbiquityConfig::validate() const {
  if (nr.empty()) throw PreconditionError("ubiquity: N_r sequence is empty");
  if (!(kappa > 0.0)) throw PreconditionError("ubiquity: kappa must be > 0");
  if (nr.front() < 1) throw PreconditionError("ubiquity: N_r must be positive");
  if (!std::is_sorted(nr.begin(), nr.end())) throw PreconditionError("ubiquity: N_r must be non-decreasing");
}

std::optional<std::size_t> r0_index(const UbiquityConfig& config, double rho) {
  if (config.r0_policy == R0Policy::Any) return std::size_t{0};
  for (std::size_t r = 0; r < config.nr.size(); ++r)
    if (lambda_at_index(config.nr, r) < rho / 3.0) return r;
  return std::nullopt;
}

bool UbiquityReport::all_pass() const {
  return std::all_of(trials.begin(), trials.end(), [](const UbiquityTrial& t) { return t.pass; });
}

IntervalUnion window_balls(double y0, double beta, std::int64_t n_begin, std::int64_t n_end, double lambda) {
  const CircleOrbit orbit{y0, beta, n_end};
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, n_end - n_begin)));
  for (std::int64_t n = n_begin; n < n_end; ++n) arcs.push_back({orbit.point(n), lambda});
  return IntervalUnion(arcs);
}

namespace {

UbiquityTrial measure_trial(double y0, double beta, std::span<const std::int64_t> nr, Arc interval, std::size_t r,
                            double kappa) {
  UbiquityTrial t;
  t.interval = interval;
  t.r = r;
  t.n_begin = nr[r];
  t.n_end = nr[r + 1];
  t.lambda = lambda_at_index(nr, r);

  // Only balls reaching I can contribute to the intersection.
  const CircleOrbit orbit{y0, beta, t.n_end};
  std::vector<Arc> arcs;
  const double reach = interval.half_length + t.lambda;
  for (std::int64_t n = t.n_begin; n < t.n_end; ++n) {
    const double z = orbit.point(n);
    if (circle_dist(z, interval.center) < reach) arcs.push_back({z, t.lambda});
  }
  t.measured = union_measure(intersect_with_interval(IntervalUnion(arcs), interval));
  t.bound = kappa * (2.0 * interval.half_length);
  t.pass = t.measured >= t.bound;
  return t;
}

}  // namespace

UbiquityTrial check_ubiquity(double y0, double beta, const UbiquityConfig& config, Arc interval, std::size_t r) {
  config.validate();
  const double rho = interval.half_length;
  if (!(rho > 0.0) || rho > 0.5) throw PreconditionError("check_ubiquity: interval half-length must lie in (0, 1/2]");
  if (rho < config.rho_min)
    throw PreconditionError("check_ubiquity: rho " + std::to_string(rho) + " below rho_min " +
                            std::to_string(config.rho_min));
  if (r + 1 >= config.nr.size()) throw PreconditionError("check_ubiquity: window r needs N_{r+1}");
  const auto r0 = r0_index(config, rho);
  if (!r0 || r < *r0)
    throw PreconditionError("check_ubiquity: r below r0(I) under policy " + to_string(config.r0_policy) +
                            " (lambda(N_r) < rho/3)");
  return measure_trial(y0, beta, config.nr, interval, r, config.kappa);
}

KappaCalibration calibrate_kappa(double y0, double beta, std::span<const std::int64_t> nr, int trials,
                                 RhoRange rho_range, ROffsetRange r_range, std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw PreconditionError("calibrate_kappa requires trials >= 1");
  if (!(rho_range.lo > 0.0) || rho_range.hi < rho_range.lo || rho_range.hi > 0.5)
    throw PreconditionError("calibrate_kappa: rho range must satisfy 0 < lo <= hi <= 1/2");
  if (r_range.max_offset < r_range.min_offset) throw PreconditionError("calibrate_kappa: empty r offset range");
  if (nr.size() < 2 || !std::is_sorted(nr.begin(), nr.end()) ||
      std::adjacent_find(nr.begin(), nr.end()) != nr.end() || nr.front() < 1)
    throw PreconditionError("calibrate_kappa: N_r must be strictly increasing positive integers");

  UbiquityConfig config{{nr.begin(), nr.end()}, 1.0, rho_range.lo, R0Policy::SmallBalls};

  struct Draw {
    Arc interval;
    std::size_t r;
  };
  std::vector<Draw> draws;
  draws.reserve(static_cast<std::size_t>(trials));
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    const double center = rng.uniform();
    const double rho = rng.uniform(rho_range.lo, rho_range.hi);
    const auto r0 = r0_index(config, rho);
    const std::size_t last = nr.size() - 2;
    if (!r0 || *r0 + r_range.min_offset > last)
      throw PreconditionError("calibrate_kappa: N_r sequence too short for rho = " + std::to_string(rho));
    const std::size_t hi = std::min(last, *r0 + r_range.max_offset);
    const auto r = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(*r0 + r_range.min_offset), static_cast<std::int64_t>(hi)));
    draws.push_back({{center, rho}, r});
  }

  KappaCalibration out;
  out.report.trials.resize(draws.size());
  parallel_for(draws.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      out.report.trials[i] = measure_trial(y0, beta, nr, draws[i].interval, draws[i].r, 1.0);
  });

  double kappa = std::numeric_limits<double>::infinity();
  for (const auto& t : out.report.trials) {
    kappa = std::min(kappa, t.ratio());
    if (t.measured == 0.0 && !out.offending) out.offending = t;
  }
  if (out.offending) kappa = 0.0;
  out.report.min_ratio = kappa;
  // bound = 2 kappa rho must not exceed measured after rounding
  auto holds = [&](double k) {
    return std::all_of(out.report.trials.begin(), out.report.trials.end(),
                       [&](const UbiquityTrial& t) { return t.measured >= k * (2.0 * t.interval.half_length); });
  };
  while (kappa > 0.0 && !holds(kappa)) kappa = std::nextafter(kappa, 0.0);

  for (auto& t : out.report.trials) {
    t.bound = kappa * (2.0 * t.interval.half_length);
    t.pass = t.measured >= t.bound;
  }
  out.kappa = kappa;
  return out;
}

}  // namespace starbody
