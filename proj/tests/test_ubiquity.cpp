#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "starbody/cfrac.hpp"
#include "starbody/errors.hpp"
#include "starbody/ubiquity.hpp"

using namespace starbody;

namespace {

const double kGoldenBeta = (std::sqrt(5.0) - 1.0) / 2.0;
const std::vector<std::int64_t> kFib{1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597, 2584, 4181, 6765};

std::vector<std::int64_t> golden_nr() { return convergent_denominators(cf_expand(Surd::golden().reciprocal(), 48), 1LL << 40); }

}  // namespace

TEST_CASE("lambda examples") {
  CHECK(lambda_value(6, std::vector<std::int64_t>{1, 2, 3, 5, 8, 13}) == doctest::Approx(0.5));
  CHECK(lambda_value(12, std::vector<std::int64_t>{2, 5, 12, 29}) == doctest::Approx(3.0 / 13.0));
  CHECK(lambda_value(2, std::vector<std::int64_t>{2, 5, 12, 29}) == doctest::Approx(1.0));
  CHECK(lambda_value(1000, std::vector<std::int64_t>{2, 5, 12, 29}) == doctest::Approx(0.1));
  CHECK_THROWS_AS(lambda_value(1, std::vector<std::int64_t>{2, 5, 12, 29}), std::out_of_range);
}

TEST_CASE("lambda is non-increasing") {
  double prev = lambda_value(1, kFib);
  for (std::int64_t n = 2; n < 10000; ++n) {
    const double v = lambda_value(n, kFib);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("a single covering ball gives the full interval") {
  // z_2 = 0.5 and lambda = 3/(1+2) = 1 covers any interval
  const UbiquityConfig config{{1, 2, 3}, 1.0 - 1e-12, 0.0, R0Policy::Any};
  const auto t = check_ubiquity(0.0, 0.25, config, {0.7, 0.1}, 1);
  CHECK(t.measured == doctest::Approx(0.2));
  CHECK(t.pass);
}

TEST_CASE("golden orbit passes at r = 6") {
  const UbiquityConfig config{kFib, 0.25, 0.01, R0Policy::Any};
  const auto t = check_ubiquity(0.0, kGoldenBeta, config, {0.25, 0.05}, 6);
  // oracle: exact measure from the unrestricted balls
  const auto balls = window_balls(0.0, kGoldenBeta, kFib[6], kFib[7], lambda_at_index(kFib, 6));
  CHECK(t.measured == doctest::Approx(union_measure(intersect_with_interval(balls, {0.25, 0.05}))));
  CHECK(t.bound == doctest::Approx(0.025));
  CHECK(t.pass);
}

TEST_CASE("empty index window fails") {
  const UbiquityConfig config{{1, 2, 5, 5, 8}, 0.25, 0.0, R0Policy::Any};
  const auto t = check_ubiquity(0.0, kGoldenBeta, config, {0.5, 0.1}, 2);
  CHECK(t.measured == 0.0);
  CHECK_FALSE(t.pass);
}

TEST_CASE("check_ubiquity preconditions") {
  const UbiquityConfig small{kFib, 0.25, 0.01, R0Policy::SmallBalls};
  // lambda(N_r) < 0.05/3 first holds at N_r = 233 (index 11)
  REQUIRE(r0_index(small, 0.05) == std::size_t{11});
  CHECK_THROWS_AS(check_ubiquity(0.0, kGoldenBeta, small, {0.25, 0.05}, 6), PreconditionError);
  CHECK_NOTHROW(check_ubiquity(0.0, kGoldenBeta, small, {0.25, 0.05}, 11));
  CHECK_THROWS_AS(check_ubiquity(0.0, kGoldenBeta, small, {0.25, 0.001}, 11), PreconditionError);
  CHECK_THROWS_AS(check_ubiquity(0.0, kGoldenBeta, small, {0.25, 0.05}, kFib.size() - 1), PreconditionError);
  const UbiquityConfig bad{{3, 2}, 0.25, 0.0, R0Policy::Any};
  CHECK_THROWS_AS(check_ubiquity(0.0, kGoldenBeta, bad, {0.25, 0.05}, 0), PreconditionError);
  const UbiquityConfig zero_kappa{kFib, 0.0, 0.0, R0Policy::Any};
  CHECK_THROWS_AS(zero_kappa.validate(), PreconditionError);
}

TEST_CASE("measured never exceeds the interval or the unrestricted union") {
  const auto nr = golden_nr();
  const auto cal = calibrate_kappa(0.1, kGoldenBeta, nr, 300, {0.01, 0.1}, {0, 4}, 77);
  for (const auto& t : cal.report.trials) {
    CHECK(t.measured <= 2.0 * t.interval.half_length + 1e-15);
    const auto balls = window_balls(0.1, kGoldenBeta, t.n_begin, t.n_end, t.lambda);
    CHECK(t.measured <= union_measure(balls) + 1e-15);
    CHECK(t.measured == doctest::Approx(union_measure(intersect_with_interval(balls, t.interval))).epsilon(1e-12));
    CHECK(t.lambda < t.interval.half_length / 3.0);
  }
}

TEST_CASE("calibration on a finite orbit returns zero") {
  std::vector<std::int64_t> dense;
  for (std::int64_t n = 1; n <= 2000; ++n) dense.push_back(n);
  const auto cal = calibrate_kappa(0.0, 0.5, dense, 200, {0.01, 0.1}, {0, 4}, 3);
  CHECK(cal.kappa == 0.0);
  REQUIRE(cal.offending.has_value());
  CHECK(cal.offending->measured == 0.0);
}

TEST_CASE("calibration on badly approximable orbits") {
  const auto nr = golden_nr();
  const auto cal = calibrate_kappa(0.0, kGoldenBeta, nr, 1000, {0.01, 0.1}, {0, 4}, 0);
  CHECK(cal.kappa > 0.0);
  CHECK(cal.kappa >= 0.2);
  CHECK(cal.report.all_pass());
  CHECK(cal.kappa <= cal.report.min_ratio);
  for (const auto& t : cal.report.trials) CHECK(t.measured >= cal.kappa * 2.0 * t.interval.half_length);

  const auto silver_nr = convergent_denominators(cf_expand(Surd::sqrt_of(2).reciprocal(), 48), 1LL << 40);
  const auto silver = calibrate_kappa(0.0, std::sqrt(0.5), silver_nr, 1000, {0.01, 0.1}, {0, 4}, 0);
  CHECK(silver.kappa >= 0.2);
}

TEST_CASE("single covering trial calibrates to one") {
  // lambda 3/(1+N_r) against tiny rho still covers after the window is dense
  const auto nr = golden_nr();
  const auto cal = calibrate_kappa(0.0, kGoldenBeta, nr, 1, {0.05, 0.05}, {0, 0}, 1);
  REQUIRE(cal.report.trials.size() == 1);
  CHECK(cal.kappa == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("calibration is deterministic and thread independent") {
  const auto nr = golden_nr();
  const auto a = calibrate_kappa(0.3, kGoldenBeta, nr, 400, {0.01, 0.1}, {0, 4}, 99, 1);
  const auto b = calibrate_kappa(0.3, kGoldenBeta, nr, 400, {0.01, 0.1}, {0, 4}, 99, 4);
  CHECK(a.kappa == b.kappa);
  REQUIRE(a.report.trials.size() == b.report.trials.size());
  for (std::size_t i = 0; i < a.report.trials.size(); ++i) {
    CHECK(a.report.trials[i].measured == b.report.trials[i].measured);
    CHECK(a.report.trials[i].r == b.report.trials[i].r);
  }
  const auto c = calibrate_kappa(0.3, kGoldenBeta, nr, 400, {0.01, 0.1}, {0, 4}, 100, 1);
  CHECK(c.report.trials[0].interval.center != a.report.trials[0].interval.center);
}

TEST_CASE("calibration preconditions") {
  CHECK_THROWS_AS(calibrate_kappa(0.0, kGoldenBeta, kFib, 0, {}, {}, 0), PreconditionError);
  CHECK_THROWS_AS(calibrate_kappa(0.0, kGoldenBeta, std::vector<std::int64_t>{1, 2, 2, 3}, 10, {}, {}, 0),
                  PreconditionError);
  // too short to reach lambda < rho / 3
  CHECK_THROWS_AS(calibrate_kappa(0.0, kGoldenBeta, std::vector<std::int64_t>{1, 2, 3, 5}, 10, {}, {}, 0),
                  PreconditionError);
}
