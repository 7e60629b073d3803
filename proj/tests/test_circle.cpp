#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "starbody/circle.hpp"
#include "starbody/errors.hpp"
#include "starbody/random.hpp"

using namespace starbody;

namespace {

const double kGoldenBeta = (std::sqrt(5.0) - 1.0) / 2.0;

// Sorted consecutive gaps with wraparound, computed independently.
std::vector<double> raw_gaps(std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) gaps.push_back(pts[i + 1] - pts[i]);
  gaps.push_back(1.0 - pts.back() + pts.front());
  return gaps;
}

double monte_carlo_measure(const std::vector<Arc>& arcs, int samples, std::uint64_t seed) {
  Rng rng(seed);
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    const double x = rng.uniform();
    for (const auto& a : arcs)
      if (circle_dist(x, a.center) < a.half_length) {
        ++hits;
        break;
      }
  }
  return static_cast<double>(hits) / samples;
}

std::vector<Arc> random_arcs(Rng& rng, int count) {
  std::vector<Arc> arcs;
  for (int i = 0; i < count; ++i) arcs.push_back({rng.uniform(), rng.uniform(0.0, 0.05)});
  return arcs;
}

}  // namespace

TEST_CASE("frac and circle distances") {
  CHECK(frac(2.75) == 0.75);
  CHECK(frac(-0.25) == 0.75);
  CHECK(frac(3.0) == 0.0);
  CHECK(frac(-1e-20) < 1.0);
  CHECK(circle_dist(0.1, 0.9) == doctest::Approx(0.2));
  CHECK(circle_dist(0.3, 0.3) == 0.0);
  CHECK(circle_dist(0.0, 0.5) == 0.5);
  CHECK(circle_diff(0.1, 0.9) == doctest::Approx(0.2));
  CHECK(circle_diff(0.9, 0.1) == doctest::Approx(-0.2));
}

TEST_CASE("orbit points") {
  const auto pts = orbit_points({0.0, kGoldenBeta, 4});
  const std::vector<double> expected{0.0, 0.618034, 0.236068, 0.854102};
  REQUIRE(pts.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(pts[i] - expected[i]) <= 1e-6);
  CHECK(orbit_points({0.5, 0.25, 2}) == std::vector<double>{0.5, 0.75});
  CHECK(orbit_points({0.3, kGoldenBeta, 1}) == std::vector<double>{0.3});
  // large n keeps precision
  const CircleOrbit big{0.0, kGoldenBeta, 0};
  const long double exact = std::fmod(1e9L * ((std::sqrt(5.0L) - 1.0L) / 2.0L), 1.0L);
  CHECK(std::abs(big.point(1'000'000'000) - static_cast<double>(exact)) < 1e-6);
}

TEST_CASE("golden and silver gap structures") {
  const auto pts = orbit_points({0.0, kGoldenBeta, 4});
  const auto gs = gap_structure(pts);
  REQUIRE(gs.distinct_gaps.size() == 3);
  auto gaps = raw_gaps(pts);
  std::sort(gaps.rbegin(), gaps.rend());
  CHECK(gs.distinct_gaps[0].length == doctest::Approx(gaps[0]));
  CHECK(std::abs(gs.distinct_gaps[0].length - 0.381966) <= 1e-6);
  CHECK(gs.distinct_gaps[0].multiplicity == 1);
  CHECK(std::abs(gs.distinct_gaps[1].length - 0.236068) <= 1e-6);
  CHECK(gs.distinct_gaps[1].multiplicity == 2);
  CHECK(std::abs(gs.distinct_gaps[2].length - 0.145898) <= 1e-6);
  CHECK(gs.distinct_gaps[2].multiplicity == 1);
  CHECK(std::abs(gs.distinct_gaps[0].length - gs.distinct_gaps[1].length - gs.distinct_gaps[2].length) <= 1e-9);

  const auto silver = gap_structure(orbit_points({0.0, std::sqrt(2.0) - 1.0, 3}));
  REQUIRE(silver.distinct_gaps.size() == 2);
  CHECK(std::abs(silver.distinct_gaps[0].length - 0.414214) <= 1e-6);
  CHECK(silver.distinct_gaps[0].multiplicity == 2);
  CHECK(std::abs(silver.distinct_gaps[1].length - 0.171573) <= 1e-6);
  CHECK(silver.distinct_gaps[1].multiplicity == 1);

  const auto single = gap_structure(std::vector<double>{0.42});
  REQUIRE(single.distinct_gaps.size() == 1);
  CHECK(single.distinct_gaps[0].length == 1.0);
}

TEST_CASE("duplicate points are flagged") {
  const auto gs = gap_structure(orbit_points({0.0, 0.5, 4}));
  CHECK(gs.has_duplicate_points);
  CHECK(gs.distinct_gaps.back().length == 0.0);
  CHECK(gs.total_length() == doctest::Approx(1.0));
}

TEST_CASE("rational orbit gaps are exact") {
  const auto gs = rational_orbit_gaps(2, 5, 5);
  CHECK(gs.clustering_epsilon == 0.0);
  REQUIRE(gs.distinct_gaps.size() == 1);
  CHECK(gs.distinct_gaps[0].length == 0.2);
  CHECK(gs.distinct_gaps[0].multiplicity == 5);
  const auto three = rational_orbit_gaps(3, 7, 4);
  const auto oracle = gap_structure(orbit_points({0.0, 3.0 / 7.0, 4}));
  REQUIRE(three.distinct_gaps.size() == oracle.distinct_gaps.size());
  for (std::size_t i = 0; i < oracle.distinct_gaps.size(); ++i) {
    CHECK(three.distinct_gaps[i].length == doctest::Approx(oracle.distinct_gaps[i].length));
    CHECK(three.distinct_gaps[i].multiplicity == oracle.distinct_gaps[i].multiplicity);
  }
  CHECK(rational_orbit_gaps(1, 2, 4).has_duplicate_points);
}

TEST_CASE("three-gap law on random orbits") {
  Rng rng(1);
  for (int t = 0; t < 500; ++t) {
    const double beta = rng.uniform();
    const auto n = rng.uniform_int(1, 2000);
    const double y0 = rng.uniform();
    const auto gs = gap_structure(orbit_points({y0, beta, n}), 1e-9);
    CHECK(gs.distinct_gaps.size() <= 3);
    CHECK(std::abs(gs.total_length() - 1.0) <= 1e-9);
    if (gs.distinct_gaps.size() == 3) {
      const auto& g = gs.distinct_gaps;
      CHECK(std::abs(g[0].length - g[1].length - g[2].length) <= 1e-9);
    }
  }
}

TEST_CASE("union measure examples") {
  const std::vector<Arc> overlap{{0.2, 0.1}, {0.3, 0.1}};
  CHECK(union_measure(IntervalUnion(overlap)) == doctest::Approx(0.3));
  const std::vector<Arc> wrap{{0.95, 0.1}};
  const IntervalUnion w(wrap);
  CHECK(union_measure(w) == doctest::Approx(0.2));
  CHECK(w.segments().size() == 2);
  CHECK(w.contains(0.02));
  CHECK(w.contains(0.9));
  CHECK_FALSE(w.contains(0.5));
  const std::vector<Arc> disjoint{{0.1, 0.05}, {0.5, 0.05}};
  CHECK(union_measure(IntervalUnion(disjoint)) == doctest::Approx(0.2));
  const std::vector<Arc> huge{{0.3, 0.7}};
  CHECK(union_measure(IntervalUnion(huge)) == 1.0);
  CHECK(union_measure(IntervalUnion()) == 0.0);
}

TEST_CASE("intersect with interval examples") {
  CHECK(union_measure(intersect_with_interval(IntervalUnion::full(), {0.5, 0.1})) == doctest::Approx(0.2));
  const std::vector<Arc> far{{0.1, 0.05}};
  const auto empty = intersect_with_interval(IntervalUnion(far), {0.6, 0.1});
  CHECK(empty.empty());
  CHECK(union_measure(empty) == 0.0);
  const std::vector<Arc> arc{{0.2, 0.1}};
  CHECK(union_measure(intersect_with_interval(IntervalUnion(arc), {0.25, 0.05})) == doctest::Approx(0.1));
  // interval across 0
  CHECK(union_measure(intersect_with_interval(IntervalUnion(std::vector<Arc>{{0.97, 0.05}}), {0.0, 0.1})) ==
        doctest::Approx(0.1));
  CHECK_THROWS_AS(intersect_with_interval(IntervalUnion::full(), {0.5, 0.0}), PreconditionError);
  CHECK_THROWS_AS(intersect_with_interval(IntervalUnion::full(), {0.5, 0.6}), PreconditionError);
}

TEST_CASE("union measure is monotone and invariant under reordering and rotation") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    auto arcs = random_arcs(rng, static_cast<int>(rng.uniform_int(1, 50)));
    const double m = union_measure(IntervalUnion(arcs));
    CHECK(m >= 0.0);
    CHECK(m <= 1.0);

    auto shuffled = arcs;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + static_cast<long>(shuffled.size() / 2), shuffled.end());
    CHECK(union_measure(IntervalUnion(shuffled)) == doctest::Approx(m).epsilon(1e-12));

    const double shift = rng.uniform();
    auto rotated = arcs;
    for (auto& a : rotated) a.center = frac(a.center + shift);
    CHECK(union_measure(IntervalUnion(rotated)) == doctest::Approx(m).epsilon(1e-9));

    const Arc interval{rng.uniform(), rng.uniform(0.01, 0.5)};
    const Arc rotated_interval{frac(interval.center + shift), interval.half_length};
    const double mi = union_measure(intersect_with_interval(IntervalUnion(arcs), interval));
    CHECK(union_measure(intersect_with_interval(IntervalUnion(rotated), rotated_interval)) ==
          doctest::Approx(mi).epsilon(1e-9));
    CHECK(mi <= 2.0 * interval.half_length + 1e-15);
    CHECK(mi <= m + 1e-15);

    auto grown = arcs;
    grown.push_back({rng.uniform(), rng.uniform(0.0, 0.05)});
    CHECK(union_measure(IntervalUnion(grown)) >= m);
  }
}

TEST_CASE("union measure matches Monte Carlo") {
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    const auto arcs = random_arcs(rng, static_cast<int>(rng.uniform_int(1, 50)));
    const double exact = union_measure(IntervalUnion(arcs));
    CHECK(std::abs(exact - monte_carlo_measure(arcs, 1'000'000, 100 + t)) <= 3e-3);
  }
}

TEST_CASE("normalized segments are disjoint and sorted") {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const IntervalUnion u(random_arcs(rng, 40));
    const auto& segs = u.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
      CHECK(segs[i].lo < segs[i].hi);
      CHECK(segs[i].lo >= 0.0);
      CHECK(segs[i].hi <= 1.0);
      if (i > 0) CHECK(segs[i - 1].hi <= segs[i].lo);
    }
  }
}
