#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace starbody {

// Unit circle R/Z.

// x - floor(x), always in [0, 1).
double frac(double x);

// Distance to the nearest integer of x - y.
double circle_dist(double x, double y);

// Signed representative of x - y in [-1/2, 1/2).
double circle_diff(double x, double y);

struct CircleOrbit {
  double y0 = 0.0;
  double beta = 0.0;
  std::int64_t count = 0;

  // frac(y0 + n beta). The product n beta is split exactly with fma so large n
  // keeps full precision.
  double point(std::int64_t n) const;
};

// [frac(y0 + n beta) for n in 0..count-1]
std::vector<double> orbit_points(const CircleOrbit& orbit);

struct GapClass {
  double length = 0.0;
  std::int64_t multiplicity = 0;
};

struct GapStructure {
  std::vector<GapClass> distinct_gaps;  // sorted by length, descending
  double clustering_epsilon = 0.0;
  bool has_duplicate_points = false;  // a zero-length class is present

  double total_length() const;
};

inline constexpr double kDefaultGapEpsilon = 1e-9;

// Consecutive gaps of the sorted points, wraparound included. Gap lengths
// within `clustering_epsilon` of their neighbour in sorted order share a class
// whose representative is the mean.
GapStructure gap_structure(std::span<const double> points, double clustering_epsilon = kDefaultGapEpsilon);

// Exact gaps of n p / q mod 1 for n = 0..count-1 (epsilon 0).
GapStructure rational_orbit_gaps(std::int64_t p, std::int64_t q, std::int64_t count);

struct Arc {
  double center = 0.0;
  double half_length = 0.0;
};

// Finite union of open arcs, normalized to sorted disjoint segments of [0, 1].
class IntervalUnion {
 public:
  struct Segment {
    double lo = 0.0;
    double hi = 0.0;
  };

  IntervalUnion() = default;
  explicit IntervalUnion(std::span<const Arc> arcs);

  static IntervalUnion full();
  static IntervalUnion from_segments(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const { return segments_; }
  std::vector<Arc> arcs() const;
  bool empty() const { return segments_.empty(); }
  bool contains(double x) const;

 private:
  std::vector<Segment> segments_;
};

// Total arc length, in [0, 1].
double union_measure(const IntervalUnion& u);

// `u` restricted to the arc `interval` (half-length in (0, 1/2]).
IntervalUnion intersect_with_interval(const IntervalUnion& u, Arc interval);

}  // namespace starbody
