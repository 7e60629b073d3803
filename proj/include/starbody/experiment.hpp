#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "starbody/circle.hpp"
#include "starbody/geometry.hpp"

namespace starbody {

// ---------------------------------------------------------------------------
// Geodesic crossings of the horizontal circle.
//
// The lattice family {L + p/q} is viewed in the scaled picture X = q x, where
// the apexes form Z^2 and the circle coordinate is X mod 1. The chosen
// geodesic meets the circle at x_n = frac(y0 + n / alpha); crossing n lies at
// arclength s_n = n sqrt(1 + alpha^-2) / q from its apex, measured in the
// original coordinates.

struct Crossing {
  std::int64_t n = 0;
  double x = 0.0;
  double s = 0.0;
};

struct CrossingSequence {
  double alpha = 0.0;
  std::int64_t q = 1;
  double y0 = 0.0;
  std::vector<Crossing> entries;
};

double crossing_arclength(double alpha, std::int64_t q, std::int64_t n);

// First `count` crossings (n = 0..count-1). Throws NormalizationError for
// alpha < 1/2; swap the axes first.
CrossingSequence crossings(double alpha, std::int64_t q, double y0, std::int64_t count);

// ---------------------------------------------------------------------------
// Radii rho_n of the circle intervals.

enum class RhoRule {
  // halfwidth(F, s_n, psi) / sin(arctan alpha): the orthogonal strip width
  // transported to the horizontal.
  StripWidth,
  // Exact inner horizontal half-chord of {F < psi} through the crossing:
  // the smaller of the two distances to the level curve along the horizontal.
  InnerChord,
};

std::string to_string(RhoRule rule);

struct RhoOptions {
  RhoRule rule = RhoRule::StripWidth;
  WidthMethod method = WidthMethod::Auto;
  // Crossings with s_n below this arclength use the width at the threshold.
  double apex_threshold = 1.0;
};

struct RhoSequence {
  double psi_q = 0.0;
  double alpha = 0.0;
  std::int64_t q = 1;
  RhoRule rule = RhoRule::StripWidth;
  double apex_threshold = 0.0;
  std::vector<double> radii;         // radii[i] belongs to crossing n = i + 1
  std::vector<double> partial_sums;  // partial_sums[i] = rho_1 + ... + rho_{i+1}
  std::int64_t flagged = 0;          // crossings clamped to the apex threshold
};

// Horizontal half-chord at arclength s along L (see RhoRule::InnerChord).
std::optional<double> horizontal_half_chord(const StarBodyFn& f, double s, double level,
                                            WidthMethod method = WidthMethod::Auto);

// Radius for a single crossing at arclength s.
double rho_at(const StarBodyFn& f, double psi_q, double alpha, double s, const RhoOptions& options = {});

// rho_1..rho_count. Throws UnboundedWidthError when the width is unbounded at
// some crossing.
RhoSequence rho_sequence(const StarBodyFn& f, double psi_q, double alpha, std::int64_t q, std::int64_t count,
                         const RhoOptions& options = {});

struct DivergencePoint {
  std::int64_t n = 0;
  double partial_sum = 0.0;  // S_N
  double increment = 0.0;    // S_{10N} - S_N
};

struct DivergenceReport {
  std::vector<DivergencePoint> ladder;
  bool stable = false;     // increments agree within 5% of the largest
  bool diverging = false;  // increments positive and not shrinking
  std::string verdict() const { return diverging ? "diverging" : "converging"; }
};

// S_N and S_{10N} - S_N along the ladder. Needs partial sums up to 10 max(ladder).
DivergenceReport divergence_check(std::span<const double> partial_sums, std::span<const std::int64_t> ladder);
DivergenceReport divergence_check(const RhoSequence& rho, std::span<const std::int64_t> ladder);

// ---------------------------------------------------------------------------
// Coverage.

struct CoverageResult {
  std::int64_t parameter = 0;  // N (circle) or P (plane)
  double fraction = 0.0;
  std::int64_t sample_count = 0;
  std::string method;  // "grid", "mc", "exact"
  std::uint64_t seed = 0;
  std::optional<double> exact_fraction;
};

// Arcs (x_n, rho_n) for n = 1..n_max on the circle.
std::vector<Arc> circle_arcs(double alpha, double y0, const RhoSequence& rho, std::int64_t n_max);

// Fraction of `resolution` equally spaced circle points x with
// ||x - x_n|| < rho_n for some 1 <= n <= n_max, plus the exact union measure.
CoverageResult circle_coverage(double alpha, double y0, const RhoSequence& rho, std::int64_t n_max,
                               std::int64_t resolution);

// Exact union measure only.
double circle_coverage_exact(double alpha, double y0, const RhoSequence& rho, std::int64_t n_max);

// A circle hit at crossing n lifted back to the plane: point on the
// horizontal line y = 0 of [0,1)^2 and the lattice translate p generating the
// crossing, with F(point - p/q).
struct PlanarWitness {
  Vec2 point;
  std::array<std::int64_t, 2> lattice{0, 0};
  double distance = 0.0;
};

PlanarWitness lift_circle_hit(const StarBodyFn& f, double alpha, std::int64_t q, double y0, std::int64_t n, double x);

enum class SamplingMethod { Grid, MonteCarlo };

struct PlanarSampling {
  SamplingMethod method = SamplingMethod::Grid;
  std::int64_t resolution = 1024;  // grid points per side
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

std::string to_string(SamplingMethod method);

// Grid cell centres or seeded uniform samples in [0,1)^2.
std::vector<Vec2> sample_points(const PlanarSampling& sampling);

inline constexpr std::int64_t kNoHit = -1;

// Smallest P such that some p with |p|_inf <= P satisfies F(x - p/q) < psi_q,
// or kNoHit when none exists up to max_window. Each lattice row is solved in
// closed form and rows are visited by increasing |p2| with early exit.
std::int64_t min_window(const StarBodyFn& f, double psi_q, std::int64_t q, Vec2 x, std::int64_t max_window);

// Same quantity by direct evaluation of every p in the window.
std::int64_t min_window_bruteforce(const StarBodyFn& f, double psi_q, std::int64_t q, Vec2 x,
                                   std::int64_t max_window);

CoverageResult planar_coverage(const StarBodyFn& f, double psi_q, std::int64_t q, std::int64_t window,
                               const PlanarSampling& sampling);

// One pass over a fixed sample set for a whole ladder of windows.
std::vector<CoverageResult> planar_coverage_ladder(const StarBodyFn& f, double psi_q, std::int64_t q,
                                                   std::span<const std::int64_t> windows,
                                                   const PlanarSampling& sampling);

// Fraction of `resolution` points on the horizontal line y = height.
double line_coverage(const StarBodyFn& f, double psi_q, std::int64_t q, std::int64_t window, double height,
                     std::int64_t resolution);

struct SlopeContrast {
  std::vector<std::int64_t> windows;
  std::vector<CoverageResult> irrational;
  std::vector<CoverageResult> rational;
};

SlopeContrast slope_contrast(double psi_q, std::int64_t q, std::span<const std::int64_t> windows,
                             const StarBodyFn& irrational_body, const StarBodyFn& rational_body,
                             const PlanarSampling& sampling);

}  // namespace starbody
