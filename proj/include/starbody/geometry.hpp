#pragma once

#include <optional>
#include <string>
#include <vector>

#include "starbody/surd.hpp"

namespace starbody {

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend constexpr Vec2 operator*(double t, Vec2 a) { return {t * a.x1, t * a.x2}; }
  friend constexpr double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

enum class BodyKind { Height, Multiplicative, RotatedMultiplicative };

std::string to_string(BodyKind kind);
std::optional<BodyKind> parse_body_kind(const std::string& text);

// Distance function of a planar star body.
//
//   Height                 max(|x1|, |x2|)
//   Multiplicative         sqrt(|x1 x2|)
//   RotatedMultiplicative  sqrt(|u.x| |v.x|), u = (1, alpha)/|(1, alpha)|, v = u rotated by +90 deg
//
// The distinguished half-line L is {s u : s >= 0}. For Multiplicative it is
// the positive x1 axis; Height has no zero half-lines at all.
class StarBodyFn {
 public:
  static StarBodyFn height();
  static StarBodyFn multiplicative();
  // A float slope is irrational by declaration only.
  static StarBodyFn rotated(double slope);
  static StarBodyFn rotated(const Surd& slope);

  BodyKind kind() const { return kind_; }
  // Slope of L: 0 for Multiplicative, unset for Height.
  std::optional<double> slope() const;
  const std::optional<Surd>& exact_slope() const { return exact_slope_; }
  bool has_half_line() const { return kind_ != BodyKind::Height; }

  // Unit vectors along L and its positive orthogonal. Throws DomainError
  // for Height.
  Vec2 along() const;
  Vec2 across() const;

  double operator()(Vec2 x) const;

 private:
  StarBodyFn(BodyKind kind, double slope, std::optional<Surd> exact);

  BodyKind kind_;
  double slope_ = 0.0;
  std::optional<Surd> exact_slope_;
  Vec2 u_{1.0, 0.0};
  Vec2 v_{0.0, 1.0};
};

// Throws DomainError for non-finite input.
double eval_distance(const StarBodyFn& f, Vec2 x);

enum class WidthMethod { Auto, RootFind };

// Search contract for level-curve crossings along a ray.
inline constexpr double kWidthSearchBound = 1e6;
inline constexpr double kWidthAbsTolerance = 1e-12;

// Distance from `origin` along the unit `direction` to the first point where
// F reaches `level`. Geometric bracketing scan followed by bisection; nullopt
// when no crossing exists within kWidthSearchBound.
std::optional<double> level_crossing(const StarBodyFn& f, Vec2 origin, Vec2 direction, double level);

// Distance from the point at arclength s along L to the nearest point of the
// level curve F = level on the line orthogonal to L. nullopt means unbounded
// width at this s. RotatedMultiplicative and Multiplicative take the closed
// form level^2 / s under WidthMethod::Auto.
std::optional<double> halfwidth(const StarBodyFn& f, double s, double level, WidthMethod method = WidthMethod::Auto);

// Crossing distances above (+across) and below (-across) L at arclength s.
struct SideWidths {
  std::optional<double> upper;
  std::optional<double> lower;
};
SideWidths side_widths(const StarBodyFn& f, double s, double level);

struct StripSample {
  double cutoff = 0.0;    // S
  double integral = 0.0;  // integral over [0, S] of 2 min(M, halfwidth(s)) ds
};

struct ConditionReport {
  bool has_half_line = false;
  bool irrational_slope_found = false;
  std::string slope_note;

  std::vector<StripSample> strip_integrals;
  bool strip_measure_diverges = false;
  // Increments between consecutive cutoffs agree within 10% of their mean.
  bool strip_log_uniform = false;

  double symmetry_max_defect = 0.0;

  // Smallest sampled s from which halfwidth is non-increasing; nullopt if the
  // width increases at the end of the grid or is unbounded there.
  std::optional<double> width_monotone_from;
  bool width_strictly_decreasing = false;
};

struct ConditionOptions {
  double level = 1.0;
  double strip_radius = 1.0;  // M
  std::vector<double> strip_cutoffs{1e1, 1e2, 1e3, 1e4};
};

// Numerical verification of the four structural conditions on F over the
// sample grid s in [s_min, s_max] (geometric spacing, n_samples points).
ConditionReport check_conditions(const StarBodyFn& f, double s_min, double s_max, int n_samples,
                                 const ConditionOptions& options = {});

}  // namespace starbody
