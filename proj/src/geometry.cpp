#include "starbody/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "starbody/errors.hpp"

namespace starbody {

std::string to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::Height:
      return "height";
    case BodyKind::Multiplicative:
      return "multiplicative";
    case BodyKind::RotatedMultiplicative:
      return "rotated";
  }
  return "unknown";
}

std::optional<BodyKind> parse_body_kind(const std::string& text) {
  if (text == "height") return BodyKind::Height;
  if (text == "multiplicative") return BodyKind::Multiplicative;
  if (text == "rotated") return BodyKind::RotatedMultiplicative;
  return std::nullopt;
}

StarBodyFn::StarBodyFn(BodyKind kind, double slope, std::optional<Surd> exact)
    : kind_(kind), slope_(slope), exact_slope_(std::move(exact)) {
  if (kind_ == BodyKind::RotatedMultiplicative) {
    if (!std::isfinite(slope_) || slope_ <= 0.0) throw PreconditionError("slope must be a positive finite number");
    const double norm = std::hypot(1.0, slope_);
    u_ = {1.0 / norm, slope_ / norm};
    v_ = {-slope_ / norm, 1.0 / norm};
  }
}

StarBodyFn StarBodyFn::height() { return StarBodyFn(BodyKind::Height, 0.0, std::nullopt); }
StarBodyFn StarBodyFn::multiplicative() { return StarBodyFn(BodyKind::Multiplicative, 0.0, std::nullopt); }
StarBodyFn StarBodyFn::rotated(double slope) { return StarBodyFn(BodyKind::RotatedMultiplicative, slope, std::nullopt); }
StarBodyFn StarBodyFn::rotated(const Surd& slope) {
  return StarBodyFn(BodyKind::RotatedMultiplicative, static_cast<double>(slope.value()), slope);
}

std::optional<double> StarBodyFn::slope() const {
  if (kind_ == BodyKind::Height) return std::nullopt;
  return slope_;
}

Vec2 StarBodyFn::along() const {
  if (!has_half_line()) throw DomainError("height distance function has no zero half-line");
  return u_;
}

Vec2 StarBodyFn::across() const {
  if (!has_half_line()) throw DomainError("height distance function has no zero half-line");
  return v_;
}

double StarBodyFn::operator()(Vec2 x) const {
  switch (kind_) {
    case BodyKind::Height:
      return std::max(std::abs(x.x1), std::abs(x.x2));
    case BodyKind::Multiplicative:
      return std::sqrt(std::abs(x.x1) * std::abs(x.x2));
    case BodyKind::RotatedMultiplicative:
      return std::sqrt(std::abs(dot(u_, x)) * std::abs(dot(v_, x)));
  }
  return 0.0;
}

double eval_distance(const StarBodyFn& f, Vec2 x) {
  if (!std::isfinite(x.x1) || !std::isfinite(x.x2)) throw DomainError("eval_distance: non-finite coordinate");
  return f(x);
}

std::optional<double> level_crossing(const StarBodyFn& f, Vec2 origin, Vec2 direction, double level) {
  auto above = [&](double r) { return f(origin + r * direction) >= level; };

  constexpr int kScanSteps = 90;
  double lo = 0.0;
  double hi = -1.0;
  for (int j = kScanSteps; j >= 0; --j) {
    const double r = std::ldexp(kWidthSearchBound, -j);
    if (above(r)) {
      hi = r;
      break;
    }
    lo = r;
  }
  if (hi < 0.0) return std::nullopt;

  for (int iter = 0; iter < 400; ++iter) {
    const double gap = hi - lo;
    if (gap <= kWidthAbsTolerance && gap <= 1e-15 * hi) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (above(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

SideWidths side_widths(const StarBodyFn& f, double s, double level) {
  if (!(s > 0.0) || !(level > 0.0)) throw PreconditionError("side_widths requires s > 0 and level > 0");
  const Vec2 base = s * f.along();
  const Vec2 v = f.across();
  return {level_crossing(f, base, v, level), level_crossing(f, base, -1.0 * v, level)};
}

std::optional<double> halfwidth(const StarBodyFn& f, double s, double level, WidthMethod method) {
  if (!(s > 0.0) || !(level > 0.0)) throw PreconditionError("halfwidth requires s > 0 and level > 0");
  if (!f.has_half_line()) throw DomainError("halfwidth: height distance function has no zero half-line");
  if (method == WidthMethod::Auto) return level * level / s;
  const auto sides = side_widths(f, s, level);
  if (sides.upper && sides.lower) return std::min(*sides.upper, *sides.lower);
  return sides.upper ? sides.upper : sides.lower;
}

namespace {

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(ratio * i / (n - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace

ConditionReport check_conditions(const StarBodyFn& f, double s_min, double s_max, int n_samples,
                                 const ConditionOptions& options) {
  if (!(s_min > 0.0) || !(s_max > s_min)) throw PreconditionError("check_conditions requires 0 < s_min < s_max");
  if (n_samples < 2) throw PreconditionError("check_conditions requires n_samples >= 2");

  ConditionReport report;
  report.has_half_line = f.has_half_line();

  switch (f.kind()) {
    case BodyKind::Height:
      report.irrational_slope_found = false;
      report.slope_note = "zero set is {0}; no half-lines";
      return report;
    case BodyKind::Multiplicative:
      report.irrational_slope_found = false;
      report.slope_note = "zero half-lines are the coordinate axes (slopes 0 and infinity)";
      break;
    case BodyKind::RotatedMultiplicative:
      if (f.exact_slope()) {
        report.irrational_slope_found = f.exact_slope()->is_irrational();
        report.slope_note = report.irrational_slope_found ? "exact surd slope, irrational"
                                                          : "exact surd slope, rational";
      } else {
        report.irrational_slope_found = true;
        report.slope_note = "floating-point slope, irrational by declaration";
      }
      break;
  }

  const double level = options.level;
  const double cap = options.strip_radius;

  // infinite strip measure: truncated integrals along the cutoff ladder
  auto integrand = [&](double s) {
    if (s <= 0.0) return 2.0 * cap;
    const auto w = halfwidth(f, s, level, WidthMethod::RootFind);
    return 2.0 * std::min(cap, w.value_or(cap));
  };
  double running = 0.0;
  double previous_cutoff = 0.0;
  for (double cutoff : options.strip_cutoffs) {
    running += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, previous_cutoff, cutoff, 15,
                                                                               1e-10);
    report.strip_integrals.push_back({cutoff, running});
    previous_cutoff = cutoff;
  }
  std::vector<double> increments;
  for (std::size_t i = 1; i < report.strip_integrals.size(); ++i)
    increments.push_back(report.strip_integrals[i].integral - report.strip_integrals[i - 1].integral);
  if (!increments.empty()) {
    bool diverges = increments.front() > 0.0;
    for (std::size_t i = 1; i < increments.size(); ++i) diverges = diverges && increments[i] >= 0.9 * increments[i - 1];
    report.strip_measure_diverges = diverges;
    double mean = 0.0;
    for (double inc : increments) mean += inc;
    mean /= static_cast<double>(increments.size());
    report.strip_log_uniform =
        mean > 0.0 && std::all_of(increments.begin(), increments.end(),
                                  [&](double inc) { return std::abs(inc - mean) <= 0.1 * mean; });
  }

  // symmetry and decreasing width on the sample grid
  const auto grid = geometric_grid(s_min, s_max, n_samples);
  std::vector<std::optional<double>> widths;
  widths.reserve(grid.size());
  for (double s : grid) {
    const auto sides = side_widths(f, s, level);
    if (sides.upper && sides.lower) {
      report.symmetry_max_defect = std::max(report.symmetry_max_defect, std::abs(*sides.upper - *sides.lower));
      widths.push_back(std::min(*sides.upper, *sides.lower));
    } else {
      if (sides.upper || sides.lower) report.symmetry_max_defect = std::numeric_limits<double>::infinity();
      widths.push_back(sides.upper ? sides.upper : sides.lower);
    }
  }

  const std::size_t n = widths.size();
  if (widths[n - 1] && widths[n - 2] && *widths[n - 2] >= *widths[n - 1]) {
    std::size_t from = n - 1;
    while (from > 0 && widths[from - 1] && *widths[from - 1] >= *widths[from]) --from;
    report.width_monotone_from = grid[from];
  }
  report.width_strictly_decreasing = true;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!widths[i] || !widths[i + 1] || !(*widths[i] > *widths[i + 1])) {
      report.width_strictly_decreasing = false;
      break;
    }
  }
  return report;
}

}  // namespace starbody
