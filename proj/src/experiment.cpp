#include "starbody/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "starbody/errors.hpp"
#include "starbody/parallel.hpp"
#include "starbody/random.hpp"

namespace starbody {
namespace {

void require_normalized(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.5)
    throw NormalizationError("slope alpha = " + std::to_string(alpha) +
                             " is below 1/2; exchange the roles of the axes before running");
}

void require_q(std::int64_t q) {
  if (q < 1) throw PreconditionError("q must be >= 1");
}

void require_matching_slope(const StarBodyFn& f, double alpha) {
  const auto slope = f.slope();
  if (!slope) throw DomainError("distance function has no zero half-line");
  if (std::abs(*slope - alpha) > 1e-12 * std::max(1.0, alpha))
    throw PreconditionError("alpha does not match the slope of the distance function's half-line");
}

double sin_of_slope(double alpha) { return alpha / std::hypot(1.0, alpha); }

}  // namespace

double crossing_arclength(double alpha, std::int64_t q, std::int64_t n) {
  return static_cast<double>(n) * std::sqrt(1.0 + 1.0 / (alpha * alpha)) / static_cast<double>(q);
}

CrossingSequence crossings(double alpha, std::int64_t q, double y0, std::int64_t count) {
  require_normalized(alpha);
  require_q(q);
  if (count < 1) throw PreconditionError("crossings requires N >= 1");
  CrossingSequence seq{alpha, q, y0, {}};
  seq.entries.reserve(static_cast<std::size_t>(count));
  const CircleOrbit orbit{y0, 1.0 / alpha, count};
  for (std::int64_t n = 0; n < count; ++n) seq.entries.push_back({n, orbit.point(n), crossing_arclength(alpha, q, n)});
  return seq;
}

std::string to_string(RhoRule rule) { return rule == RhoRule::StripWidth ? "strip" : "chord"; }

std::optional<double> horizontal_half_chord(const StarBodyFn& f, double s, double level, WidthMethod method) {
  if (!(s > 0.0) || !(level > 0.0)) throw PreconditionError("horizontal_half_chord requires s > 0 and level > 0");
  const Vec2 u = f.along();
  if (method == WidthMethod::Auto && f.kind() == BodyKind::RotatedMultiplicative) {
    // (s + d cos) d sin = level^2 on the far side; the near side is wider.
    const double sin_phi = u.x2;
    const double cos_phi = u.x1;
    const double l2 = level * level;
    return 2.0 * l2 / (s * sin_phi + std::sqrt(s * s * sin_phi * sin_phi + 4.0 * sin_phi * cos_phi * l2));
  }
  const Vec2 base = s * u;
  const auto right = level_crossing(f, base, {1.0, 0.0}, level);
  const auto left = level_crossing(f, base, {-1.0, 0.0}, level);
  if (right && left) return std::min(*right, *left);
  return right ? right : left;
}

double rho_at(const StarBodyFn& f, double psi_q, double alpha, double s, const RhoOptions& options) {
  const double s_eff = std::max(s, options.apex_threshold);
  std::optional<double> width;
  if (options.rule == RhoRule::StripWidth) {
    width = halfwidth(f, s_eff, psi_q, options.method);
    if (width) *width /= sin_of_slope(alpha);
  } else {
    width = horizontal_half_chord(f, s_eff, psi_q, options.method);
  }
  if (!width)
    throw UnboundedWidthError("width unbounded at s = " + std::to_string(s_eff) +
                              "; the decreasing-width condition fails here");
  return *width;
}

RhoSequence rho_sequence(const StarBodyFn& f, double psi_q, double alpha, std::int64_t q, std::int64_t count,
                         const RhoOptions& options) {
  require_normalized(alpha);
  require_q(q);
  require_matching_slope(f, alpha);
  if (!(psi_q > 0.0)) throw PreconditionError("psi_q must be > 0");
  if (count < 1) throw PreconditionError("rho_sequence requires N >= 1");
  if (!(options.apex_threshold > 0.0)) throw PreconditionError("apex threshold must be > 0");

  RhoSequence rho;
  rho.psi_q = psi_q;
  rho.alpha = alpha;
  rho.q = q;
  rho.rule = options.rule;
  rho.apex_threshold = options.apex_threshold;
  rho.radii.resize(static_cast<std::size_t>(count));
  rho.partial_sums.resize(static_cast<std::size_t>(count));

  double sum = 0.0;
  for (std::int64_t n = 1; n <= count; ++n) {
    const double s = crossing_arclength(alpha, q, n);
    if (s < options.apex_threshold) ++rho.flagged;
    const double r = rho_at(f, psi_q, alpha, s, options);
    sum += r;
    rho.radii[static_cast<std::size_t>(n - 1)] = r;
    rho.partial_sums[static_cast<std::size_t>(n - 1)] = sum;
  }
  return rho;
}

DivergenceReport divergence_check(std::span<const double> partial_sums, std::span<const std::int64_t> ladder) {
  if (!std::is_sorted(ladder.begin(), ladder.end()) || std::adjacent_find(ladder.begin(), ladder.end()) != ladder.end())
    throw PreconditionError("divergence ladder must be increasing");
  DivergenceReport report;
  for (std::int64_t n : ladder) {
    if (n < 1 || static_cast<std::size_t>(10 * n) > partial_sums.size())
      throw PreconditionError("divergence_check needs partial sums up to 10 N = " + std::to_string(10 * n));
    const double s_n = partial_sums[static_cast<std::size_t>(n - 1)];
    const double s_10n = partial_sums[static_cast<std::size_t>(10 * n - 1)];
    report.ladder.push_back({n, s_n, s_10n - s_n});
  }
  if (report.ladder.empty()) return report;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  bool diverging = true;
  for (std::size_t i = 0; i < report.ladder.size(); ++i) {
    const double inc = report.ladder[i].increment;
    lo = std::min(lo, inc);
    hi = std::max(hi, inc);
    if (!(inc > 0.0)) diverging = false;
    if (i > 0 && inc < 0.95 * report.ladder[i - 1].increment) diverging = false;
  }
  report.stable = hi > 0.0 && (hi - lo) <= 0.05 * hi;
  report.diverging = diverging;
  return report;
}

DivergenceReport divergence_check(const RhoSequence& rho, std::span<const std::int64_t> ladder) {
  return divergence_check(std::span<const double>(rho.partial_sums), ladder);
}

std::vector<Arc> circle_arcs(double alpha, double y0, const RhoSequence& rho, std::int64_t n_max) {
  if (n_max < 0 || static_cast<std::size_t>(n_max) > rho.radii.size())
    throw PreconditionError("circle coverage window exceeds the computed radii");
  const CircleOrbit orbit{y0, 1.0 / alpha, n_max + 1};
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) arcs.push_back({orbit.point(n), rho.radii[static_cast<std::size_t>(n - 1)]});
  return arcs;
}

double circle_coverage_exact(double alpha, double y0, const RhoSequence& rho, std::int64_t n_max) {
  const auto arcs = circle_arcs(alpha, y0, rho, n_max);
  return union_measure(IntervalUnion(arcs));
}

CoverageResult circle_coverage(double alpha, double y0, const RhoSequence& rho, std::int64_t n_max,
                               std::int64_t resolution) {
  if (resolution < 1000) throw PreconditionError("circle coverage resolution must be >= 1000");
  const auto arcs = circle_arcs(alpha, y0, rho, n_max);

  // Grid path: each arc marks the grid points it covers, checked against the
  // circle inequality directly.
  std::vector<char> hit(static_cast<std::size_t>(resolution), 0);
  const double res = static_cast<double>(resolution);
  for (const auto& arc : arcs) {
    if (arc.half_length >= 0.5) {
      std::fill(hit.begin(), hit.end(), 1);
      break;
    }
    const auto first = static_cast<std::int64_t>(std::floor((arc.center - arc.half_length) * res));
    const auto last = static_cast<std::int64_t>(std::ceil((arc.center + arc.half_length) * res));
    for (std::int64_t i = first; i <= last; ++i) {
      const std::int64_t idx = ((i % resolution) + resolution) % resolution;
      const double x = static_cast<double>(idx) / res;
      if (circle_dist(x, arc.center) < arc.half_length) hit[static_cast<std::size_t>(idx)] = 1;
    }
  }
  const auto covered = std::count(hit.begin(), hit.end(), char{1});

  CoverageResult out;
  out.parameter = n_max;
  out.fraction = static_cast<double>(covered) / res;
  out.sample_count = resolution;
  out.method = "grid";
  out.exact_fraction = union_measure(IntervalUnion(arcs));
  return out;
}

PlanarWitness lift_circle_hit(const StarBodyFn& f, double alpha, std::int64_t q, double y0, std::int64_t n, double x) {
  require_normalized(alpha);
  require_q(q);
  if (n < 1) throw PreconditionError("lift_circle_hit requires n >= 1");
  const double beta = 1.0 / alpha;
  const CircleOrbit orbit{y0, beta, n + 1};
  const double d = circle_diff(x, orbit.point(n));

  // Scaled picture: apex (-floor(n/alpha), -n), crossing at X = frac(n/alpha).
  const double nb = static_cast<double>(n) * beta;
  const double nb_residual = std::fma(static_cast<double>(n), beta, -nb);
  const auto whole = static_cast<std::int64_t>(std::floor(nb));
  const double scaled_x = (nb - static_cast<double>(whole)) + (nb_residual + d);
  const double qd = static_cast<double>(q);
  const double wrapped = scaled_x - qd * std::floor(scaled_x / qd);
  const auto shift = static_cast<std::int64_t>(std::llround(wrapped - scaled_x));

  PlanarWitness w;
  w.point = {wrapped / qd, 0.0};
  w.lattice = {shift - whole, -n};
  const Vec2 offset{w.point.x1 - static_cast<double>(w.lattice[0]) / qd,
                    w.point.x2 - static_cast<double>(w.lattice[1]) / qd};
  w.distance = eval_distance(f, offset);
  return w;
}

std::string to_string(SamplingMethod method) { return method == SamplingMethod::Grid ? "grid" : "mc"; }

std::vector<Vec2> sample_points(const PlanarSampling& sampling) {
  std::vector<Vec2> pts;
  if (sampling.method == SamplingMethod::Grid) {
    if (sampling.resolution < 1) throw PreconditionError("grid resolution must be >= 1");
    const double res = static_cast<double>(sampling.resolution);
    pts.reserve(static_cast<std::size_t>(sampling.resolution * sampling.resolution));
    for (std::int64_t j = 0; j < sampling.resolution; ++j)
      for (std::int64_t i = 0; i < sampling.resolution; ++i)
        pts.push_back({(static_cast<double>(i) + 0.5) / res, (static_cast<double>(j) + 0.5) / res});
  } else {
    if (sampling.samples < 1) throw PreconditionError("Monte Carlo sample count must be >= 1");
    Rng rng(sampling.seed);
    pts.reserve(static_cast<std::size_t>(sampling.samples));
    for (std::int64_t i = 0; i < sampling.samples; ++i) {
      const double a = rng.uniform();
      const double b = rng.uniform();
      pts.push_back({a, b});
    }
  }
  return pts;
}

namespace {

struct Interval {
  double lo;
  double hi;
};

// At most two disjoint pieces per quadratic inequality, four after intersecting.
template <std::size_t N>
struct Pieces {
  std::array<Interval, N> items{};
  std::size_t size = 0;

  void push(Interval iv) { items[size++] = iv; }
  const Interval* begin() const { return items.data(); }
  const Interval* end() const { return items.data() + size; }
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// {t : k t^2 + m t + c < 0}
Pieces<2> quadratic_below_zero(double k, double m, double c) {
  Pieces<2> out;
  if (k == 0.0) {
    if (m == 0.0) {
      if (c < 0.0) out.push({-kInf, kInf});
      return out;
    }
    const double root = -c / m;
    out.push(m > 0.0 ? Interval{-kInf, root} : Interval{root, kInf});
    return out;
  }
  const double disc = m * m - 4.0 * k * c;
  if (disc <= 0.0) {
    if (k < 0.0) out.push({-kInf, kInf});
    return out;
  }
  const double sq = std::sqrt(disc);
  const double h = -0.5 * (m + std::copysign(sq, m));
  double r1 = h / k;
  double r2 = h != 0.0 ? c / h : -r1;
  if (r1 > r2) std::swap(r1, r2);
  if (k > 0.0) {
    out.push({r1, r2});
  } else {
    out.push({-kInf, r1});
    out.push({r2, kInf});
  }
  return out;
}

Pieces<4> intersect(const Pieces<2>& a, const Pieces<2>& b) {
  Pieces<4> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      const double lo = std::max(x.lo, y.lo);
      const double hi = std::min(x.hi, y.hi);
      if (hi > lo) out.push({lo, hi});
    }
  return out;
}

// Horizontal offsets t with F((t, w2)) < level.
Pieces<4> row_solution(const StarBodyFn& f, double w2, double level) {
  if (f.kind() == BodyKind::Height) {
    Pieces<4> out;
    if (std::abs(w2) < level) out.push({-level, level});
    return out;
  }
  // |(A t + a)(B t + b)| < level^2
  const Vec2 u = f.along();
  const Vec2 v = f.across();
  const double big_a = u.x1, small_a = u.x2 * w2;
  const double big_b = v.x1, small_b = v.x2 * w2;
  const double k = big_a * big_b;
  const double m = big_a * small_b + small_a * big_b;
  const double c0 = small_a * small_b;
  const double l2 = level * level;
  return intersect(quadratic_below_zero(k, m, c0 - l2), quadratic_below_zero(-k, -m, -c0 - l2));
}

}  // namespace

std::int64_t min_window(const StarBodyFn& f, double psi_q, std::int64_t q, Vec2 x, std::int64_t max_window) {
  const double qd = static_cast<double>(q);
  std::int64_t best = kNoHit;
  for (std::int64_t a = 0; a <= max_window; ++a) {
    if (best != kNoHit && a >= best) break;
    for (int sign : {1, -1}) {
      if (a == 0 && sign < 0) continue;
      const std::int64_t p2 = sign * a;
      const double w2 = x.x2 - static_cast<double>(p2) / qd;
      for (const auto& iv : row_solution(f, w2, psi_q)) {
        // t = x1 - p1/q in (lo, hi)  <=>  p1 in (q (x1 - hi), q (x1 - lo))
        const double p_lo = std::max(qd * (x.x1 - iv.hi), -static_cast<double>(max_window) - 1.0);
        const double p_hi = std::min(qd * (x.x1 - iv.lo), static_cast<double>(max_window) + 1.0);
        const auto first = static_cast<std::int64_t>(std::floor(p_lo)) + 1;
        const auto last = static_cast<std::int64_t>(std::ceil(p_hi)) - 1;
        if (first > last) continue;
        const std::int64_t nearest = (first <= 0 && last >= 0) ? 0 : std::min(std::abs(first), std::abs(last));
        if (nearest > max_window) continue;
        const std::int64_t window = std::max(a, nearest);
        if (best == kNoHit || window < best) best = window;
      }
    }
  }
  return best;
}

std::int64_t min_window_bruteforce(const StarBodyFn& f, double psi_q, std::int64_t q, Vec2 x,
                                   std::int64_t max_window) {
  const double qd = static_cast<double>(q);
  for (std::int64_t w = 0; w <= max_window; ++w) {
    for (std::int64_t p1 = -w; p1 <= w; ++p1)
      for (std::int64_t p2 = -w; p2 <= w; ++p2) {
        if (std::max(std::abs(p1), std::abs(p2)) != w) continue;
        const Vec2 d{x.x1 - static_cast<double>(p1) / qd, x.x2 - static_cast<double>(p2) / qd};
        if (eval_distance(f, d) < psi_q) return w;
      }
  }
  return kNoHit;
}

std::vector<CoverageResult> planar_coverage_ladder(const StarBodyFn& f, double psi_q, std::int64_t q,
                                                   std::span<const std::int64_t> windows,
                                                   const PlanarSampling& sampling) {
  require_q(q);
  if (!(psi_q > 0.0)) throw PreconditionError("psi_q must be > 0");
  if (windows.empty()) throw PreconditionError("window ladder is empty");
  for (auto w : windows)
    if (w < 0) throw PreconditionError("window P must be >= 0");
  const std::int64_t max_window = *std::max_element(windows.begin(), windows.end());

  const auto pts = sample_points(sampling);
  std::vector<std::int64_t> first_hit(pts.size());
  parallel_for(pts.size(), sampling.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) first_hit[i] = min_window(f, psi_q, q, pts[i], max_window);
  });

  std::vector<CoverageResult> out;
  for (auto w : windows) {
    const auto covered =
        std::count_if(first_hit.begin(), first_hit.end(), [w](std::int64_t h) { return h != kNoHit && h <= w; });
    CoverageResult r;
    r.parameter = w;
    r.sample_count = static_cast<std::int64_t>(pts.size());
    r.fraction = static_cast<double>(covered) / static_cast<double>(pts.size());
    r.method = to_string(sampling.method);
    r.seed = sampling.method == SamplingMethod::Grid ? 0 : sampling.seed;
    out.push_back(std::move(r));
  }
  return out;
}

CoverageResult planar_coverage(const StarBodyFn& f, double psi_q, std::int64_t q, std::int64_t window,
                               const PlanarSampling& sampling) {
  const std::int64_t ladder[] = {window};
  return planar_coverage_ladder(f, psi_q, q, ladder, sampling).front();
}

double line_coverage(const StarBodyFn& f, double psi_q, std::int64_t q, std::int64_t window, double height,
                     std::int64_t resolution) {
  if (resolution < 1) throw PreconditionError("line resolution must be >= 1");
  std::int64_t covered = 0;
  const double res = static_cast<double>(resolution);
  for (std::int64_t i = 0; i < resolution; ++i) {
    const std::int64_t hit = min_window(f, psi_q, q, {(static_cast<double>(i) + 0.5) / res, height}, window);
    if (hit != kNoHit) ++covered;
  }
  return static_cast<double>(covered) / res;
}

SlopeContrast slope_contrast(double psi_q, std::int64_t q, std::span<const std::int64_t> windows,
                             const StarBodyFn& irrational_body, const StarBodyFn& rational_body,
                             const PlanarSampling& sampling) {
  for (const auto* body : {&irrational_body, &rational_body}) {
    if (body->kind() != BodyKind::RotatedMultiplicative)
      throw PreconditionError("slope contrast compares rotated multiplicative bodies");
    require_normalized(*body->slope());
  }
  SlopeContrast out;
  out.windows.assign(windows.begin(), windows.end());
  out.irrational = planar_coverage_ladder(irrational_body, psi_q, q, windows, sampling);
  out.rational = planar_coverage_ladder(rational_body, psi_q, q, windows, sampling);
  return out;
}

}  // namespace starbody
