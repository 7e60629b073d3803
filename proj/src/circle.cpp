#include "starbody/circle.hpp"

#include <algorithm>
#include <cmath>

#include "starbody/errors.hpp"

namespace starbody {

double frac(double x) {
  const double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double circle_dist(double x, double y) {
  const double f = frac(x - y);
  return std::min(f, 1.0 - f);
}

double circle_diff(double x, double y) { return frac(x - y + 0.5) - 0.5; }

double CircleOrbit::point(std::int64_t n) const {
  const double m = static_cast<double>(n);
  const double hi = m * beta;
  const double lo = std::fma(m, beta, -hi);
  return frac(frac(hi) + (lo + y0));
}

std::vector<double> orbit_points(const CircleOrbit& orbit) {
  if (orbit.count < 1) throw PreconditionError("orbit_points requires count >= 1");
  std::vector<double> points(static_cast<std::size_t>(orbit.count));
  for (std::int64_t n = 0; n < orbit.count; ++n) points[static_cast<std::size_t>(n)] = orbit.point(n);
  return points;
}

double GapStructure::total_length() const {
  double total = 0.0;
  for (const auto& g : distinct_gaps) total += g.length * static_cast<double>(g.multiplicity);
  return total;
}

GapStructure gap_structure(std::span<const double> points, double clustering_epsilon) {
  if (points.empty()) throw PreconditionError("gap_structure requires at least one point");
  if (!(clustering_epsilon >= 0.0)) throw PreconditionError("clustering_epsilon must be >= 0");

  std::vector<double> sorted(points.size());
  std::transform(points.begin(), points.end(), sorted.begin(), [](double p) { return frac(p); });
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> gaps;
  gaps.reserve(sorted.size());
  for (std::size_t i = 1; i < sorted.size(); ++i) gaps.push_back(sorted[i] - sorted[i - 1]);
  gaps.push_back(1.0 - sorted.back() + sorted.front());
  std::sort(gaps.begin(), gaps.end(), std::greater<>());

  GapStructure out;
  out.clustering_epsilon = clustering_epsilon;
  double sum = 0.0;
  std::int64_t count = 0;
  auto flush = [&] {
    out.distinct_gaps.push_back({sum / static_cast<double>(count), count});
    sum = 0.0;
    count = 0;
  };
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (count > 0 && gaps[i - 1] - gaps[i] > clustering_epsilon) flush();
    sum += gaps[i];
    ++count;
  }
  flush();
  out.has_duplicate_points = sorted.size() > 1 && out.distinct_gaps.back().length <= clustering_epsilon;
  return out;
}

GapStructure rational_orbit_gaps(std::int64_t p, std::int64_t q, std::int64_t count) {
  if (q < 1 || count < 1) throw PreconditionError("rational_orbit_gaps requires q >= 1 and count >= 1");
  std::vector<std::int64_t> residues(static_cast<std::size_t>(count));
  for (std::int64_t n = 0; n < count; ++n) {
    const __int128 r = (static_cast<__int128>(n) * p) % q;
    residues[static_cast<std::size_t>(n)] = static_cast<std::int64_t>(r < 0 ? r + q : r);
  }
  std::sort(residues.begin(), residues.end());
  std::vector<std::int64_t> gaps;
  for (std::size_t i = 1; i < residues.size(); ++i) gaps.push_back(residues[i] - residues[i - 1]);
  gaps.push_back(q - residues.back() + residues.front());
  std::sort(gaps.begin(), gaps.end(), std::greater<>());

  GapStructure out;
  for (std::size_t i = 0; i < gaps.size();) {
    std::size_t j = i;
    while (j < gaps.size() && gaps[j] == gaps[i]) ++j;
    out.distinct_gaps.push_back(
        {static_cast<double>(gaps[i]) / static_cast<double>(q), static_cast<std::int64_t>(j - i)});
    i = j;
  }
  out.has_duplicate_points = residues.size() > 1 && gaps.back() == 0;
  return out;
}

namespace {

using Segment = IntervalUnion::Segment;

void append_arc(std::vector<Segment>& out, Arc arc) {
  if (!(arc.half_length > 0.0)) return;
  if (arc.half_length >= 0.5) {
    out.push_back({0.0, 1.0});
    return;
  }
  const double c = frac(arc.center);
  const double lo = c - arc.half_length;
  const double hi = c + arc.half_length;
  if (lo < 0.0) {
    out.push_back({lo + 1.0, 1.0});
    out.push_back({0.0, hi});
  } else if (hi > 1.0) {
    out.push_back({lo, 1.0});
    out.push_back({0.0, hi - 1.0});
  } else {
    out.push_back({lo, hi});
  }
}

std::vector<Segment> normalize(std::vector<Segment> segments) {
  for (auto& s : segments) {
    s.lo = std::clamp(s.lo, 0.0, 1.0);
    s.hi = std::clamp(s.hi, 0.0, 1.0);
  }
  std::erase_if(segments, [](const Segment& s) { return !(s.hi > s.lo); });
  std::sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  std::vector<Segment> merged;
  merged.reserve(segments.size());
  for (const auto& s : segments) {
    if (!merged.empty() && s.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, s.hi);
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

}  // namespace

IntervalUnion::IntervalUnion(std::span<const Arc> arcs) {
  std::vector<Segment> raw;
  raw.reserve(arcs.size() + 2);
  for (const auto& arc : arcs) append_arc(raw, arc);
  segments_ = normalize(std::move(raw));
}

IntervalUnion IntervalUnion::full() { return from_segments({{0.0, 1.0}}); }

IntervalUnion IntervalUnion::from_segments(std::vector<Segment> segments) {
  IntervalUnion u;
  u.segments_ = normalize(std::move(segments));
  return u;
}

std::vector<Arc> IntervalUnion::arcs() const {
  std::vector<Arc> out;
  out.reserve(segments_.size());
  for (const auto& s : segments_) out.push_back({0.5 * (s.lo + s.hi), 0.5 * (s.hi - s.lo)});
  return out;
}

bool IntervalUnion::contains(double x) const {
  x = frac(x);
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](double value, const Segment& s) { return value < s.lo; });
  if (it != segments_.begin() && x < std::prev(it)->hi && x > std::prev(it)->lo) return true;
  // 0 is interior when the union wraps through it
  return x == 0.0 && !segments_.empty() && segments_.front().lo == 0.0 && segments_.back().hi == 1.0;
}

double union_measure(const IntervalUnion& u) {
  double total = 0.0;
  for (const auto& s : u.segments()) total += s.hi - s.lo;
  return std::min(total, 1.0);
}

IntervalUnion intersect_with_interval(const IntervalUnion& u, Arc interval) {
  if (!(interval.half_length > 0.0) || interval.half_length > 0.5)
    throw PreconditionError("interval half-length must lie in (0, 1/2]");
  std::vector<Segment> window;
  append_arc(window, interval);
  window = normalize(std::move(window));

  std::vector<Segment> out;
  const auto& segs = u.segments();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < segs.size() && j < window.size()) {
    const double lo = std::max(segs[i].lo, window[j].lo);
    const double hi = std::min(segs[i].hi, window[j].hi);
    if (hi > lo) out.push_back({lo, hi});
    (segs[i].hi < window[j].hi) ? ++i : ++j;
  }
  return IntervalUnion::from_segments(std::move(out));
}

}  // namespace starbody
