#include "noncross/kernels.hpp"

#include <algorithm>

namespace noncross {

namespace {

bool excused(const Polyline& c, std::size_t i, std::size_t j, const SegmentHit& h) {
  const std::size_t m = c.segment_count();
  const bool adjacent = j == i + 1 || (c.closed() && i == 0 && j == m - 1 && m > 2);
  if (!adjacent || h.kind != SegmentHit::Kind::point) return false;
  const Point2 shared = (j == i + 1) ? c.segment_end(i) : c.segment_start(i);
  return dist(h.point, shared) <= 1e-12 * (1.0 + norm(shared));
}

std::size_t contacts_of(const Polyline& c, std::size_t i) {
  std::size_t count = 0;
  for (std::size_t j = i + 1; j < c.segment_count(); ++j) {
    const SegmentHit h = segment_intersection(c.segment_start(i), c.segment_end(i), c.segment_start(j), c.segment_end(j));
    if (h.kind != SegmentHit::Kind::empty && !excused(c, i, j, h)) ++count;
  }
  return count;
}

}  // namespace

namespace serial {

std::vector<Point2> eval_batch(const PlanarMap& map, const std::vector<Point2>& pts, const Tolerances& tol) {
  std::vector<Point2> out(pts.size());
  serial_for(pts.size(), [&](std::size_t i) { out[i] = eval_extended(map, pts[i], tol); });
  return out;
}

double max_distance(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, dist(a[i], b[i]));
  return best;
}

std::size_t count_contacts(const Polyline& c) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < c.segment_count(); ++i) total += contacts_of(c, i);
  return total;
}

std::vector<int> winding_numbers(const Polyline& curve, const std::vector<Point2>& probes, double tau_on) {
  std::vector<int> out(probes.size());
  serial_for(probes.size(), [&](std::size_t i) { out[i] = winding_number(curve, probes[i], tau_on); });
  return out;
}

}  // namespace serial

namespace parallel {

std::vector<Point2> eval_batch(const PlanarMap& map, const std::vector<Point2>& pts, const Tolerances& tol) {
  std::vector<Point2> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { out[i] = eval_extended(map, pts[i], tol); });
  return out;
}

double max_distance(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  double best = 0.0;
  const long long n = static_cast<long long>(a.size());
#pragma omp parallel for reduction(max : best)
  for (long long i = 0; i < n; ++i) best = std::max(best, dist(a[i], b[i]));
  return best;
}

std::size_t count_contacts(const Polyline& c) {
  std::vector<std::size_t> per(c.segment_count());
  parallel_for(per.size(), [&](std::size_t i) { per[i] = contacts_of(c, i); });
  std::size_t total = 0;
  for (std::size_t v : per) total += v;
  return total;
}

std::vector<int> winding_numbers(const Polyline& curve, const std::vector<Point2>& probes, double tau_on) {
  std::vector<int> out(probes.size());
  parallel_for(probes.size(), [&](std::size_t i) { out[i] = winding_number(curve, probes[i], tau_on); });
  return out;
}

}  // namespace parallel

}  // namespace noncross
