#include "noncross/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace noncross {

Polyline::Polyline(std::vector<Point2> vertices, bool closed) : vertices_(std::move(vertices)), closed_(closed) {
  if (vertices_.size() < 2) throw Error("degenerate-polyline", "a polyline needs at least two vertices");
  arc_.reserve(vertices_.size() + 1);
  arc_.push_back(0.0);
  for (std::size_t i = 0; i < segment_count(); ++i) {
    if (!is_finite(segment_start(i))) throw Error("degenerate-polyline", "non-finite vertex");
    const double d = dist(segment_start(i), segment_end(i));
    if (!(d > 1e-12)) throw Error("degenerate-polyline", "consecutive vertices coincide");
    arc_.push_back(arc_.back() + d);
  }
}

Point2 Polyline::at_fraction(double f) const {
  const double s = std::clamp(f, 0.0, 1.0) * length();
  auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
  std::size_t i = it == arc_.begin() ? 0 : static_cast<std::size_t>(it - arc_.begin()) - 1;
  if (i >= segment_count()) return closed_ ? vertices_.front() : vertices_.back();
  const double len = arc_[i + 1] - arc_[i];
  return lerp(segment_start(i), segment_end(i), (s - arc_[i]) / len);
}

std::vector<Point2> dedupe_vertices(const std::vector<Point2>& pts, bool closed, double gap) {
  std::vector<Point2> out;
  for (Point2 p : pts) {
    if (out.empty() || dist(out.back(), p) > gap) out.push_back(p);
  }
  while (closed && out.size() > 1 && dist(out.front(), out.back()) <= gap) out.pop_back();
  return out;
}

double distance_to_polyline(const Polyline& c, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.segment_count(); ++i) {
    best = std::min(best, point_segment_distance(p, c.segment_start(i), c.segment_end(i)));
  }
  return best;
}

double winding_turns(const Polyline& curve, Point2 p) {
  const auto& v = curve.vertices();
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i] - p;
    const Point2 b = v[(i + 1) % v.size()] - p;
    total += std::atan2(cross(a, b), dot(a, b));
  }
  return total / (2.0 * kPi);
}

int winding_number(const Polyline& curve, Point2 p, double tau_on, double residual) {
  if (distance_to_polyline(curve, p) <= tau_on) throw Error("on-curve", "probe lies on the curve");
  const double w = winding_turns(curve, p);
  const double n = std::round(w);
  if (std::abs(w - n) >= residual) throw Error("winding-residual", "angle sum is not an integer number of turns");
  return static_cast<int>(n);
}

namespace {

int sign_of(double v, double eps) { return v > eps ? 1 : (v < -eps ? -1 : 0); }

}  // namespace

SegmentHit segment_intersection(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
  SegmentHit hit;
  const Point2 da = a1 - a0, db = b1 - b0;
  const double la = norm(da), lb = norm(db);
  const double scale = std::max({la, lb, 1e-300});
  const double eps_o = 1e-12 * std::max(la, 1e-300) * std::max(lb, 1e-300);
  const double eps_p = 1e-12 * scale;
  if (std::max(a0.x, a1.x) < std::min(b0.x, b1.x) - eps_p || std::max(b0.x, b1.x) < std::min(a0.x, a1.x) - eps_p ||
      std::max(a0.y, a1.y) < std::min(b0.y, b1.y) - eps_p || std::max(b0.y, b1.y) < std::min(a0.y, a1.y) - eps_p) {
    return hit;
  }
  const int s1 = sign_of(cross(db, a0 - b0), eps_o);
  const int s2 = sign_of(cross(db, a1 - b0), eps_o);
  const int s3 = sign_of(cross(da, b0 - a0), eps_o);
  const int s4 = sign_of(cross(da, b1 - a0), eps_o);
  auto finish_point = [&](Point2 p, double ta, double tb) {
    hit.kind = SegmentHit::Kind::point;
    hit.point = p;
    hit.ta = ta;
    hit.tb = tb;
    hit.endpoint_shared = (ta <= 1e-12 || ta >= 1 - 1e-12) && (tb <= 1e-12 || tb >= 1 - 1e-12);
    return hit;
  };
  auto param_on = [](Point2 s0, Point2 d, Point2 p) { return std::clamp(dot(p - s0, d) / dot(d, d), 0.0, 1.0); };

  if (s1 == 0 && s2 == 0 && s3 == 0 && s4 == 0) {
    // Collinear: compare projections on the direction of a.
    const Point2 dir = la >= lb ? da : db;
    const Point2 o = la >= lb ? a0 : b0;
    const double d2 = dot(dir, dir);
    double pa0 = dot(a0 - o, dir) / d2, pa1 = dot(a1 - o, dir) / d2;
    double pb0 = dot(b0 - o, dir) / d2, pb1 = dot(b1 - o, dir) / d2;
    const double lo = std::max(std::min(pa0, pa1), std::min(pb0, pb1));
    const double hi = std::min(std::max(pa0, pa1), std::max(pb0, pb1));
    const double tol = 1e-12;
    if (hi < lo - tol) return hit;
    const Point2 p = o + lo * dir;
    if (hi - lo <= tol) return finish_point(p, param_on(a0, da, p), param_on(b0, db, p));
    hit.kind = SegmentHit::Kind::overlap;
    hit.point = p;
    hit.ta = param_on(a0, da, p);
    hit.tb = param_on(b0, db, p);
    return hit;
  }
  if (s1 * s2 < 0 && s3 * s4 < 0) {
    const double t = cross(b0 - a0, db) / cross(da, db);
    const double u = cross(b0 - a0, da) / cross(da, db);
    return finish_point(a0 + t * da, t, u);
  }
  // Touching configurations: an endpoint lies on the other segment.
  const double eps_d = 1e-12 * scale;
  if (s1 == 0 && point_segment_distance(a0, b0, b1) <= eps_d) return finish_point(a0, 0.0, param_on(b0, db, a0));
  if (s2 == 0 && point_segment_distance(a1, b0, b1) <= eps_d) return finish_point(a1, 1.0, param_on(b0, db, a1));
  if (s3 == 0 && point_segment_distance(b0, a0, a1) <= eps_d) return finish_point(b0, param_on(a0, da, b0), 0.0);
  if (s4 == 0 && point_segment_distance(b1, a0, a1) <= eps_d) return finish_point(b1, param_on(a0, da, b1), 1.0);
  return hit;
}

std::optional<Crossing> find_crossing(const std::vector<Segment2>& segs,
                                      const std::function<bool(std::size_t, std::size_t, const SegmentHit&)>& allowed) {
  const std::size_t n = segs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto xmin = [&](std::size_t i) { return std::min(segs[i].a.x, segs[i].b.x); };
  auto xmax = [&](std::size_t i) { return std::max(segs[i].a.x, segs[i].b.x); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return xmin(l) < xmin(r); });

  std::optional<Crossing> best;
  auto consider = [&](std::size_t i, std::size_t j, const SegmentHit& h) {
    if (i > j) std::swap(i, j);
    if (allowed && allowed(i, j, h)) return;
    if (!best || std::tie(i, j) < std::tie(best->i, best->j)) best = Crossing{i, j, h.point};
  };
  std::vector<std::size_t> active;
  for (std::size_t idx : order) {
    const double x0 = xmin(idx);
    const double slack = 1e-12 * (1.0 + std::abs(x0));
    active.erase(std::remove_if(active.begin(), active.end(), [&](std::size_t a) { return xmax(a) < x0 - slack; }),
                 active.end());
    const double ylo = std::min(segs[idx].a.y, segs[idx].b.y);
    const double yhi = std::max(segs[idx].a.y, segs[idx].b.y);
    for (std::size_t a : active) {
      const double alo = std::min(segs[a].a.y, segs[a].b.y);
      const double ahi = std::max(segs[a].a.y, segs[a].b.y);
      if (ahi < ylo - slack || yhi < alo - slack) continue;
      const SegmentHit h = segment_intersection(segs[a].a, segs[a].b, segs[idx].a, segs[idx].b);
      if (h.kind != SegmentHit::Kind::empty) consider(a, idx, h);
    }
    active.push_back(idx);
  }
  return best;
}

std::optional<Crossing> polyline_self_intersects(const Polyline& c, bool ignore_adjacent) {
  const std::size_t m = c.segment_count();
  std::vector<Segment2> segs(m);
  for (std::size_t i = 0; i < m; ++i) segs[i] = {c.segment_start(i), c.segment_end(i)};
  auto adjacent = [&](std::size_t i, std::size_t j) {
    return j == i + 1 || (c.closed() && i == 0 && j == m - 1 && m > 2);
  };
  return find_crossing(segs, [&](std::size_t i, std::size_t j, const SegmentHit& h) {
    if (!ignore_adjacent || !adjacent(i, j) || h.kind != SegmentHit::Kind::point) return false;
    // The shared vertex: end of i meeting start of j (or the closing vertex).
    const Point2 shared = (j == i + 1) ? c.segment_end(i) : c.segment_start(i);
    return dist(h.point, shared) <= 1e-12 * (1.0 + norm(shared));
  });
}

double boundary_parameter(const Rect& r, Point2 p, double tol) {
  const double w = r.width(), h = r.height();
  if (!r.contains(p, tol)) throw Error("not-on-boundary", "point outside the rectangle");
  const double db = std::abs(p.y - r.y_lo), dr = std::abs(p.x - r.x_hi);
  const double dt = std::abs(p.y - r.y_hi), dl = std::abs(p.x - r.x_lo);
  const double m = std::min({db, dr, dt, dl});
  if (m > tol) throw Error("not-on-boundary", "point is interior to the rectangle");
  if (db == m && p.x < r.x_hi) return std::clamp(p.x - r.x_lo, 0.0, w);
  if (dr == m && p.y < r.y_hi) return w + std::clamp(p.y - r.y_lo, 0.0, h);
  if (dt == m && p.x > r.x_lo) return w + h + std::clamp(r.x_hi - p.x, 0.0, w);
  if (dl == m && p.y > r.y_lo) return 2 * w + h + std::clamp(r.y_hi - p.y, 0.0, h);
  // Corners reached through the tie-breaks above.
  if (db == m) return w;
  if (dr == m) return w + h;
  if (dt == m) return 2 * w + h;
  return 0.0;
}

std::vector<std::size_t> boundary_cyclic_order(const Rect& r, const std::vector<Point2>& pts) {
  std::vector<double> s(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) s[i] = boundary_parameter(r, pts[i]);
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (dist(pts[idx[k]], pts[idx[k - 1]]) <= 1e-12) throw Error("degenerate-order", "coincident boundary points");
  }
  return idx;
}

bool separated(const Rect& r, Point2 A, Point2 C, Point2 B, Point2 D) {
  const Point2 all[4] = {A, C, B, D};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (dist(all[i], all[j]) <= 1e-12) throw Error("degenerate-order", "coincident boundary points");
    }
  }
  const double per = 2 * (r.width() + r.height());
  const double a = boundary_parameter(r, A);
  auto rel = [&](Point2 p) {
    double t = boundary_parameter(r, p) - a;
    return t < 0 ? t + per : t;
  };
  const double c = rel(C);
  const bool b_in = rel(B) < c;
  const bool d_in = rel(D) < c;
  return b_in != d_in;
}

Point2 rect_to_disk(const Rect& r, Point2 p) {
  if (!r.contains(p, 1e-12 * (1.0 + std::max(r.width(), r.height())))) {
    throw Error("out-of-domain", "point outside the rectangle");
  }
  const Point2 c = r.center();
  Point2 v{(p.x - c.x) / (0.5 * r.width()), (p.y - c.y) / (0.5 * r.height())};
  v.x = std::clamp(v.x, -1.0, 1.0);
  v.y = std::clamp(v.y, -1.0, 1.0);
  const double n2 = norm(v);
  if (n2 == 0.0) return {0.0, 0.0};
  const double ninf = std::max(std::abs(v.x), std::abs(v.y));
  return (ninf / n2) * v;
}

Point2 disk_to_rect(const Rect& r, Point2 q) {
  double n2 = norm(q);
  if (!(n2 <= 1.0 + 1e-12)) throw Error("out-of-domain", "point outside the unit disk");
  if (n2 == 0.0) return r.center();
  if (n2 > 1.0) {
    q = (1.0 / n2) * q;
    n2 = 1.0;
  }
  const double ninf = std::max(std::abs(q.x), std::abs(q.y));
  const Point2 v = (n2 / ninf) * q;
  const Point2 c = r.center();
  return {c.x + 0.5 * r.width() * v.x, c.y + 0.5 * r.height() * v.y};
}

std::vector<Point2> chord_path(const Rect& r, Point2 da, Point2 db, double t0, double t1, int n, Point2 a_img,
                               Point2 b_img) {
  if (n < 1) throw Error("schema-error", "path resolution must be positive");
  std::vector<Point2> pts;
  pts.reserve(n + 1);
  pts.push_back(a_img);
  for (int i = 1; i < n; ++i) {
    const double t = t0 + (t1 - t0) * (static_cast<double>(i) / n);
    pts.push_back(disk_to_rect(r, lerp(da, db, t)));
  }
  pts.push_back(b_img);
  return dedupe_vertices(pts, false);
}

GeneralizedSegment generalized_segment(const Rect& r, Point2 A, Point2 B, int n) {
  if (dist(A, B) <= 1e-12) throw Error("degenerate-segment", "generalized segment endpoints coincide");
  GeneralizedSegment g;
  g.rect = r;
  g.a = A;
  g.b = B;
  g.da = rect_to_disk(r, A);
  g.db = rect_to_disk(r, B);
  g.path = Polyline(chord_path(r, g.da, g.db, 0.0, 1.0, n, A, B));
  return g;
}

std::optional<Point2> chord_intersection(const Rect& r, const GeneralizedSegment& g1, const GeneralizedSegment& g2) {
  const SegmentHit h = segment_intersection(g1.da, g1.db, g2.da, g2.db);
  switch (h.kind) {
    case SegmentHit::Kind::empty: return std::nullopt;
    case SegmentHit::Kind::overlap: throw Error("degenerate-chords", "chords overlap along a piece");
    case SegmentHit::Kind::point: break;
  }
  if (h.ta <= 0.0) return g1.a;
  if (h.ta >= 1.0) return g1.b;
  if (h.tb <= 0.0) return g2.a;
  if (h.tb >= 1.0) return g2.b;
  return disk_to_rect(r, h.point);
}

}  // namespace noncross
