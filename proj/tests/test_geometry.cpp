#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "noncross/geometry.hpp"
#include "support.hpp"

using namespace noncross;
using noncross::testing::error_code;

namespace {

// Angle-sum oracle: independent of winding_turns, accumulates atan2 of cross/dot.
double angle_sum_turns(const std::vector<Point2>& v, Point2 p) {
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i] - p, b = v[(i + 1) % v.size()] - p;
    total += std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
  }
  return total / (2.0 * kPi);
}

// Even-odd ray casting toward +x.
bool ray_parity(const std::vector<Point2>& v, Point2 p) {
  bool in = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y) &&
        p.x < (v[j].x - v[i].x) * (p.y - v[i].y) / (v[j].y - v[i].y) + v[i].x) {
      in = !in;
    }
  }
  return in;
}

std::vector<Point2> regular_ngon(int n, double r, Point2 c = {}) {
  std::vector<Point2> v;
  for (int k = 0; k < n; ++k) v.push_back({c.x + r * std::cos(2 * kPi * k / n), c.y + r * std::sin(2 * kPi * k / n)});
  return v;
}

// Star-shaped around c with random radii: always simple.
std::vector<Point2> random_simple_polygon(Rng& rng, Point2 c) {
  const int n = rng.uniform_int(3, 24);
  std::vector<double> angles;
  for (int i = 0; i < n; ++i) angles.push_back(rng.uniform(0.0, 2.0 * kPi));
  std::sort(angles.begin(), angles.end());
  std::vector<Point2> v;
  for (double a : angles) {
    const double r = rng.uniform(0.2, 1.0);
    v.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return dedupe_vertices(v, true, 1e-9);
}

double seg_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
  return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                   point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

bool proper_or_touching(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
  auto orient = [](Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); };
  const double d1 = orient(b0, b1, a0), d2 = orient(b0, b1, a1), d3 = orient(a0, a1, b0), d4 = orient(a0, a1, b1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  return seg_distance(a0, a1, b0, b1) == 0.0;
}

// Quadratic oracle for polyline_self_intersects (open curves, adjacent segments excused at their joint).
bool brute_self_intersects(const std::vector<Point2>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    for (std::size_t j = i + 1; j + 1 < v.size(); ++j) {
      if (j == i + 1) {
        if (point_segment_distance(v[j + 1], v[i], v[i + 1]) == 0.0 ||
            point_segment_distance(v[i], v[j], v[j + 1]) == 0.0) {
          return true;
        }
        continue;
      }
      if (proper_or_touching(v[i], v[i + 1], v[j], v[j + 1])) return true;
    }
  }
  return false;
}

Point2 boundary_point(const Rect& r, double s) {
  const double w = r.width(), h = r.height();
  if (s < w) return {r.x_lo + s, r.y_lo};
  s -= w;
  if (s < h) return {r.x_hi, r.y_lo + s};
  s -= h;
  if (s < w) return {r.x_hi - s, r.y_hi};
  s -= w;
  return {r.x_lo, r.y_hi - s};
}

// Number of distinct points where two sampled paths meet.
std::vector<Point2> path_contacts(const std::vector<Point2>& p, const std::vector<Point2>& q) {
  std::vector<Point2> hits;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    for (std::size_t j = 0; j + 1 < q.size(); ++j) {
      const SegmentHit h = segment_intersection(p[i], p[i + 1], q[j], q[j + 1]);
      if (h.kind == SegmentHit::Kind::empty) continue;
      bool seen = false;
      for (Point2 x : hits) seen = seen || dist(x, h.point) < 1e-9;
      if (!seen) hits.push_back(h.point);
    }
  }
  return hits;
}

double path_min_distance(const std::vector<Point2>& p, const std::vector<Point2>& q) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    for (std::size_t j = 0; j + 1 < q.size(); ++j) best = std::min(best, seg_distance(p[i], p[i + 1], q[j], q[j + 1]));
  }
  return best;
}

}  // namespace

TEST(Winding, RegularPolygonAroundOrigin) {
  const Polyline c(regular_ngon(64, 1.0), true);
  EXPECT_EQ(winding_number(c, {0.0, 0.0}), 1);
  EXPECT_EQ(winding_number(c, {2.0, 0.0}), 0);
}

TEST(Winding, OutAndBackSegmentHasDegreeZero) {
  std::vector<Point2> v;
  for (int i = 0; i <= 16; ++i) v.push_back({i / 16.0, 0.0});
  for (int i = 15; i >= 1; --i) v.push_back({i / 16.0, 0.0});
  EXPECT_NEAR(angle_sum_turns(v, {0.5, 0.1}), 0.0, 1e-12);
  EXPECT_EQ(winding_number(Polyline(v, true), {0.5, 0.1}), 0);
}

TEST(Winding, OnCurveIsRejected) {
  const Polyline c(regular_ngon(4, 1.0), true);
  EXPECT_EQ(error_code([&] { winding_number(c, {1.0, 0.0}); }), "on-curve");
}

TEST(Winding, MatchesAngleSumOracleOnRandomPolygons) {
  Rng rng(101);
  int compared = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.uniform_int(3, 30);
    std::vector<Point2> v;
    for (int i = 0; i < n; ++i) v.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    v = dedupe_vertices(v, true, 1e-9);
    if (v.size() < 3) continue;
    const Polyline c(v, true);
    const Point2 p{rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
    if (distance_to_polyline(c, p) < 1e-6) continue;
    const long oracle = std::lround(angle_sum_turns(v, p));
    EXPECT_EQ(winding_number(c, p), oracle) << "trial " << trial;
    ++compared;
  }
  EXPECT_GT(compared, 490);
}

TEST(Winding, ParityMatchesRayCastingOnSimplePolygons) {
  Rng rng(202);
  for (int trial = 0; trial < 500; ++trial) {
    const auto v = random_simple_polygon(rng, {0.0, 0.0});
    if (v.size() < 3) continue;
    const Polyline c(v, true);
    const Point2 p{rng.uniform(-1.1, 1.1), rng.uniform(-1.1, 1.1)};
    if (distance_to_polyline(c, p) < 1e-6) continue;
    EXPECT_EQ(std::abs(winding_number(c, p)) % 2 == 1, ray_parity(v, p)) << "trial " << trial;
  }
}

TEST(Winding, InvariantUnderResamplingAndRotation) {
  Rng rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point2> v;
    for (int i = 0; i < 12; ++i) v.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    const Point2 p{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    const Polyline c(v, true);
    if (distance_to_polyline(c, p) < 1e-6) continue;
    const int w = winding_number(c, p);
    std::vector<Point2> fine;
    for (std::size_t i = 0; i < v.size(); ++i) {
      fine.push_back(v[i]);
      fine.push_back(lerp(v[i], v[(i + 1) % v.size()], 0.5));
    }
    EXPECT_EQ(winding_number(Polyline(fine, true), p), w);
    std::rotate(v.begin(), v.begin() + 5, v.end());
    EXPECT_EQ(winding_number(Polyline(v, true), p), w);
  }
}

TEST(SegmentIntersection, Cases) {
  const SegmentHit x = segment_intersection({0, 0}, {1, 1}, {0, 1}, {1, 0});
  ASSERT_EQ(x.kind, SegmentHit::Kind::point);
  EXPECT_NEAR(x.point.x, 0.5, 1e-15);
  EXPECT_NEAR(x.point.y, 0.5, 1e-15);
  EXPECT_EQ(segment_intersection({0, 0}, {1, 0}, {0, 1}, {1, 1}).kind, SegmentHit::Kind::empty);
  EXPECT_EQ(segment_intersection({0, 0}, {1, 0}, {0.5, 0}, {1.5, 0}).kind, SegmentHit::Kind::overlap);
  const SegmentHit s = segment_intersection({0, 0}, {1, 0}, {1, 0}, {1, 1});
  ASSERT_EQ(s.kind, SegmentHit::Kind::point);
  EXPECT_TRUE(s.endpoint_shared);
}

TEST(SelfIntersection, SquareSpiralIsClean) {
  std::vector<Point2> v{{0, 0}};
  double len = 1.0;
  int dir = 0;
  const Point2 steps[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int i = 0; i < 40; ++i) {
    v.push_back(v.back() + len * steps[dir]);
    dir = (dir + 1) % 4;
    if (i % 2 == 1) len += 1.0;
  }
  EXPECT_FALSE(polyline_self_intersects(Polyline(v)).has_value());
}

TEST(SelfIntersection, FigureEightCrossesAtCenter) {
  const Polyline c({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, true);
  const auto hit = polyline_self_intersects(c);
  ASSERT_TRUE(hit.has_value());
  EXPECT_NEAR(hit->point.x, 0.5, 1e-12);
  EXPECT_NEAR(hit->point.y, 0.5, 1e-12);
}

TEST(SelfIntersection, MonotoneStaircaseAgreesWithBruteForce) {
  Rng rng(404);
  std::vector<Point2> v{{0, 0}};
  for (int i = 0; i < 1000; ++i) {
    const Point2 last = v.back();
    v.push_back(i % 2 == 0 ? Point2{last.x + rng.uniform(0.01, 1.0), last.y} : Point2{last.x, last.y + rng.uniform(0.01, 1.0)});
  }
  EXPECT_FALSE(brute_self_intersects(v));
  EXPECT_FALSE(polyline_self_intersects(Polyline(v)).has_value());
}

TEST(SelfIntersection, RandomWalksAgreeWithBruteForce) {
  Rng rng(505);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Point2> v;
    const int n = rng.uniform_int(3, 12);
    for (int i = 0; i < n; ++i) v.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
    EXPECT_EQ(polyline_self_intersects(Polyline(v)).has_value(), brute_self_intersects(v)) << "trial " << trial;
  }
}

TEST(BoundaryOrder, EdgeMidpoints) {
  const Rect r;
  const std::vector<Point2> pts{{0.0, 0.5}, {0.5, 1.0}, {1.0, 0.5}, {0.5, 0.0}};  // left, top, right, bottom
  EXPECT_EQ(boundary_cyclic_order(r, pts), (std::vector<std::size_t>{3, 2, 1, 0}));
  EXPECT_TRUE(separated(r, {0.5, 0.0}, {0.5, 1.0}, {0.0, 0.5}, {1.0, 0.5}));
  EXPECT_FALSE(separated(r, {0.5, 0.0}, {0.5, 1.0}, {1.0, 0.25}, {1.0, 0.75}));
}

TEST(BoundaryOrder, CoincidentPointsAreDegenerate) {
  EXPECT_EQ(error_code([] { boundary_cyclic_order(Rect{}, {{0.0, 0.5}, {0.0, 0.5}}); }), "degenerate-order");
}

TEST(BoundaryOrder, MatchesAngleSortAroundCenter) {
  Rng rng(606);
  for (int trial = 0; trial < 50; ++trial) {
    const Rect r{0.1, 0.6, 0.2, 0.5};
    std::vector<Point2> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(boundary_point(r, rng.uniform(0.0, 2.0 * (r.width() + r.height()))));
    const Point2 c = r.center();
    // the corner (x_lo, y_lo) starts the order, so measure angles from its direction
    const double a0 = std::atan2(r.y_lo - c.y, r.x_lo - c.x);
    auto key = [&](Point2 p) {
      double a = std::atan2(p.y - c.y, p.x - c.x) - a0;
      while (a < 0.0) a += 2.0 * kPi;
      while (a >= 2.0 * kPi) a -= 2.0 * kPi;
      return a;
    };
    std::vector<std::size_t> oracle(pts.size());
    std::iota(oracle.begin(), oracle.end(), 0);
    std::sort(oracle.begin(), oracle.end(), [&](std::size_t i, std::size_t j) { return key(pts[i]) < key(pts[j]); });
    EXPECT_EQ(boundary_cyclic_order(r, pts), oracle);
  }
}

TEST(Chart, CenterAndCorner) {
  const Rect r{0.2, 0.7, 0.1, 0.4};
  const Point2 c = rect_to_disk(r, r.center());
  EXPECT_NEAR(norm(c), 0.0, 1e-15);
  const Point2 q = rect_to_disk(r, {r.x_hi, r.y_hi});
  EXPECT_NEAR(norm(q), 1.0, 1e-12);
  EXPECT_NEAR(q.x, q.y, 1e-12);
  EXPECT_EQ(error_code([&] { rect_to_disk(r, {0.9, 0.2}); }), "out-of-domain");
  EXPECT_EQ(error_code([&] { disk_to_rect(r, {1.0, 1.0}); }), "out-of-domain");
}

TEST(Chart, RoundTripAndOrientation) {
  Rng rng(707);
  const Rect r{0.25, 0.5, 0.6, 0.95};
  for (int i = 0; i < 1000; ++i) {
    const Point2 p{rng.uniform(r.x_lo, r.x_hi), rng.uniform(r.y_lo, r.y_hi)};
    EXPECT_LT(dist(disk_to_rect(r, rect_to_disk(r, p)), p), 1e-12);
  }
  for (int i = 0; i < 200; ++i) {
    const double h = 1e-7;
    const Point2 p{rng.uniform(r.x_lo + 1e-3, r.x_hi - 1e-3), rng.uniform(r.y_lo + 1e-3, r.y_hi - 1e-3)};
    const Point2 dx = rect_to_disk(r, {p.x + h, p.y}) - rect_to_disk(r, {p.x - h, p.y});
    const Point2 dy = rect_to_disk(r, {p.x, p.y + h}) - rect_to_disk(r, {p.x, p.y - h});
    EXPECT_GT(cross(dx, dy), 0.0);
  }
}

TEST(GeneralizedSegment, OppositeMidpointsGiveStraightPath) {
  const Rect r{0.0, 2.0, 0.0, 1.0};
  const GeneralizedSegment g = generalized_segment(r, {1.0, 0.0}, {1.0, 1.0}, 32);
  for (Point2 p : g.path.vertices()) EXPECT_NEAR(p.x, 1.0, 1e-12);
  EXPECT_EQ(error_code([&] { generalized_segment(r, {1.0, 0.0}, {1.0, 0.0}, 8); }), "degenerate-segment");
}

TEST(GeneralizedSegment, InteriorStaysInsideRect) {
  const Rect r{0.1, 0.4, 0.3, 0.9};
  const GeneralizedSegment g = generalized_segment(r, {0.1, 0.5}, {0.3, 0.3}, 64);
  const auto& v = g.path.vertices();
  EXPECT_EQ(v.front(), (Point2{0.1, 0.5}));
  EXPECT_EQ(v.back(), (Point2{0.3, 0.3}));
  for (std::size_t i = 1; i + 1 < v.size(); ++i) EXPECT_TRUE(r.strictly_contains(v[i]));
}

TEST(GeneralizedSegment, ChordLawOnRandomQuadruples) {
  Rng rng(808);
  const int n = 64;
  int failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Rect r{rng.uniform(0.0, 0.4), rng.uniform(0.6, 1.0), rng.uniform(0.0, 0.4), rng.uniform(0.6, 1.0)};
    const double per = 2.0 * (r.width() + r.height());
    std::vector<double> s;
    for (int i = 0; i < 4; ++i) s.push_back(rng.uniform(0.0, per));
    std::sort(s.begin(), s.end());
    if (s[1] - s[0] < 1e-3 || s[2] - s[1] < 1e-3 || s[3] - s[2] < 1e-3 || per - s[3] + s[0] < 1e-3) continue;
    const Point2 A = boundary_point(r, s[0]), B = boundary_point(r, s[1]), C = boundary_point(r, s[2]),
                 D = boundary_point(r, s[3]);
    const auto AC = generalized_segment(r, A, C, n), BD = generalized_segment(r, B, D, n);
    const auto AB = generalized_segment(r, A, B, n), CD = generalized_segment(r, C, D, n);
    const auto hits = path_contacts(AC.path.vertices(), BD.path.vertices());
    const auto exact = chord_intersection(r, AC, BD);
    const bool ok = hits.size() == 1 && exact.has_value() &&
                    path_min_distance(AB.path.vertices(), CD.path.vertices()) > 0.0 &&
                    !chord_intersection(r, AB, CD).has_value();
    if (!ok) ++failures;
  }
  EXPECT_EQ(failures, 0);
}

TEST(ChordIntersection, PerpendicularDiametersMeetAtCenter) {
  const Rect r{0.0, 1.0, 0.0, 0.5};
  const auto g1 = generalized_segment(r, {0.5, 0.0}, {0.5, 0.5}, 16);
  const auto g2 = generalized_segment(r, {0.0, 0.25}, {1.0, 0.25}, 16);
  const auto x = chord_intersection(r, g1, g2);
  ASSERT_TRUE(x.has_value());
  EXPECT_LT(dist(*x, r.center()), 1e-12);
}

TEST(ChordIntersection, SharedEndpoint) {
  const Rect r;
  const auto g1 = generalized_segment(r, {0.0, 0.3}, {0.6, 1.0}, 16);
  const auto g2 = generalized_segment(r, {0.0, 0.3}, {1.0, 0.2}, 16);
  const auto x = chord_intersection(r, g1, g2);
  ASSERT_TRUE(x.has_value());
  EXPECT_LT(dist(*x, {0.0, 0.3}), 1e-12);
}

TEST(ChordIntersection, OverlapIsDegenerate) {
  const Rect r;
  const auto g1 = generalized_segment(r, {0.0, 0.5}, {1.0, 0.5}, 16);
  const auto g2 = generalized_segment(r, {0.5, 0.5}, {1.0, 0.5}, 16);
  EXPECT_EQ(error_code([&] { chord_intersection(r, g1, g2); }), "degenerate-chords");
}

TEST(ChordIntersection, MatchesSampledPathOracle) {
  Rng rng(909);
  const int n = 256;
  const Rect r{0.0, 1.0, 0.0, 1.0};
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s;
    for (int i = 0; i < 4; ++i) s.push_back(rng.uniform(0.0, 4.0));
    std::sort(s.begin(), s.end());
    if (s[1] - s[0] < 1e-2 || s[2] - s[1] < 1e-2 || s[3] - s[2] < 1e-2) continue;
    const auto g1 = generalized_segment(r, boundary_point(r, s[0]), boundary_point(r, s[2]), n);
    const auto g2 = generalized_segment(r, boundary_point(r, s[1]), boundary_point(r, s[3]), n);
    const auto hits = path_contacts(g1.path.vertices(), g2.path.vertices());
    const auto x = chord_intersection(r, g1, g2);
    ASSERT_EQ(hits.size(), 1u);
    ASSERT_TRUE(x.has_value());
    EXPECT_LT(dist(hits[0], *x), 2.0 / n);
    ++compared;
  }
  EXPECT_GT(compared, 150);
}
