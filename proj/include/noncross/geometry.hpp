#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "noncross/types.hpp"

namespace noncross {

class Polyline {
 public:
  Polyline() = default;
  // Throws "degenerate-polyline" on fewer than two vertices or consecutive gaps <= 1e-12.
  explicit Polyline(std::vector<Point2> vertices, bool closed = false);

  const std::vector<Point2>& vertices() const { return vertices_; }
  bool closed() const { return closed_; }
  std::size_t size() const { return vertices_.size(); }
  std::size_t segment_count() const { return closed_ ? vertices_.size() : vertices_.size() - 1; }
  Point2 segment_start(std::size_t i) const { return vertices_[i]; }
  Point2 segment_end(std::size_t i) const { return vertices_[(i + 1) % vertices_.size()]; }
  // Cumulative arc length at each vertex (and at the closing vertex when closed).
  const std::vector<double>& arc_lengths() const { return arc_; }
  double length() const { return arc_.back(); }
  // Point at arc-length fraction f in [0, 1].
  Point2 at_fraction(double f) const;

 private:
  std::vector<Point2> vertices_;
  bool closed_ = false;
  std::vector<double> arc_;
};

// Drops consecutive vertices closer than `gap` (and a closing duplicate when closed).
std::vector<Point2> dedupe_vertices(const std::vector<Point2>& pts, bool closed, double gap = 1e-12);

double distance_to_polyline(const Polyline& c, Point2 p);

// Total signed angle swept by the closed curve around p, in turns.
double winding_turns(const Polyline& curve, Point2 p);
// Throws "on-curve" within tau_on, "winding-residual" when the sum is not near an integer.
int winding_number(const Polyline& curve, Point2 p, double tau_on = 1e-9, double residual = 1e-6);

struct SegmentHit {
  enum class Kind { empty, point, overlap };
  Kind kind = Kind::empty;
  Point2 point;        // for `point`; start of the shared piece for `overlap`
  double ta = 0, tb = 0;
  bool endpoint_shared = false;
};

SegmentHit segment_intersection(Point2 a0, Point2 a1, Point2 b0, Point2 b1);

struct Segment2 {
  Point2 a, b;
};

struct Crossing {
  std::size_t i = 0, j = 0;
  Point2 point;
};

// Sweep over x with y-interval pruning. `allowed(i, j, hit)` may excuse a contact (for example
// two path pieces meeting at a shared node). Returns the first unexcused contact in (i, j) order.
std::optional<Crossing> find_crossing(const std::vector<Segment2>& segs,
                                      const std::function<bool(std::size_t, std::size_t, const SegmentHit&)>& allowed);

// With ignore_adjacent, adjacent segments may share their common vertex and nothing else (a closed
// curve's first and last segments count as adjacent). Without it every contact is reported.
std::optional<Crossing> polyline_self_intersects(const Polyline& c, bool ignore_adjacent = true);

// Counterclockwise arc-length position on the rectangle boundary, starting at (x_lo, y_lo).
// Throws "not-on-boundary" when p is farther than tol from the boundary.
double boundary_parameter(const Rect& r, Point2 p, double tol = 1e-9);
// Indices of pts in counterclockwise boundary order. Throws "degenerate-order" on coincident points.
std::vector<std::size_t> boundary_cyclic_order(const Rect& r, const std::vector<Point2>& pts);
// True when B and D lie in different components of the boundary minus {A, C}.
bool separated(const Rect& r, Point2 A, Point2 C, Point2 B, Point2 D);

Point2 rect_to_disk(const Rect& r, Point2 p);
Point2 disk_to_rect(const Rect& r, Point2 q);

struct GeneralizedSegment {
  Rect rect;
  Point2 a, b;    // endpoints in the rectangle
  Point2 da, db;  // chord endpoints in the disk
  Polyline path;
};

GeneralizedSegment generalized_segment(const Rect& r, Point2 A, Point2 B, int n);

// Path of the chord from parameter t0 to t1, sampled at n+1 points, with exact endpoints a_img and b_img.
std::vector<Point2> chord_path(const Rect& r, Point2 da, Point2 db, double t0, double t1, int n, Point2 a_img,
                               Point2 b_img);

// Exact intersection of the two chords in disk coordinates, mapped back. Throws "degenerate-chords"
// when the chords overlap along a piece.
std::optional<Point2> chord_intersection(const Rect& r, const GeneralizedSegment& g1, const GeneralizedSegment& g2);

}  // namespace noncross
