#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "noncross/grids.hpp"

namespace noncross {

struct ArrivalGrid {
  std::vector<double> x;  // 0 = x_0 < ... < x_N = 1
  std::vector<double> y;  // 0 = y_0 < ... < y_M = 1
  double eta = 0.0;
};

// Throws "schema-error" unless both lists run strictly increasing from 0 to 1 with gaps below eta.
void validate_arrival_grid(const ArrivalGrid& ag);

// Union of closed intervals, kept sorted and merged.
class ExcludedSet {
 public:
  void add(double lo, double hi);
  bool contains(double v) const;
  // Length of the part inside [0, 1].
  double measure() const;
  const std::vector<std::pair<double, double>>& intervals() const { return iv_; }

 private:
  std::vector<std::pair<double, double>> iv_;
};

// Projections on `axis` of: images of grid vertices and boundary lattice points; images of samples
// within tau_unreliable of a discontinuity; images where the axis component of the tangential
// derivative is flat or turns. Each inflated by tau_bad. Throws "map-too-degenerate" past 50%.
ExcludedSet bad_coordinates(const PlanarMap& map, const Grid& grid, Axis axis, const Tolerances& tol = {});

// Number of interior-spaced lines used for side length eta (N = M).
int arrival_line_count(double eta);

// Throws "precondition" when eta >= 1/K, "arrival-grid-failed" when retries run out.
ArrivalGrid build_arrival_grid(const PlanarMap& map, const Grid& grid, double eta, std::uint64_t seed,
                               const Tolerances& tol = {});

struct MarkedPoint {
  enum class Kind { interior_crossing, boundary_lattice };
  Kind kind = Kind::interior_crossing;
  Point2 location;
  int segment = -1;      // index into grid_polyline(grid).segments (-1 for boundary lattice points)
  double lambda = 0.0;   // parameter along that segment
  Point2 image;
  Axis axis = Axis::x;   // crossed arrival line (interior crossings)
  int line = -1;
  bool lebesgue_surrogate = true;  // finite-difference Jacobian stable under step halving
};

std::string to_string(MarkedPoint::Kind k);

struct DuplicatePair {
  std::size_t i = 0, j = 0;
  double image_gap = 0.0;
};

class DistinctImageViolation : public Error {
 public:
  DistinctImageViolation(std::vector<MarkedPoint> points, std::vector<DuplicatePair> pairs);
  const std::vector<MarkedPoint>& points() const { return points_; }
  const std::vector<DuplicatePair>& pairs() const { return pairs_; }

 private:
  std::vector<MarkedPoint> points_;
  std::vector<DuplicatePair> pairs_;
};

// All pairs whose images are within tau_dup.
std::vector<DuplicatePair> duplicate_images(const std::vector<MarkedPoint>& pts, double tau_dup);

// Interior crossings in (segment, x lines then y lines, parameter) order, then the 4K boundary
// lattice points. Throws DistinctImageViolation when two images coincide.
std::vector<MarkedPoint> marked_points(const PlanarMap& map, const Grid& grid, const ArrivalGrid& ag,
                                       const Tolerances& tol = {}, bool use_threads = true);

}  // namespace noncross
