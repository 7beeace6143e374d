#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noncross/planar_map.hpp"

namespace noncross {

struct Grid {
  int K = 2;
  std::vector<double> s;  // vertical line abscissae
  std::vector<double> t;  // horizontal line ordinates
};

// Throws "schema-error" unless K >= 2, both lists have K+1 strictly increasing entries from 0 to 1,
// and (when check_jitter) every entry is within 1/(4K) of its lattice value.
void validate_grid(const Grid& g, bool check_jitter = true);

Grid uniform_grid(int K);

enum class Axis { x, y };

struct GridSegment {
  enum class Orientation { horizontal, vertical };
  Orientation orientation = Orientation::horizontal;
  int line = 0;  // index into t (horizontal) or s (vertical)
  int span = 0;  // index of the span along the line
  Point2 a, b;   // a precedes b in increasing coordinate

  Point2 at(double lambda) const { return lerp(a, b, lambda); }
  double length() const { return dist(a, b); }
  bool on_boundary(const Grid& g) const;
};

struct GridLayout {
  std::vector<GridSegment> segments;
  std::vector<Point2> interior_vertices;  // row-major in (t index, s index)
};

GridLayout grid_polyline(const Grid& g);

// Candidate jitter offset in (-1/(4K), 1/(4K)) for attempt a (attempt 0 is the lattice value).
double grid_jitter(int K, std::uint64_t seed, Axis axis, int index, int attempt);

// Why a grid line is unusable, or empty when it is admissible.
std::string grid_line_defect(const PlanarMap& map, Axis axis, double coord, const Tolerances& tol);

Grid build_grid(int K, const PlanarMap& map, std::uint64_t seed, const Tolerances& tol = {}, bool use_threads = true);

// Parameters lambda in [0,1] along seg where the axis component of u(seg(lambda)) equals level.
// Throws "tangential-crossing" when a crossing is not simple.
std::vector<double> preimages_on_segment(const PlanarMap& map, const GridSegment& seg, double level, Axis axis,
                                         const Tolerances& tol = {});

}  // namespace noncross
