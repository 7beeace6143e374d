#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noncross/arrival_grid.hpp"
#include "noncross/geometry.hpp"

namespace noncross {

struct GridNode {
  enum class Kind { marked, vertex };
  Kind kind = Kind::marked;
  Point2 source;
  Point2 image;
  int marked = -1;  // index into the marked list
};

struct SimpleSegment {
  GridSegment::Orientation orientation = GridSegment::Orientation::horizontal;
  int line = 0;
  int from = -1, to = -1;    // node ids of the end marked points, in increasing coordinate
  std::vector<int> vertices;  // vertex node ids strictly between them, in order
  std::vector<double> vertex_params;  // chord parameters of those vertices
  bool boundary = false;
  int rect_n = -1, rect_m = -1;
  Rect rect;
  Point2 da, db;  // chord in disk coordinates
};

struct Piece {
  int simple = -1;
  int from = -1, to = -1;
  double t0 = 0.0, t1 = 1.0;
  std::vector<Point2> path;
  std::vector<double> arc;  // cumulative arc length along path

  Point2 at_fraction(double f) const;
};

struct VertexCheck {
  int node = -1;
  Point2 p1, p2, p3, p4;  // left, right, upper, lower end images
  bool consistent = true;
  std::string note;
};

struct GridMap {
  Grid grid;
  ArrivalGrid ag;
  std::vector<GridNode> nodes;
  std::vector<SimpleSegment> simples;
  std::vector<Piece> pieces;
  std::vector<VertexCheck> vertex_checks;
  // Images are stored in normalized coordinates; the target-space image is M * image + b.
  Mat2 M;
  Point2 b;

  Point2 to_target(Point2 q) const { return M * q + b; }
  // v at a source point lying on piece `piece`.
  Point2 eval_on_piece(std::size_t piece, Point2 source) const;
};

// consistent <=> P2 and P4 lie in the same component of the boundary minus {P1, P3}.
// Throws "degenerate-configuration" on coincident points.
bool check_vertex_ordering(const Rect& rect, Point2 p1, Point2 p2, Point2 p3, Point2 p4);

// Carries the failing vertex data along with the message.
class NcObstruction : public Error {
 public:
  NcObstruction(const std::string& detail, VertexCheck check) : Error("nc-obstruction", detail), check_(check) {}
  const VertexCheck& check() const { return check_; }

 private:
  VertexCheck check_;
};

// Arrival rectangle containing p strictly inside, or nullopt when p is within 1e-12 of a line.
std::optional<std::pair<int, int>> locate_rect(const ArrivalGrid& ag, Point2 p);
Rect arrival_rect(const ArrivalGrid& ag, int n, int m);

GridMap injectify(const PlanarMap& map, const Grid& grid, const ArrivalGrid& ag, const std::vector<MarkedPoint>& marked,
                  const Tolerances& tol = {});

struct InjectivityViolation {
  std::string kind;
  int a = -1, b = -1;  // simple segment (or piece) indices
  Point2 point;
};

struct InjectivityReport {
  bool injective = true;
  std::vector<InjectivityViolation> violations;
  double sup_error = 0.0;
  double bound = 0.0;
  std::vector<VertexCheck> vertex_checks;
};

InjectivityReport verify_injective(const GridMap& v, const Tolerances& tol = {});

// max |v(p) - u(p)| over n_samples source points spread over the pieces by source length.
double sup_error(const GridMap& v, const PlanarMap& map, int n_samples = 4096, bool use_threads = true);

struct PipelineResult {
  std::string regime;  // "identity-boundary" or "affine-boundary"
  double eta_normalized = 0.0;
  Grid grid;
  ArrivalGrid ag;
  std::vector<MarkedPoint> marked;
  GridMap gridmap;
  InjectivityReport report;
};

// build_grid (unless a grid is supplied), build_arrival_grid, marked_points, injectify, verify and
// sup_error. Maps whose boundary trace is affine are conjugated to identity-boundary maps first.
PipelineResult run_pipeline(const PlanarMap& map, int K, double eta, std::uint64_t seed, const Tolerances& tol = {},
                            const std::optional<Grid>& supplied = std::nullopt);

}  // namespace noncross
