#pragma once

#include <memory>
#include <string>
#include <vector>

#include "noncross/types.hpp"

namespace noncross {

struct Domain {
  enum class Kind { unit_square, disk };
  Kind kind = Kind::unit_square;
  double R = 1.0;  // disk radius, centered at the origin

  bool contains(Point2 p, double tol = 1e-12) const;
  static Domain square() { return {}; }
  static Domain disk(double R) { return {Kind::disk, R}; }
};

enum class MapKind { identity, counterexample, cavitation, shear, twist, affine, composition };

std::string to_string(MapKind k);
MapKind map_kind_from_string(const std::string& s);

struct PlanarMap {
  MapKind kind = MapKind::identity;
  Domain domain;

  // shear
  double k = 0.0;
  // affine: p -> M p + b
  Mat2 M;
  Point2 b;
  // twist and cavitation: disk of radius `radius` about `center`
  Point2 center{0.5, 0.5};
  double radius = 0.0;
  double angle = 0.0;     // twist amplitude at the center (radians)
  double strength = 0.0;  // cavitation hole radius as a fraction of `radius`
  // composition, applied front to back
  std::vector<PlanarMap> parts;

  std::vector<Point2> discontinuities() const;
  bool has_analytic_jacobian() const;
  bool declares_identity_on_boundary() const;
};

PlanarMap identity_map(Domain d = Domain::square());
PlanarMap counterexample_map();
PlanarMap shear_map(double k);
PlanarMap affine_map(Mat2 M, Point2 b);
PlanarMap twist_map(Point2 center, double radius, double angle);
PlanarMap cavitation_map(Point2 center, double radius, double strength);
PlanarMap composition_map(std::vector<PlanarMap> parts, Domain d = Domain::square());
// The counterexample rescaled so that B_2 becomes the disk of radius R about c, identity elsewhere.
PlanarMap embedded_counterexample(Point2 c, double R);

// Throws "out-of-domain" or "undefined-at-point".
Point2 eval(const PlanarMap& map, Point2 p, const Tolerances& tol = {});

// Evaluation without the domain check. Compositions and finite differences use this, so the
// formulas are extended outside the nominal domain (the counterexample is the identity for |p| >= 2).
Point2 eval_extended(const PlanarMap& map, Point2 p, const Tolerances& tol = {});

// Analytic when available, else central differences with step h. Throws "jacobian-unreliable"
// within 2h of a discontinuity.
Mat2 jacobian(const PlanarMap& map, Point2 p, double h, const Tolerances& tol = {});
Mat2 jacobian_fd(const PlanarMap& map, Point2 p, double h, const Tolerances& tol = {});

// sup over n points of B(x, r) of |u(z) - (u(x) + Du(x)(z - x))|.
double local_affine_deviation(const PlanarMap& map, Point2 x, double r, int n, const Tolerances& tol = {});

// Distance from p to the nearest discontinuity (infinity when there are none).
double distance_to_discontinuity(const PlanarMap& map, Point2 p);

// Affine trace of the map on the unit-square boundary, if one fits within `fit_tol` at 256 samples.
struct AffineTrace {
  bool ok = false;
  Mat2 M;
  Point2 b;
  double residual = 0.0;
};
AffineTrace boundary_affine_trace(const PlanarMap& map, double fit_tol = 1e-9);

// Max of |u(p) - p| over n samples of the domain boundary.
double boundary_identity_deviation(const PlanarMap& map, int n = 256);

}  // namespace noncross
