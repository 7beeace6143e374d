#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "noncross/geometry.hpp"
#include "noncross/planar_map.hpp"

namespace noncross {

// Curves are parameterized by t in [0, 1], each polyline segment taking an equal share.
Point2 curve_at(const Polyline& gamma, double t);

// Parameters where |gamma(t)| = radius, increasing. Throws "non-transversal-curve" when the radial
// direction and the segment direction are closer than tau_transversal to orthogonal at a root.
std::vector<double> radius_crossings(const Polyline& gamma, double radius, double tau_transversal);

struct Crossing1 {
  double a = 0.0, b = 0.0;              // gamma^{-1}(B_1) component (a, b)
  double a_minus = 0.0, b_plus = 0.0;   // neighbouring crossings of the circle of radius 1 + delta
  Point2 P, Q;                          // gamma(a_minus), gamma(b_plus)
  double theta_a = 0.0, theta_b = 0.0;  // angles of gamma(a), gamma(b) on the unit circle
};

struct CrossingDecomposition {
  Polyline gamma;
  double delta = 0.0;
  std::vector<Crossing1> crossings;
};

// Throws "precondition" (gamma not injective, endpoints off the radius-2 circle, vertices outside
// it), "curve-hits-P", "non-transversal-curve" or "delta-too-large" (the circle of radius 1 + delta
// is not crossed exactly once on each side of every interval).
CrossingDecomposition decompose_crossings(const Polyline& gamma, double delta, const Tolerances& tol = {});

// i nested in j when the angular interval of chord i lies inside that of chord j.
bool chord_nested(const Crossing1& i, const Crossing1& j);

struct WitnessCrossing {
  double ell = 0.0;        // min of u_1 along gamma over [a, b]
  double c = 0.0;          // smallest minimizer
  double ell_tilde = 0.0;  // bridge abscissa
  double p_tilde = 0.0;    // heights of the entry and exit points on {1} x (-delta1, delta1)
  double q_tilde = 0.0;
  double tau_a = 0.0;      // where the straight entry tail starts (|gamma| = 1 + tail)
  double tau_b = 0.0;      // where the straight exit tail ends
  int depth = 0;           // number of chords strictly containing this one
};

struct WitnessPlan {
  double eps = 0.0;
  double delta = 0.0, delta1 = 0.0, delta2 = 0.0, delta3 = 0.0;
  double tail = 0.0;  // radius offset below which u o gamma is replaced by straight tails
  std::vector<WitnessCrossing> crossings;
};

// Throws "precondition" unless the map is the counterexample, "nesting-anomaly" when a nested
// chord has a smaller minimum than its host, "epsilon-too-small-for-resolution" when the constants
// cannot be fitted above min_constant.
WitnessPlan plan_witness(const CrossingDecomposition& dec, const PlanarMap& map, double eps, const Tolerances& tol = {});

struct Witness {
  Polyline phi;
  std::vector<double> params;  // parameter of gamma at each vertex of phi

  Point2 at(double t) const;
};

Witness build_witness(const CrossingDecomposition& dec, const WitnessPlan& plan, const PlanarMap& map,
                      const Tolerances& tol = {});

struct WitnessReport {
  bool injective = true;
  std::optional<Point2> self_intersection;
  double sup_error = 0.0;
  bool endpoints_ok = true;
  bool pass = false;
};

WitnessReport verify_witness(const Polyline& gamma, const Witness& phi, const PlanarMap& map, double eps,
                             int n_samples = 2048);

struct WitnessResult {
  CrossingDecomposition dec;
  WitnessPlan plan;
  Witness witness;
  WitnessReport report;
};

// Decomposes with delta = eps/16, halving on "delta-too-large", then plans, builds and verifies.
WitnessResult run_witness(const Polyline& gamma, const PlanarMap& map, double eps, const Tolerances& tol = {});

// Seeded transversal curves from the radius-2 circle back to it, crossing the unit disk 1 to 3
// times. Their polar angle increases along the curve, so they are injective.
std::vector<Polyline> curve_corpus(std::uint64_t seed, int count);

// A deep crossing through B_{1/2}, then a shallow dip to radius `dip` around angle `mid`, whose
// chord is nested in the first.
Polyline nested_curve(double mid, double half_width, double dip);
Polyline nested_fixture();
// Vertical diameter from (0, 2) to (0, -2).
Polyline diameter_fixture();

}  // namespace noncross
