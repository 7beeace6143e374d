#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noncross/geometry.hpp"
#include "noncross/planar_map.hpp"

namespace noncross {

struct ProbeResult {
  enum class Verdict { ok, violation, indeterminate, skipped };
  Point2 z;
  bool inside = false;
  Verdict verdict = Verdict::skipped;
  int degree = 0;
  Point2 image;
  std::string note;
};

std::string to_string(ProbeResult::Verdict v);

struct INVReport {
  Point2 center;
  double r = 0.0;
  std::vector<Point2> image_curve;
  double total_variation = 0.0;
  std::vector<ProbeResult> probes;
  bool pass = true;

  std::vector<ProbeResult> violations() const;
};

struct CircleSpec {
  Point2 center;
  double r = 0.0;
};

// Ring of 8 at r/2, the center, and a ring of 8 at 1.5r.
std::vector<Point2> default_probes(Point2 center, double r);

// Throws "bad-circle" when the circle leaves the domain, comes within tau_disc of a discontinuity,
// has a degenerate image, or its sampled total variation is not stable under doubling.
INVReport check_inv_on_circle(const PlanarMap& map, Point2 center, double r, const Tolerances& tol = {},
                              const std::vector<Point2>& probes = {});

struct SkippedCircle {
  std::size_t index = 0;
  std::string reason;
};

struct ScanReport {
  std::vector<CircleSpec> circles;
  std::vector<std::optional<INVReport>> reports;  // empty where the circle was skipped
  std::vector<SkippedCircle> skipped;
  std::size_t passes = 0;
  std::size_t failures = 0;
  std::optional<std::size_t> first_violation;
};

// Nine concentric circles about the domain center, radii 0.275R to 0.475R (R = disk radius or
// square side).
std::vector<CircleSpec> default_circle_family(const Domain& d);
std::vector<CircleSpec> random_circle_family(const Domain& d, std::size_t count, std::uint64_t seed);

ScanReport scan_inv(const PlanarMap& map, const std::vector<CircleSpec>& circles, const Tolerances& tol = {},
                    bool use_threads = true);

}  // namespace noncross
