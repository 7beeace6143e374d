#include "noncross/inv_check.hpp"

#include <algorithm>

#include "noncross/kernels.hpp"

namespace noncross {

std::string to_string(ProbeResult::Verdict v) {
  switch (v) {
    case ProbeResult::Verdict::ok: return "ok";
    case ProbeResult::Verdict::violation: return "violation";
    case ProbeResult::Verdict::indeterminate: return "indeterminate";
    case ProbeResult::Verdict::skipped: return "skipped";
  }
  return "unknown";
}

std::vector<ProbeResult> INVReport::violations() const {
  std::vector<ProbeResult> out;
  for (const auto& p : probes) {
    if (p.verdict == ProbeResult::Verdict::violation) out.push_back(p);
  }
  return out;
}

std::vector<Point2> default_probes(Point2 center, double r) {
  std::vector<Point2> out;
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * kPi * k / 8.0;
    out.push_back(center + 0.5 * r * Point2{std::cos(a), std::sin(a)});
  }
  out.push_back(center);
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * kPi * k / 8.0;
    out.push_back(center + 1.5 * r * Point2{std::cos(a), std::sin(a)});
  }
  return out;
}

namespace {

std::vector<Point2> circle_points(Point2 c, double r, int n) {
  std::vector<Point2> pts(n);
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * kPi * k / n;
    pts[k] = c + r * Point2{std::cos(a), std::sin(a)};
  }
  return pts;
}

double closed_variation(const std::vector<Point2>& pts) {
  double tv = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) tv += dist(pts[i], pts[(i + 1) % pts.size()]);
  return tv;
}

}  // namespace

INVReport check_inv_on_circle(const PlanarMap& map, Point2 center, double r, const Tolerances& tol,
                              const std::vector<Point2>& probes_in) {
  if (!(r > 0.0)) throw Error("bad-circle", "radius must be positive");
  const int n = std::max(tol.n_curve, 8);
  const auto src = circle_points(center, r, n);
  for (Point2 p : src) {
    if (!map.domain.contains(p)) throw Error("bad-circle", "circle leaves the domain");
  }
  for (Point2 d : map.discontinuities()) {
    if (std::abs(dist(d, center) - r) <= tol.tau_disc) throw Error("bad-circle", "circle touches a discontinuity");
  }
  INVReport rep;
  rep.center = center;
  rep.r = r;
  const auto img = serial::eval_batch(map, src, tol);
  const auto img2 = serial::eval_batch(map, circle_points(center, r, 2 * n), tol);
  rep.total_variation = closed_variation(img);
  const double tv2 = closed_variation(img2);
  if (!(rep.total_variation > 1e-12)) throw Error("bad-circle", "image of the circle is a single point");
  if (std::abs(tv2 - rep.total_variation) > tol.tv_stability * rep.total_variation) {
    throw Error("bad-circle", "image variation is not stable under refinement");
  }
  rep.image_curve = dedupe_vertices(img, true);
  if (rep.image_curve.size() < 2) throw Error("bad-circle", "image of the circle is degenerate");
  const Polyline curve(rep.image_curve, true);

  const auto probes = probes_in.empty() ? default_probes(center, r) : probes_in;
  for (Point2 z : probes) {
    ProbeResult pr;
    pr.z = z;
    pr.inside = dist(z, center) < r;
    if (!map.domain.contains(z)) {
      pr.verdict = ProbeResult::Verdict::skipped;
      pr.note = "outside the domain";
    } else if (std::abs(dist(z, center) - r) <= tol.tau_on) {
      pr.verdict = ProbeResult::Verdict::skipped;
      pr.note = "on the circle";
    } else if (distance_to_discontinuity(map, z) <= tol.tau_disc) {
      pr.verdict = ProbeResult::Verdict::indeterminate;
      pr.note = "probe at a discontinuity";
    } else {
      pr.image = eval(map, z, tol);
      try {
        pr.degree = winding_number(curve, pr.image, tol.tau_on, tol.winding_residual);
        const bool bad = pr.inside ? pr.degree == 0 : pr.degree != 0;
        pr.verdict = bad ? ProbeResult::Verdict::violation : ProbeResult::Verdict::ok;
      } catch (const Error& e) {
        pr.verdict = ProbeResult::Verdict::indeterminate;
        pr.note = e.code();
      }
    }
    if (pr.verdict == ProbeResult::Verdict::violation) rep.pass = false;
    rep.probes.push_back(pr);
  }
  return rep;
}

std::vector<CircleSpec> default_circle_family(const Domain& d) {
  const bool disk = d.kind == Domain::Kind::disk;
  const double R = disk ? d.R : 1.0;
  const Point2 c = disk ? Point2{0.0, 0.0} : Point2{0.5, 0.5};
  std::vector<CircleSpec> out;
  for (int k = 0; k < 9; ++k) out.push_back({c, R * (275.0 + 25.0 * k) / 1000.0});
  return out;
}

std::vector<CircleSpec> random_circle_family(const Domain& d, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CircleSpec> out;
  while (out.size() < count) {
    CircleSpec c;
    if (d.kind == Domain::Kind::disk) {
      const double rho = d.R * 0.6 * std::sqrt(rng.uniform());
      const double a = rng.uniform(0.0, 2.0 * kPi);
      c.center = rho * Point2{std::cos(a), std::sin(a)};
      const double room = d.R - rho;
      c.r = rng.uniform(0.1, 0.9) * room;
    } else {
      c.center = {rng.uniform(0.15, 0.85), rng.uniform(0.15, 0.85)};
      const double room = std::min({c.center.x, 1.0 - c.center.x, c.center.y, 1.0 - c.center.y});
      c.r = rng.uniform(0.2, 0.9) * room;
    }
    out.push_back(c);
  }
  return out;
}

ScanReport scan_inv(const PlanarMap& map, const std::vector<CircleSpec>& circles, const Tolerances& tol,
                    bool use_threads) {
  ScanReport scan;
  scan.circles = circles;
  scan.reports.resize(circles.size());
  std::vector<std::string> reasons(circles.size());
  auto one = [&](std::size_t i) {
    try {
      scan.reports[i] = check_inv_on_circle(map, circles[i].center, circles[i].r, tol);
    } catch (const Error& e) {
      reasons[i] = e.what();
    }
  };
  if (use_threads) {
    parallel_for(circles.size(), one);
  } else {
    serial_for(circles.size(), one);
  }
  for (std::size_t i = 0; i < circles.size(); ++i) {
    if (!scan.reports[i]) {
      scan.skipped.push_back({i, reasons[i]});
      continue;
    }
    if (scan.reports[i]->pass) {
      ++scan.passes;
    } else {
      ++scan.failures;
      if (!scan.first_violation) scan.first_violation = i;
    }
  }
  return scan;
}

}  // namespace noncross
