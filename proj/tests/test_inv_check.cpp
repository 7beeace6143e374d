#include <gtest/gtest.h>

#include <cmath>

#include "noncross/inv_check.hpp"
#include "support.hpp"

using namespace noncross;
using noncross::testing::error_code;
using noncross::testing::load_map;

namespace {

long oracle_degree(const std::vector<Point2>& curve, Point2 p) {
  double total = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Point2 a = curve[i] - p, b = curve[(i + 1) % curve.size()] - p;
    total += std::atan2(cross(a, b), dot(a, b));
  }
  return std::lround(total / (2.0 * kPi));
}

std::vector<Point2> random_probes(Rng& rng, Point2 c, double r, int n) {
  std::vector<Point2> out;
  for (int i = 0; i < n; ++i) {
    const double rho = rng.uniform(0.05, 1.8) * r, a = rng.uniform(-kPi, kPi);
    out.push_back({c.x + rho * std::cos(a), c.y + rho * std::sin(a)});
  }
  return out;
}

}  // namespace

TEST(InvCheck, IdentityCirclePasses) {
  const INVReport r = check_inv_on_circle(identity_map(), {0.5, 0.5}, 0.2);
  EXPECT_TRUE(r.pass);
  int inside = 0;
  for (const auto& p : r.probes) {
    if (p.verdict != ProbeResult::Verdict::ok) continue;
    if (p.inside) {
      EXPECT_EQ(p.degree, 1);
      ++inside;
    } else {
      EXPECT_EQ(p.degree, 0);
    }
  }
  EXPECT_EQ(inside, 9);
}

TEST(InvCheck, CounterexampleFailsAtOrigin) {
  const INVReport r = check_inv_on_circle(counterexample_map(), {0.0, 0.0}, 0.75, {}, {{0.0, 0.0}});
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.probes.size(), 1u);
  const ProbeResult& p = r.probes[0];
  EXPECT_TRUE(p.inside);
  EXPECT_EQ(p.degree, 0);
  EXPECT_EQ(p.image, (Point2{1.0, 0.0}));
  EXPECT_EQ(p.verdict, ProbeResult::Verdict::violation);
  double lo = 1e9, hi = -1e9;
  for (Point2 q : r.image_curve) {
    EXPECT_EQ(q.y, 0.0);
    lo = std::min(lo, q.x);
    hi = std::max(hi, q.x);
  }
  EXPECT_NEAR(lo, 0.0, 1e-9);
  EXPECT_NEAR(hi, 0.5, 1e-9);
}

TEST(InvCheck, CounterexampleOuterCirclePassesAgainstWindingOracle) {
  Rng rng(21);
  const auto probes = random_probes(rng, {0.0, 0.0}, 1.3, 40);
  const INVReport r = check_inv_on_circle(counterexample_map(), {0.0, 0.0}, 1.3, {}, probes);
  EXPECT_TRUE(r.pass);
  int compared = 0;
  for (const auto& p : r.probes) {
    if (p.verdict != ProbeResult::Verdict::ok) continue;
    EXPECT_EQ(p.degree, oracle_degree(r.image_curve, p.image));
    EXPECT_EQ(p.degree, p.inside ? 1 : 0);
    ++compared;
  }
  EXPECT_GT(compared, 20);
}

TEST(InvCheck, BadCircles) {
  EXPECT_EQ(error_code([] { check_inv_on_circle(identity_map(), {0.5, 0.5}, 0.6); }), "bad-circle");
  EXPECT_EQ(error_code([] { check_inv_on_circle(counterexample_map(), {0.0, 0.0}, 1.0); }), "bad-circle");
  EXPECT_EQ(error_code([] { check_inv_on_circle(identity_map(), {0.5, 0.5}, -0.1); }), "bad-circle");
}

TEST(InvCheck, ProbeImageOnCurveIsIndeterminate) {
  // the probe (0.3, 0) maps to (0.4, 0), which lies on the collapsed image of the radius-0.75 circle
  const INVReport r = check_inv_on_circle(counterexample_map(), {0.0, 0.0}, 0.75, {}, {{0.3, 0.0}});
  ASSERT_EQ(r.probes.size(), 1u);
  EXPECT_EQ(r.probes[0].verdict, ProbeResult::Verdict::indeterminate);
  EXPECT_TRUE(r.pass);
}

TEST(InvScan, IdentityAndShearRandomFamiliesPass) {
  for (const char* name : {"identity", "shear_0.5"}) {
    const PlanarMap m = load_map(name);
    const ScanReport s = scan_inv(m, random_circle_family(m.domain, 20, 9));
    EXPECT_EQ(s.passes + s.skipped.size(), 20u) << name;
    EXPECT_EQ(s.failures, 0u) << name;
    for (const auto& rep : s.reports) {
      if (!rep) continue;
      for (const auto& p : rep->probes) {
        if (p.verdict == ProbeResult::Verdict::ok) {
          EXPECT_EQ(p.degree, oracle_degree(rep->image_curve, p.image));
        }
      }
    }
  }
}

TEST(InvScan, InjectiveFixturesPassFiftyCircles) {
  for (const char* name : {"twist", "affine"}) {
    const PlanarMap m = load_map(name);
    const ScanReport s = scan_inv(m, random_circle_family(m.domain, 50, 4));
    EXPECT_EQ(s.failures, 0u) << name;
    EXPECT_GT(s.passes, 40u) << name;
  }
}

TEST(InvScan, CounterexampleRadiiAllFailAtOrigin) {
  std::vector<CircleSpec> circles;
  for (int k = 0; k < 9; ++k) circles.push_back({{0.0, 0.0}, (55 + 5 * k) / 100.0});
  const ScanReport s = scan_inv(counterexample_map(), circles);
  EXPECT_EQ(s.failures, 9u);
  ASSERT_TRUE(s.first_violation.has_value());
  EXPECT_EQ(*s.first_violation, 0u);
  for (const auto& rep : s.reports) {
    ASSERT_TRUE(rep.has_value());
    bool origin_zero = false;
    for (const auto& p : rep->probes) origin_zero = origin_zero || (p.z == Point2{} && p.degree == 0 && p.inside);
    EXPECT_TRUE(origin_zero);
  }
}

TEST(InvScan, CounterexampleFailsForEveryProbeOnInnerDisk) {
  Rng rng(8);
  const PlanarMap u = counterexample_map();
  for (int trial = 0; trial < 30; ++trial) {
    const double r = rng.uniform(0.55, 0.95);
    const double rho = rng.uniform(0.0, 0.3), a = rng.uniform(-kPi, kPi);
    const Point2 z{rho * std::cos(a), rho * std::sin(a)};
    const double image_x = 1.0 - 2.0 * rho;
    if (image_x <= 1.0 - 2.0 * (1.0 - r) + 1e-6) continue;  // u(z) on the image segment
    const INVReport rep = check_inv_on_circle(u, {0.0, 0.0}, r, {}, {z});
    EXPECT_FALSE(rep.pass) << r << " " << rho;
  }
}

TEST(InvScan, VerdictsStableUnderRefinement) {
  Tolerances coarse, fine;
  coarse.n_curve = 256;
  fine.n_curve = 512;
  for (const char* name : {"twist", "counterexample"}) {
    const PlanarMap m = load_map(name);
    const auto circles = default_circle_family(m.domain);
    const ScanReport a = scan_inv(m, circles, coarse), b = scan_inv(m, circles, fine);
    ASSERT_EQ(a.reports.size(), b.reports.size());
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
      ASSERT_EQ(a.reports[i].has_value(), b.reports[i].has_value());
      if (a.reports[i]) {
        EXPECT_EQ(a.reports[i]->pass, b.reports[i]->pass) << name << " " << i;
      }
    }
  }
}

TEST(InvScan, SerialAndThreadedScansAgree) {
  const PlanarMap m = counterexample_map();
  const auto circles = random_circle_family(m.domain, 24, 5);
  const ScanReport a = scan_inv(m, circles, {}, false), b = scan_inv(m, circles, {}, true);
  EXPECT_EQ(a.passes, b.passes);
  EXPECT_EQ(a.failures, b.failures);
  EXPECT_EQ(a.skipped.size(), b.skipped.size());
  EXPECT_EQ(a.first_violation, b.first_violation);
}
