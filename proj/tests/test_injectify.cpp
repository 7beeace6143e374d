#include <gtest/gtest.h>

#include <cmath>

#include "noncross/injectify.hpp"
#include "noncross/serialize.hpp"
#include "support.hpp"

using namespace noncross;
using noncross::testing::error_code;
using noncross::testing::fixture;
using noncross::testing::load_map;

namespace {

GridMap identity_gridmap(int K, double eta, std::uint64_t seed) {
  const Grid g = uniform_grid(K);
  const ArrivalGrid ag = build_arrival_grid(identity_map(), g, eta, seed);
  return injectify(identity_map(), g, ag, marked_points(identity_map(), g, ag));
}

bool has_kind(const InjectivityReport& r, const std::string& kind) {
  for (const auto& v : r.violations) {
    if (v.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST(VertexOrdering, SameComponentIsConsistent) {
  const Rect r;
  EXPECT_TRUE(check_vertex_ordering(r, {0.5, 0.0}, {1.0, 0.3}, {0.5, 1.0}, {1.0, 0.7}));
}

TEST(VertexOrdering, OppositeComponentsViolate) {
  const Rect r;
  EXPECT_FALSE(check_vertex_ordering(r, {0.5, 0.0}, {1.0, 0.3}, {0.5, 1.0}, {0.0, 0.7}));
}

TEST(VertexOrdering, CoincidentPointsAreDegenerate) {
  EXPECT_EQ(error_code([] { check_vertex_ordering(Rect{}, {0.5, 0.0}, {0.5, 0.0}, {0.5, 1.0}, {0.0, 0.7}); }),
            "degenerate-configuration");
}

TEST(VertexOrdering, IdentityK2AllConsistent) {
  const GridMap v = identity_gridmap(2, 0.3, 1);
  ASSERT_EQ(v.vertex_checks.size(), 1u);
  for (const auto& vc : v.vertex_checks) {
    EXPECT_TRUE(vc.consistent);
    // oracle: same check through the raw cyclic order of the four end images
    const auto& host = v.nodes[vc.node];
    bool found = false;
    for (const auto& ss : v.simples) {
      if (std::find(ss.vertices.begin(), ss.vertices.end(), vc.node) == ss.vertices.end()) continue;
      const auto order = boundary_cyclic_order(ss.rect, {vc.p1, vc.p2, vc.p3, vc.p4});
      std::vector<std::size_t> pos(4);
      for (std::size_t k = 0; k < 4; ++k) pos[order[k]] = k;
      // p2 and p4 share a component of the boundary minus {p1, p3}
      auto between = [&](std::size_t x) {
        const std::size_t a = std::min(pos[0], pos[2]), b = std::max(pos[0], pos[2]);
        return pos[x] > a && pos[x] < b;
      };
      EXPECT_EQ(between(1), between(3));
      found = true;
      break;
    }
    EXPECT_TRUE(found);
    EXPECT_EQ(host.kind, GridNode::Kind::vertex);
  }
}

TEST(Injectify, IdentityK2VertexImagesNearVertices) {
  const GridMap v = identity_gridmap(2, 0.3, 1);
  for (const auto& n : v.nodes) EXPECT_LE(dist(n.image, n.source), std::sqrt(2.0) * 0.3);
  const InjectivityReport rep = verify_injective(v);
  EXPECT_TRUE(rep.injective);
  EXPECT_LE(sup_error(v, identity_map()), std::sqrt(2.0) * 0.3);
}

TEST(Injectify, IdentityK2PassesFullSweep) {
  Tolerances tol;
  tol.full_sweep = true;
  EXPECT_TRUE(verify_injective(identity_gridmap(2, 0.3, 1), tol).injective);
  EXPECT_TRUE(verify_injective(identity_gridmap(3, 0.2, 4), tol).injective);
}

TEST(Injectify, ShearK3WithinBound) {
  const PipelineResult r = run_pipeline(shear_map(0.5), 3, 0.2, 1);
  EXPECT_TRUE(r.report.injective);
  EXPECT_LE(r.report.sup_error, std::sqrt(2.0) * 0.2);
  EXPECT_DOUBLE_EQ(r.report.bound, std::sqrt(2.0) * 0.2);
}

TEST(Injectify, HalvingEtaTightensTheError) {
  const PipelineResult a = run_pipeline(shear_map(0.5), 3, 0.2, 1);
  const PipelineResult b = run_pipeline(shear_map(0.5), 3, 0.1, 1);
  EXPECT_LE(a.report.sup_error, std::sqrt(2.0) * 0.2);
  EXPECT_LE(b.report.sup_error, std::sqrt(2.0) * 0.1);
  EXPECT_LT(b.report.sup_error, a.report.sup_error);
}

TEST(Injectify, ExactImagePathsHaveNoError) {
  GridMap v = identity_gridmap(3, 0.2, 2);
  const int n = 256;
  for (auto& p : v.pieces) {
    const Point2 a = v.nodes[p.from].source, b = v.nodes[p.to].source;
    p.path.clear();
    for (int k = 0; k <= n; ++k) p.path.push_back(lerp(a, b, static_cast<double>(k) / n));
    p.arc.assign(1, 0.0);
    for (std::size_t k = 1; k < p.path.size(); ++k) p.arc.push_back(p.arc.back() + dist(p.path[k - 1], p.path[k]));
  }
  EXPECT_LT(sup_error(v, identity_map()), 2.0 / n);
}

TEST(Injectify, PlantedDuplicateImagesStopBeforeAssembly) {
  const Grid g = uniform_grid(2);
  const ArrivalGrid ag = build_arrival_grid(identity_map(), g, 0.3, 1);
  auto marked = marked_points(identity_map(), g, ag);
  marked[1].image = marked[0].image;
  EXPECT_EQ(error_code([&] { injectify(identity_map(), g, ag, marked); }), "distinct-image-violation");
}

TEST(Injectify, InterleavedChordsInOneRectangleCross) {
  GridMap v;
  const Rect r{0.0, 1.0, 0.0, 1.0};
  const std::vector<Point2> ends{{0.5, 0.0}, {1.0, 0.5}, {0.5, 1.0}, {0.0, 0.5}};
  for (Point2 p : ends) v.nodes.push_back({GridNode::Kind::marked, p, p, -1});
  for (int s = 0; s < 2; ++s) {
    SimpleSegment ss;
    ss.from = s;
    ss.to = s + 2;
    ss.rect = r;
    ss.rect_n = ss.rect_m = 0;
    ss.da = rect_to_disk(r, ends[s]);
    ss.db = rect_to_disk(r, ends[s + 2]);
    v.simples.push_back(ss);
    Piece p;
    p.simple = s;
    p.from = s;
    p.to = s + 2;
    p.path = chord_path(r, ss.da, ss.db, 0.0, 1.0, 32, ends[s], ends[s + 2]);
    p.arc.assign(1, 0.0);
    for (std::size_t k = 1; k < p.path.size(); ++k) p.arc.push_back(p.arc.back() + dist(p.path[k - 1], p.path[k]));
    v.pieces.push_back(p);
  }
  const InjectivityReport rep = verify_injective(v);
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(rep.violations[0].kind, "crossing");
  EXPECT_LT(dist(rep.violations[0].point, {0.5, 0.5}), 1e-12);
}

TEST(Injectify, MovedVertexImageIsDetected) {
  GridMap v = identity_gridmap(3, 0.2, 3);
  int vertex = -1;
  for (std::size_t i = 0; i < v.nodes.size(); ++i) {
    if (v.nodes[i].kind == GridNode::Kind::vertex) vertex = static_cast<int>(i);
  }
  ASSERT_GE(vertex, 0);
  v.nodes[vertex].image = v.nodes[vertex].image + Point2{1e-3, -1e-3};
  const InjectivityReport rep = verify_injective(v);
  EXPECT_FALSE(rep.injective);
  EXPECT_TRUE(has_kind(rep, "continuity") || has_kind(rep, "vertex-off-chord"));
}

TEST(Injectify, ContainmentAndBoundaryIdentity) {
  const PipelineResult r = run_pipeline(load_map("twist"), 3, 0.2, 5);
  ASSERT_TRUE(r.report.injective);
  const GridMap& v = r.gridmap;
  for (const auto& p : v.pieces) {
    const SimpleSegment& ss = v.simples[p.simple];
    if (ss.boundary) {
      for (int k = 0; k <= 16; ++k) {
        const Point2 src = lerp(v.nodes[p.from].source, v.nodes[p.to].source, k / 16.0);
        EXPECT_LT(dist(v.eval_on_piece(&p - v.pieces.data(), src), src), 1e-12);
      }
      continue;
    }
    for (std::size_t k = 0; k < p.path.size(); ++k) {
      EXPECT_TRUE(ss.rect.contains(p.path[k], 1e-12));
      const bool end = k == 0 || k + 1 == p.path.size();
      if (!end) {
        EXPECT_TRUE(ss.rect.strictly_contains(p.path[k]));
      }
    }
  }
}

TEST(Injectify, VerticesLieOnBothHostChords) {
  const PipelineResult r = run_pipeline(load_map("affine"), 3, 0.15, 2);
  ASSERT_TRUE(r.report.injective);
  EXPECT_EQ(r.regime, "affine-boundary");
  const GridMap& v = r.gridmap;
  for (const auto& ss : v.simples) {
    for (int node : ss.vertices) {
      const Point2 q = rect_to_disk(ss.rect, v.nodes[node].image);
      EXPECT_LT(point_segment_distance(q, ss.da, ss.db), 1e-10);
    }
  }
}

TEST(Pipeline, PositiveJacobianFixturesMeetTheBound) {
  Rng rng(2024);
  const char* names[] = {"identity", "affine", "shear_0.5", "twist"};
  for (int trial = 0; trial < 30; ++trial) {
    const char* name = names[trial % 4];
    const int K = rng.uniform_int(2, 4);
    const double eta = rng.uniform(0.3, 0.95) / K;
    const std::uint64_t seed = rng.next() % 1000;
    const PipelineResult r = run_pipeline(load_map(name), K, eta, seed);
    EXPECT_TRUE(r.report.injective) << name << " K=" << K << " eta=" << eta << " seed=" << seed;
    EXPECT_LE(r.report.sup_error, std::sqrt(2.0) * eta) << name << " K=" << K << " eta=" << eta;
  }
}

TEST(Pipeline, CollapsedDiskNeverYieldsAMap) {
  const PlanarMap m = load_map("embedded_counterexample");
  const Grid g = grid_from_json(read_json_file(fixture("grids/uniform_k4.json")));
  for (double eta : {0.2, 0.1, 0.05}) {
    const std::string code = error_code([&] { run_pipeline(m, 4, eta, 1, {}, g); });
    EXPECT_TRUE(code == "distinct-image-violation" || code == "nc-obstruction") << code;
  }
}

TEST(Pipeline, Preconditions) {
  EXPECT_EQ(error_code([] { run_pipeline(shear_map(0.5), 2, 0.6, 1); }), "precondition");
  EXPECT_EQ(error_code([] { run_pipeline(shear_map(0.5), 4, 0.3, 1); }), "precondition");
  EXPECT_EQ(error_code([] { run_pipeline(counterexample_map(), 2, 0.3, 1); }), "precondition");
  EXPECT_EQ(error_code([] { run_pipeline(twist_map({0.5, 0.5}, 0.8, 1.0), 2, 0.3, 1); }), "unsupported-boundary");
}

TEST(Pipeline, Regimes) {
  EXPECT_EQ(run_pipeline(load_map("twist"), 2, 0.3, 1).regime, "identity-boundary");
  EXPECT_EQ(run_pipeline(shear_map(0.5), 2, 0.3, 1).regime, "affine-boundary");
}

TEST(Pipeline, SameSeedSameArtifact) {
  const PipelineResult a = run_pipeline(load_map("twist"), 3, 0.2, 9);
  const PipelineResult b = run_pipeline(load_map("twist"), 3, 0.2, 9);
  EXPECT_EQ(dump(pipeline_to_json(a)), dump(pipeline_to_json(b)));
}
