#include "noncross/injectify.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "noncross/kernels.hpp"

namespace noncross {

Point2 Piece::at_fraction(double f) const {
  const double s = std::clamp(f, 0.0, 1.0) * arc.back();
  auto it = std::upper_bound(arc.begin(), arc.end(), s);
  std::size_t i = it == arc.begin() ? 0 : static_cast<std::size_t>(it - arc.begin()) - 1;
  if (i + 1 >= path.size()) return path.back();
  const double len = arc[i + 1] - arc[i];
  return lerp(path[i], path[i + 1], len > 0.0 ? (s - arc[i]) / len : 0.0);
}

Point2 GridMap::eval_on_piece(std::size_t piece, Point2 source) const {
  const Piece& p = pieces[piece];
  const Point2 a = nodes[p.from].source, b = nodes[p.to].source;
  const double f = dist(source, a) / dist(a, b);
  return p.at_fraction(f);
}

bool check_vertex_ordering(const Rect& rect, Point2 p1, Point2 p2, Point2 p3, Point2 p4) {
  try {
    return !separated(rect, p1, p3, p2, p4);
  } catch (const Error& e) {
    if (e.code() == "degenerate-order") throw Error("degenerate-configuration", "coincident vertex-ordering points");
    throw;
  }
}

Rect arrival_rect(const ArrivalGrid& ag, int n, int m) { return {ag.x[n], ag.x[n + 1], ag.y[m], ag.y[m + 1]}; }

std::optional<std::pair<int, int>> locate_rect(const ArrivalGrid& ag, Point2 p) {
  auto find = [](const std::vector<double>& c, double v) -> int {
    auto it = std::upper_bound(c.begin(), c.end(), v);
    if (it == c.begin() || it == c.end()) return -1;
    const int n = static_cast<int>(it - c.begin()) - 1;
    if (v - c[n] <= 1e-12 || c[n + 1] - v <= 1e-12) return -1;
    return n;
  };
  const int n = find(ag.x, p.x), m = find(ag.y, p.y);
  if (n < 0 || m < 0) return std::nullopt;
  return std::make_pair(n, m);
}

namespace {

struct LineEntry {
  double coord;
  int node;
  bool marked;
};

std::vector<double> cumulative(const std::vector<Point2>& path) {
  std::vector<double> arc(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) arc[i] = arc[i - 1] + dist(path[i - 1], path[i]);
  return arc;
}

std::vector<Point2> straight_path(Point2 a, Point2 b, int n) {
  std::vector<Point2> pts;
  for (int i = 0; i <= n; ++i) pts.push_back(i == n ? b : lerp(a, b, static_cast<double>(i) / n));
  return pts;
}

}  // namespace

GridMap injectify(const PlanarMap& map, const Grid& grid, const ArrivalGrid& ag, const std::vector<MarkedPoint>& marked,
                  const Tolerances& tol) {
  validate_grid(grid, false);
  validate_arrival_grid(ag);
  {
    auto pairs = duplicate_images(marked, tol.tau_dup);
    if (!pairs.empty()) throw DistinctImageViolation(marked, std::move(pairs));
  }
  const GridLayout layout = grid_polyline(grid);
  GridMap gm;
  gm.grid = grid;
  gm.ag = ag;
  for (std::size_t i = 0; i < marked.size(); ++i) {
    gm.nodes.push_back({GridNode::Kind::marked, marked[i].location, marked[i].image, static_cast<int>(i)});
  }
  const int K = grid.K;
  std::vector<std::vector<LineEntry>> hlines(K + 1), vlines(K + 1);
  for (std::size_t i = 0; i < marked.size(); ++i) {
    const MarkedPoint& mp = marked[i];
    const int id = static_cast<int>(i);
    if (mp.kind == MarkedPoint::Kind::interior_crossing) {
      const GridSegment& seg = layout.segments.at(mp.segment);
      if (seg.orientation == GridSegment::Orientation::horizontal) {
        hlines[seg.line].push_back({mp.location.x, id, true});
      } else {
        vlines[seg.line].push_back({mp.location.y, id, true});
      }
      continue;
    }
    for (int j = 0; j <= K; ++j) {
      if (mp.location.y == grid.t[j]) hlines[j].push_back({mp.location.x, id, true});
    }
    for (int s = 0; s <= K; ++s) {
      if (mp.location.x == grid.s[s]) vlines[s].push_back({mp.location.y, id, true});
    }
  }
  // vertex node id for (i, j), 1 <= i, j < K
  std::map<std::pair<int, int>, int> vertex_node;
  for (int j = 1; j < K; ++j) {
    for (int i = 1; i < K; ++i) {
      const Point2 v{grid.s[i], grid.t[j]};
      const int id = static_cast<int>(gm.nodes.size());
      gm.nodes.push_back({GridNode::Kind::vertex, v, eval_extended(map, v, tol), -1});
      vertex_node[{i, j}] = id;
      hlines[j].push_back({v.x, id, false});
      vlines[i].push_back({v.y, id, false});
    }
  }

  // vertex node -> (horizontal simple, vertical simple)
  std::map<int, std::pair<int, int>> vertex_hosts;
  auto split_line = [&](std::vector<LineEntry>& entries, GridSegment::Orientation o, int line) {
    std::stable_sort(entries.begin(), entries.end(), [](const LineEntry& a, const LineEntry& b) { return a.coord < b.coord; });
    if (entries.empty() || !entries.front().marked || !entries.back().marked) {
      throw Error("rectangle-assignment-failed", "grid line does not end at boundary lattice points");
    }
    const bool boundary = line == 0 || line == K;
    int start = entries.front().node;
    std::vector<int> inner;
    for (std::size_t k = 1; k < entries.size(); ++k) {
      if (!entries[k].marked) {
        inner.push_back(entries[k].node);
        continue;
      }
      SimpleSegment ss;
      ss.orientation = o;
      ss.line = line;
      ss.from = start;
      ss.to = entries[k].node;
      ss.vertices = inner;
      ss.boundary = boundary;
      const int sid = static_cast<int>(gm.simples.size());
      for (int v : inner) {
        auto& host = vertex_hosts[v];
        (o == GridSegment::Orientation::horizontal ? host.first : host.second) = sid;
      }
      gm.simples.push_back(ss);
      start = entries[k].node;
      inner.clear();
    }
  };
  for (int j = 0; j <= K; ++j) split_line(hlines[j], GridSegment::Orientation::horizontal, j);
  for (int i = 0; i <= K; ++i) split_line(vlines[i], GridSegment::Orientation::vertical, i);

  // Rectangles and chords.
  for (auto& ss : gm.simples) {
    if (ss.boundary) continue;
    const Point2 a = gm.nodes[ss.from].source, b = gm.nodes[ss.to].source;
    const Point2 probe = ss.vertices.empty() ? eval_extended(map, lerp(a, b, 0.5), tol) : gm.nodes[ss.vertices[0]].image;
    const auto loc = locate_rect(ag, probe);
    if (!loc) throw Error("rectangle-assignment-failed", "segment image lies on an arrival line");
    ss.rect_n = loc->first;
    ss.rect_m = loc->second;
    ss.rect = arrival_rect(ag, ss.rect_n, ss.rect_m);
    const double slack = 1e-9;
    if (!ss.rect.contains(gm.nodes[ss.from].image, slack) || !ss.rect.contains(gm.nodes[ss.to].image, slack)) {
      throw Error("rectangle-assignment-failed", "endpoint images are not in a common arrival rectangle");
    }
    const int m = std::max(8, static_cast<int>(std::ceil(tol.n_samples * dist(a, b))));
    for (int k = 1; k < m; ++k) {
      const Point2 img = eval_extended(map, lerp(a, b, static_cast<double>(k) / m), tol);
      if (!ss.rect.contains(img, slack)) {
        throw Error("rectangle-assignment-failed", "segment image leaves its arrival rectangle");
      }
    }
    ss.da = rect_to_disk(ss.rect, gm.nodes[ss.from].image);
    ss.db = rect_to_disk(ss.rect, gm.nodes[ss.to].image);
    if (dist(ss.da, ss.db) <= 1e-12) throw Error("rectangle-assignment-failed", "segment endpoints share an image");
    ss.vertex_params.assign(ss.vertices.size(), 0.0);
  }

  // Vertex images: the unique crossing of the two host chords.
  for (const auto& [node, hosts] : vertex_hosts) {
    SimpleSegment& h = gm.simples[hosts.first];
    SimpleSegment& v = gm.simples[hosts.second];
    VertexCheck vc;
    vc.node = node;
    vc.p1 = gm.nodes[h.from].image;
    vc.p2 = gm.nodes[h.to].image;
    vc.p3 = gm.nodes[v.to].image;
    vc.p4 = gm.nodes[v.from].image;
    if (h.rect_n != v.rect_n || h.rect_m != v.rect_m) {
      throw Error("rectangle-assignment-failed", "the two segments through a vertex lie in different rectangles");
    }
    try {
      vc.consistent = check_vertex_ordering(h.rect, vc.p1, vc.p2, vc.p3, vc.p4);
    } catch (const Error& e) {
      vc.consistent = false;
      vc.note = e.code();
    }
    if (!vc.consistent) {
      if (vc.note.empty()) vc.note = "ordering violated";
      gm.vertex_checks.push_back(vc);
      throw NcObstruction("vertex ordering check failed", vc);
    }
    SegmentHit hit;
    hit = segment_intersection(h.da, h.db, v.da, v.db);
    if (hit.kind == SegmentHit::Kind::overlap) {
      vc.note = "degenerate-chords";
      throw NcObstruction("chords through a vertex overlap", vc);
    }
    if (hit.kind == SegmentHit::Kind::empty || hit.ta <= 0.0 || hit.ta >= 1.0 || hit.tb <= 0.0 || hit.tb >= 1.0) {
      vc.note = "chords do not cross";
      throw NcObstruction("chords through a vertex do not cross", vc);
    }
    gm.nodes[node].image = disk_to_rect(h.rect, hit.point);
    const auto ih = std::find(h.vertices.begin(), h.vertices.end(), node) - h.vertices.begin();
    const auto iv = std::find(v.vertices.begin(), v.vertices.end(), node) - v.vertices.begin();
    h.vertex_params[ih] = hit.ta;
    v.vertex_params[iv] = hit.tb;
    gm.vertex_checks.push_back(vc);
  }

  // Pieces between consecutive nodes.
  const int n = std::max(1, tol.resolution);
  for (std::size_t sid = 0; sid < gm.simples.size(); ++sid) {
    const SimpleSegment& ss = gm.simples[sid];
    std::vector<int> chain{ss.from};
    chain.insert(chain.end(), ss.vertices.begin(), ss.vertices.end());
    chain.push_back(ss.to);
    std::vector<double> params{0.0};
    params.insert(params.end(), ss.vertex_params.begin(), ss.vertex_params.end());
    params.push_back(1.0);
    for (std::size_t k = 1; k < params.size(); ++k) {
      if (!(params[k] > params[k - 1])) {
        VertexCheck vc;
        vc.node = chain[k];
        vc.consistent = false;
        vc.note = "vertex images out of order along a chord";
        throw NcObstruction("vertex images out of order along a chord", vc);
      }
    }
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      Piece p;
      p.simple = static_cast<int>(sid);
      p.from = chain[k];
      p.to = chain[k + 1];
      p.t0 = params[k];
      p.t1 = params[k + 1];
      const Point2 ia = gm.nodes[p.from].image, ib = gm.nodes[p.to].image;
      p.path = ss.boundary ? straight_path(ia, ib, n) : chord_path(ss.rect, ss.da, ss.db, p.t0, p.t1, n, ia, ib);
      p.arc = cumulative(p.path);
      gm.pieces.push_back(std::move(p));
    }
  }
  return gm;
}

InjectivityReport verify_injective(const GridMap& v, const Tolerances& tol) {
  InjectivityReport rep;
  rep.vertex_checks = v.vertex_checks;
  auto flag = [&](const std::string& kind, int a, int b, Point2 p) { rep.violations.push_back({kind, a, b, p}); };

  for (std::size_t i = 0; i < v.pieces.size(); ++i) {
    const Piece& p = v.pieces[i];
    const int pi = static_cast<int>(i);
    if (p.path.size() < 2 || dist(p.path.front(), v.nodes[p.from].image) > 1e-12 ||
        dist(p.path.back(), v.nodes[p.to].image) > 1e-12) {
      flag("continuity", pi, pi, p.path.empty() ? Point2{} : p.path.front());
    }
    const SimpleSegment& ss = v.simples[p.simple];
    if (ss.boundary) continue;
    for (Point2 q : p.path) {
      if (!ss.rect.contains(q, 1e-12)) {
        flag("containment", pi, pi, q);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < v.simples.size(); ++i) {
    const SimpleSegment& ss = v.simples[i];
    if (!ss.boundary) continue;
    for (int id : {ss.from, ss.to}) {
      if (dist(v.nodes[id].image, v.nodes[id].source) > 1e-12) {
        flag("boundary-identity", static_cast<int>(i), static_cast<int>(i), v.nodes[id].image);
      }
    }
  }
  // Vertices sit on both host chords.
  std::map<int, std::vector<int>> hosts;
  for (std::size_t i = 0; i < v.simples.size(); ++i) {
    for (int node : v.simples[i].vertices) hosts[node].push_back(static_cast<int>(i));
  }
  for (const auto& [node, list] : hosts) {
    for (int sid : list) {
      const SimpleSegment& ss = v.simples[sid];
      const Point2 q = rect_to_disk(ss.rect, v.nodes[node].image);
      if (point_segment_distance(q, ss.da, ss.db) >= 1e-10) flag("vertex-off-chord", sid, sid, v.nodes[node].image);
    }
  }
  // Pairs within one rectangle, by exact chord logic.
  std::map<std::pair<int, int>, std::vector<int>> by_rect;
  for (std::size_t i = 0; i < v.simples.size(); ++i) {
    if (!v.simples[i].boundary) by_rect[{v.simples[i].rect_n, v.simples[i].rect_m}].push_back(static_cast<int>(i));
  }
  for (const auto& [key, list] : by_rect) {
    for (std::size_t x = 0; x < list.size(); ++x) {
      for (std::size_t y = x + 1; y < list.size(); ++y) {
        const SimpleSegment& A = v.simples[list[x]];
        const SimpleSegment& B = v.simples[list[y]];
        const SegmentHit hit = segment_intersection(A.da, A.db, B.da, B.db);
        int shared_vertex = -1;
        for (int va : A.vertices) {
          if (std::find(B.vertices.begin(), B.vertices.end(), va) != B.vertices.end()) shared_vertex = va;
        }
        int shared_end = -1;
        for (int ea : {A.from, A.to}) {
          if (ea == B.from || ea == B.to) shared_end = ea;
        }
        const Point2 where = hit.kind == SegmentHit::Kind::empty ? Point2{} : disk_to_rect(A.rect, hit.point);
        if (shared_vertex >= 0) {
          const Point2 q = rect_to_disk(A.rect, v.nodes[shared_vertex].image);
          if (hit.kind != SegmentHit::Kind::point || dist(hit.point, q) > 1e-10) {
            flag("vertex-crossing", list[x], list[y], where);
          }
        } else if (shared_end >= 0) {
          const Point2 q = rect_to_disk(A.rect, v.nodes[shared_end].image);
          if (hit.kind != SegmentHit::Kind::point || !hit.endpoint_shared || dist(hit.point, q) > 1e-12) {
            flag("shared-endpoint", list[x], list[y], where);
          }
        } else if (hit.kind != SegmentHit::Kind::empty) {
          flag("crossing", list[x], list[y], where);
        }
      }
    }
  }
  // Node images are pairwise distinct across all rectangles.
  {
    std::vector<MarkedPoint> pseudo(v.nodes.size());
    for (std::size_t i = 0; i < v.nodes.size(); ++i) pseudo[i].image = v.nodes[i].image;
    for (const auto& d : duplicate_images(pseudo, tol.tau_dup)) {
      flag("duplicate-node-image", static_cast<int>(d.i), static_cast<int>(d.j), v.nodes[d.i].image);
    }
  }
  if (tol.full_sweep) {
    std::vector<Segment2> segs;
    std::vector<int> owner;
    for (std::size_t i = 0; i < v.pieces.size(); ++i) {
      const auto& path = v.pieces[i].path;
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        segs.push_back({path[k], path[k + 1]});
        owner.push_back(static_cast<int>(i));
      }
    }
    auto shared_node_point = [&](int a, int b, Point2 p) {
      const Piece& A = v.pieces[a];
      const Piece& B = v.pieces[b];
      for (int na : {A.from, A.to}) {
        if ((na == B.from || na == B.to) && dist(p, v.nodes[na].image) <= 1e-12) return true;
      }
      return false;
    };
    auto hit = find_crossing(segs, [&](std::size_t i, std::size_t j, const SegmentHit& h) {
      if (h.kind != SegmentHit::Kind::point) return false;
      if (owner[i] == owner[j]) return j == i + 1;
      return shared_node_point(owner[i], owner[j], h.point);
    });
    if (hit) flag("sweep-crossing", owner[hit->i], owner[hit->j], hit->point);
  }
  rep.injective = rep.violations.empty();
  return rep;
}

double sup_error(const GridMap& v, const PlanarMap& map, int n_samples, bool use_threads) {
  double total = 0.0;
  for (const auto& p : v.pieces) total += dist(v.nodes[p.from].source, v.nodes[p.to].source);
  std::vector<Point2> src, img;
  for (std::size_t i = 0; i < v.pieces.size(); ++i) {
    const Piece& p = v.pieces[i];
    const Point2 a = v.nodes[p.from].source, b = v.nodes[p.to].source;
    const int m = std::max(2, static_cast<int>(std::ceil(n_samples * dist(a, b) / total)));
    for (int k = 0; k <= m; ++k) {
      const double f = static_cast<double>(k) / m;
      src.push_back(lerp(a, b, f));
      img.push_back(v.to_target(p.at_fraction(f)));
    }
  }
  if (use_threads) return parallel::max_distance(parallel::eval_batch(map, src), img);
  return serial::max_distance(serial::eval_batch(map, src), img);
}

PipelineResult run_pipeline(const PlanarMap& map, int K, double eta, std::uint64_t seed, const Tolerances& tol,
                            const std::optional<Grid>& supplied) {
  if (supplied) K = supplied->K;
  if (K < 2) throw Error("precondition", "K must be at least 2");
  if (!(eta > 0.0) || !(eta < 1.0 / K)) throw Error("precondition", "eta must lie in (0, 1/K)");
  if (map.domain.kind != Domain::Kind::unit_square) throw Error("precondition", "the pipeline needs the unit-square domain");

  PipelineResult res;
  PlanarMap work = map;
  Mat2 A;
  Point2 b;
  if (map.declares_identity_on_boundary() || boundary_identity_deviation(map) < 1e-9) {
    res.regime = "identity-boundary";
    res.eta_normalized = eta;
  } else {
    const AffineTrace tr = boundary_affine_trace(map);
    if (!tr.ok) throw Error("unsupported-boundary", "boundary trace is neither the identity nor affine");
    A = tr.M;
    b = tr.b;
    const Mat2 Ai = A.inverse();
    work = composition_map({map, affine_map(Ai, -1.0 * (Ai * b))});
    res.regime = "affine-boundary";
    res.eta_normalized = eta / A.spectral_norm();
  }
  if (supplied) {
    validate_grid(*supplied, false);
    res.grid = *supplied;
  } else {
    res.grid = build_grid(K, work, seed, tol);
  }
  res.ag = build_arrival_grid(work, res.grid, res.eta_normalized, splitmix64(seed), tol);
  res.marked = marked_points(work, res.grid, res.ag, tol);
  res.gridmap = injectify(work, res.grid, res.ag, res.marked, tol);
  res.gridmap.M = A;
  res.gridmap.b = b;
  res.report = verify_injective(res.gridmap, tol);
  res.report.sup_error = sup_error(res.gridmap, map);
  res.report.bound = std::sqrt(2.0) * eta;
  return res;
}

}  // namespace noncross
