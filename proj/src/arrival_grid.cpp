#include "noncross/arrival_grid.hpp"

#include <algorithm>
#include <numeric>

#include "noncross/kernels.hpp"

namespace noncross {

void validate_arrival_grid(const ArrivalGrid& ag) {
  if (!(ag.eta > 0.0)) throw Error("schema-error", "arrival grid eta must be positive");
  for (const auto* v : {&ag.x, &ag.y}) {
    if (v->size() < 2 || v->front() != 0.0 || v->back() != 1.0) {
      throw Error("schema-error", "arrival coordinates must run from 0 to 1");
    }
    for (std::size_t i = 1; i < v->size(); ++i) {
      const double gap = (*v)[i] - (*v)[i - 1];
      if (!(gap > 0.0) || !(gap < ag.eta)) throw Error("schema-error", "arrival coordinates must increase by less than eta");
    }
  }
}

void ExcludedSet::add(double lo, double hi) {
  if (hi < lo) std::swap(lo, hi);
  auto it = std::lower_bound(iv_.begin(), iv_.end(), std::make_pair(lo, hi));
  iv_.insert(it, {lo, hi});
  std::vector<std::pair<double, double>> merged;
  for (const auto& p : iv_) {
    if (!merged.empty() && p.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, p.second);
    } else {
      merged.push_back(p);
    }
  }
  iv_ = std::move(merged);
}

bool ExcludedSet::contains(double v) const {
  auto it = std::upper_bound(iv_.begin(), iv_.end(), std::make_pair(v, std::numeric_limits<double>::infinity()));
  if (it == iv_.begin()) return false;
  --it;
  return v >= it->first && v <= it->second;
}

double ExcludedSet::measure() const {
  double m = 0.0;
  for (const auto& [lo, hi] : iv_) m += std::max(0.0, std::min(hi, 1.0) - std::max(lo, 0.0));
  return m;
}

std::string to_string(MarkedPoint::Kind k) {
  return k == MarkedPoint::Kind::interior_crossing ? "interior-crossing" : "boundary-lattice";
}

namespace {

double component(Point2 p, Axis axis) { return axis == Axis::x ? p.x : p.y; }

std::vector<Point2> boundary_lattice(const Grid& g) {
  std::vector<Point2> out;
  for (int i = 0; i <= g.K; ++i) out.push_back({g.s[i], 0.0});
  for (int i = 0; i <= g.K; ++i) out.push_back({g.s[i], 1.0});
  for (int j = 1; j < g.K; ++j) out.push_back({0.0, g.t[j]});
  for (int j = 1; j < g.K; ++j) out.push_back({1.0, g.t[j]});
  return out;
}

// Intervals excluded because of one grid segment.
std::vector<std::pair<double, double>> segment_exclusions(const PlanarMap& map, const GridSegment& seg, Axis axis,
                                                          const Tolerances& tol) {
  std::vector<std::pair<double, double>> out;
  const double len = seg.length();
  const int m = std::max(8, static_cast<int>(std::ceil(tol.n_samples * len)));
  const double step = len / m;
  std::vector<Point2> src(m + 1);
  for (int k = 0; k <= m; ++k) src[k] = seg.at(static_cast<double>(k) / m);
  std::vector<double> val(m + 1);
  std::vector<char> usable(m + 1, 1);
  for (int k = 0; k <= m; ++k) {
    if (distance_to_discontinuity(map, src[k]) <= tol.tau_unreliable) {
      usable[k] = 0;
      try {
        const double v = component(eval_extended(map, src[k], tol), axis);
        out.push_back({v - tol.tau_bad, v + tol.tau_bad});
      } catch (const Error&) {
      }
      continue;
    }
    val[k] = component(eval_extended(map, src[k], tol), axis);
  }
  auto g = [&](double lam) { return component(eval_extended(map, seg.at(lam), tol), axis); };
  // Secant slopes between consecutive usable samples.
  std::vector<double> d(m, 0.0);
  std::vector<char> dok(m, 0);
  for (int k = 0; k < m; ++k) {
    if (usable[k] && usable[k + 1]) {
      d[k] = (val[k + 1] - val[k]) / step;
      dok[k] = 1;
    }
  }
  int k = 0;
  while (k < m) {
    if (dok[k] && std::abs(d[k]) < tol.tau_transversal) {
      double lo = std::min(val[k], val[k + 1]), hi = std::max(val[k], val[k + 1]);
      int e = k;
      while (e + 1 < m && dok[e + 1] && std::abs(d[e + 1]) < tol.tau_transversal) {
        ++e;
        lo = std::min(lo, val[e + 1]);
        hi = std::max(hi, val[e + 1]);
      }
      out.push_back({lo - tol.tau_bad, hi + tol.tau_bad});
      k = e + 1;
      continue;
    }
    ++k;
  }
  for (int j = 0; j + 1 < m; ++j) {
    if (!dok[j] || !dok[j + 1]) continue;
    if (std::abs(d[j]) < tol.tau_transversal || std::abs(d[j + 1]) < tol.tau_transversal) continue;
    if ((d[j] > 0) == (d[j + 1] > 0)) continue;
    // Golden-section refinement of the turning value on [lambda_j, lambda_{j+2}].
    const bool is_max = d[j] > 0;
    double a = static_cast<double>(j) / m, b = static_cast<double>(j + 2) / m;
    const double r = 0.6180339887498949;
    double c1 = b - r * (b - a), c2 = a + r * (b - a);
    double f1 = g(c1), f2 = g(c2);
    for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
      const bool keep_left = is_max ? f1 > f2 : f1 < f2;
      if (keep_left) {
        b = c2;
        c2 = c1;
        f2 = f1;
        c1 = b - r * (b - a);
        f1 = g(c1);
      } else {
        a = c1;
        c1 = c2;
        f1 = f2;
        c2 = a + r * (b - a);
        f2 = g(c2);
      }
    }
    double v = g(0.5 * (a + b));
    v = is_max ? std::max({v, val[j + 1], f1, f2}) : std::min({v, val[j + 1], f1, f2});
    out.push_back({v - tol.tau_bad, v + tol.tau_bad});
  }
  return out;
}

std::vector<GridSegment> interior_segments(const Grid& grid) {
  std::vector<GridSegment> out;
  for (const auto& s : grid_polyline(grid).segments) {
    if (!s.on_boundary(grid)) out.push_back(s);
  }
  return out;
}

struct LineCrossings {
  bool ok = true;
  std::vector<std::vector<double>> roots;  // per segment
};

LineCrossings crossings_for_level(const PlanarMap& map, const std::vector<GridSegment>& segs, double level, Axis axis,
                                  const Tolerances& tol) {
  LineCrossings lc;
  lc.roots.resize(segs.size());
  std::vector<char> bad(segs.size(), 0);
  parallel_for(segs.size(), [&](std::size_t i) {
    try {
      lc.roots[i] = preimages_on_segment(map, segs[i], level, axis, tol);
    } catch (const Error& e) {
      if (e.code() != "tangential-crossing") throw;
      bad[i] = 1;
    }
  });
  lc.ok = std::none_of(bad.begin(), bad.end(), [](char b) { return b != 0; });
  return lc;
}

}  // namespace

ExcludedSet bad_coordinates(const PlanarMap& map, const Grid& grid, Axis axis, const Tolerances& tol) {
  ExcludedSet ex;
  const GridLayout layout = grid_polyline(grid);
  std::vector<Point2> anchors = layout.interior_vertices;
  for (Point2 p : boundary_lattice(grid)) anchors.push_back(p);
  for (Point2 p : anchors) {
    const double v = component(eval_extended(map, p, tol), axis);
    ex.add(v - tol.tau_bad, v + tol.tau_bad);
  }
  std::vector<std::vector<std::pair<double, double>>> per(layout.segments.size());
  parallel_for(layout.segments.size(),
               [&](std::size_t i) { per[i] = segment_exclusions(map, layout.segments[i], axis, tol); });
  for (const auto& list : per) {
    for (const auto& [lo, hi] : list) ex.add(lo, hi);
  }
  if (ex.measure() > 0.5) throw Error("map-too-degenerate", "excluded coordinates cover more than half of [0,1]");
  return ex;
}

int arrival_line_count(double eta) {
  int N = static_cast<int>(std::floor(1.0 / eta)) + 1;
  if (eta - 1.0 / N < 0.1 * eta) ++N;
  return N;
}

ArrivalGrid build_arrival_grid(const PlanarMap& map, const Grid& grid, double eta, std::uint64_t seed,
                               const Tolerances& tol) {
  validate_grid(grid, false);
  if (!(eta > 0.0) || !(eta < 1.0 / grid.K)) throw Error("precondition", "eta must lie in (0, 1/K)");
  const int N = arrival_line_count(eta);
  const double h = 1.0 / N;
  const double amp = 0.9 * std::min(0.5 * (eta - h), 0.25 * h);
  const ExcludedSet ex_x = bad_coordinates(map, grid, Axis::x, tol);
  const ExcludedSet ex_y = bad_coordinates(map, grid, Axis::y, tol);
  const auto segs = interior_segments(grid);
  Rng rng(seed);

  ArrivalGrid ag;
  ag.eta = eta;
  ag.x.push_back(0.0);
  std::vector<Point2> d_images;
  for (int n = 1; n < N; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt <= tol.max_retries && !placed; ++attempt) {
      const double c = n * h + rng.uniform(-amp, amp);
      if (ex_x.contains(c)) continue;
      const LineCrossings lc = crossings_for_level(map, segs, c, Axis::x, tol);
      if (!lc.ok) continue;
      for (std::size_t i = 0; i < segs.size(); ++i) {
        for (double lam : lc.roots[i]) d_images.push_back(eval_extended(map, segs[i].at(lam), tol));
      }
      ag.x.push_back(c);
      placed = true;
    }
    if (!placed) throw Error("arrival-grid-failed", "no admissible x_" + std::to_string(n) + " within the retry budget");
  }
  ag.x.push_back(1.0);

  ag.y.push_back(0.0);
  for (int m = 1; m < N; ++m) {
    bool placed = false;
    for (int attempt = 0; attempt <= tol.max_retries && !placed; ++attempt) {
      const double c = m * h + rng.uniform(-amp, amp);
      if (ex_y.contains(c)) continue;
      if (std::any_of(d_images.begin(), d_images.end(), [&](Point2 p) { return std::abs(p.y - c) < tol.tau_bad; })) {
        continue;
      }
      const LineCrossings lc = crossings_for_level(map, segs, c, Axis::y, tol);
      if (!lc.ok) continue;
      bool near_vertex = false;
      for (std::size_t i = 0; i < segs.size() && !near_vertex; ++i) {
        for (double lam : lc.roots[i]) {
          const Point2 img = eval_extended(map, segs[i].at(lam), tol);
          for (std::size_t n = 1; n + 1 < ag.x.size(); ++n) {
            if (std::abs(img.x - ag.x[n]) < 0.5 * tol.tau_bad) near_vertex = true;
          }
        }
      }
      if (near_vertex) continue;
      ag.y.push_back(c);
      placed = true;
    }
    if (!placed) throw Error("arrival-grid-failed", "no admissible y_" + std::to_string(m) + " within the retry budget");
  }
  ag.y.push_back(1.0);
  return ag;
}

DistinctImageViolation::DistinctImageViolation(std::vector<MarkedPoint> points, std::vector<DuplicatePair> pairs)
    : Error("distinct-image-violation", std::to_string(pairs.size()) + " pair(s) of marked points share an image"),
      points_(std::move(points)),
      pairs_(std::move(pairs)) {}

std::vector<DuplicatePair> duplicate_images(const std::vector<MarkedPoint>& pts, double tau_dup) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pts[a].image.x < pts[b].image.x; });
  std::vector<DuplicatePair> pairs;
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const Point2 pa = pts[order[a]].image, pb = pts[order[b]].image;
      if (pb.x - pa.x > tau_dup) break;
      const double gap = dist(pa, pb);
      if (gap <= tau_dup) {
        pairs.push_back({std::min(order[a], order[b]), std::max(order[a], order[b]), gap});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const DuplicatePair& l, const DuplicatePair& r) { return std::tie(l.i, l.j) < std::tie(r.i, r.j); });
  return pairs;
}

std::vector<MarkedPoint> marked_points(const PlanarMap& map, const Grid& grid, const ArrivalGrid& ag,
                                       const Tolerances& tol, bool use_threads) {
  validate_grid(grid, false);
  validate_arrival_grid(ag);
  const GridLayout layout = grid_polyline(grid);
  std::vector<std::vector<MarkedPoint>> per(layout.segments.size());
  auto one = [&](std::size_t si) {
    const GridSegment& seg = layout.segments[si];
    if (seg.on_boundary(grid)) return;
    for (Axis axis : {Axis::x, Axis::y}) {
      const auto& levels = axis == Axis::x ? ag.x : ag.y;
      for (std::size_t li = 1; li + 1 < levels.size(); ++li) {
        for (double lam : preimages_on_segment(map, seg, levels[li], axis, tol)) {
          if (lam <= 0.0 || lam >= 1.0) throw Error("arrival-grid-failed", "an arrival line meets the image of a grid vertex");
          MarkedPoint mp;
          mp.location = seg.at(lam);
          mp.segment = static_cast<int>(si);
          mp.lambda = lam;
          mp.image = eval_extended(map, mp.location, tol);
          mp.axis = axis;
          mp.line = static_cast<int>(li);
          per[si].push_back(mp);
        }
      }
    }
  };
  if (use_threads) {
    parallel_for(per.size(), one);
  } else {
    serial_for(per.size(), one);
  }
  std::vector<MarkedPoint> out;
  for (auto& list : per) {
    std::stable_sort(list.begin(), list.end(), [](const MarkedPoint& a, const MarkedPoint& b) {
      return std::tie(a.axis, a.line, a.lambda) < std::tie(b.axis, b.line, b.lambda);
    });
    out.insert(out.end(), list.begin(), list.end());
  }
  for (Point2 p : boundary_lattice(grid)) {
    MarkedPoint mp;
    mp.kind = MarkedPoint::Kind::boundary_lattice;
    mp.location = p;
    const Point2 img = eval_extended(map, p, tol);
    mp.image = dist(img, p) < 1e-12 ? p : img;
    out.push_back(mp);
  }
  auto stable = [&](MarkedPoint& mp) {
    try {
      const Mat2 a = jacobian_fd(map, mp.location, tol.fd_step, tol);
      const Mat2 b = jacobian_fd(map, mp.location, 0.5 * tol.fd_step, tol);
      const double na = std::abs(a.a11) + std::abs(a.a12) + std::abs(a.a21) + std::abs(a.a22);
      const double diff = std::abs(a.a11 - b.a11) + std::abs(a.a12 - b.a12) + std::abs(a.a21 - b.a21) +
                          std::abs(a.a22 - b.a22);
      mp.lebesgue_surrogate = diff < 0.1 * na || (na == 0.0 && diff == 0.0);
    } catch (const Error&) {
      mp.lebesgue_surrogate = false;
    }
  };
  parallel_for(out.size(), [&](std::size_t i) { stable(out[i]); });
  auto pairs = duplicate_images(out, tol.tau_dup);
  if (!pairs.empty()) throw DistinctImageViolation(std::move(out), std::move(pairs));
  return out;
}

}  // namespace noncross
