#include "noncross/grids.hpp"

#include <algorithm>

#include "noncross/kernels.hpp"

namespace noncross {

void validate_grid(const Grid& g, bool check_jitter) {
  if (g.K < 2) throw Error("schema-error", "grid K must be at least 2");
  const std::size_t n = static_cast<std::size_t>(g.K) + 1;
  for (const auto* v : {&g.s, &g.t}) {
    if (v->size() != n) throw Error("schema-error", "grid coordinate lists must have K+1 entries");
    if (v->front() != 0.0 || v->back() != 1.0) throw Error("schema-error", "grid coordinates must run from 0 to 1");
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite((*v)[i])) throw Error("schema-error", "grid coordinate is not finite");
      if (i > 0 && !((*v)[i] > (*v)[i - 1])) throw Error("schema-error", "grid coordinates must increase");
      if (check_jitter && std::abs((*v)[i] - static_cast<double>(i) / g.K) >= 0.25 / g.K) {
        throw Error("schema-error", "grid coordinate farther than 1/(4K) from the lattice");
      }
    }
  }
}

Grid uniform_grid(int K) {
  if (K < 2) throw Error("precondition", "K must be at least 2");
  Grid g;
  g.K = K;
  for (int i = 0; i <= K; ++i) {
    g.s.push_back(static_cast<double>(i) / K);
    g.t.push_back(static_cast<double>(i) / K);
  }
  g.s.back() = g.t.back() = 1.0;
  return g;
}

bool GridSegment::on_boundary(const Grid& g) const { return line == 0 || line == g.K; }

GridLayout grid_polyline(const Grid& g) {
  GridLayout out;
  for (int j = 0; j <= g.K; ++j) {
    for (int i = 0; i < g.K; ++i) {
      out.segments.push_back({GridSegment::Orientation::horizontal, j, i, {g.s[i], g.t[j]}, {g.s[i + 1], g.t[j]}});
    }
  }
  for (int i = 0; i <= g.K; ++i) {
    for (int j = 0; j < g.K; ++j) {
      out.segments.push_back({GridSegment::Orientation::vertical, i, j, {g.s[i], g.t[j]}, {g.s[i], g.t[j + 1]}});
    }
  }
  for (int j = 1; j < g.K; ++j) {
    for (int i = 1; i < g.K; ++i) out.interior_vertices.push_back({g.s[i], g.t[j]});
  }
  return out;
}

double grid_jitter(int K, std::uint64_t seed, Axis axis, int index, int attempt) {
  if (attempt == 0) return 0.0;
  const std::uint64_t key = splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(axis == Axis::y) << 32) ^
                                                         static_cast<std::uint64_t>(index)));
  const double base = static_cast<double>(key >> 11) * 0x1.0p-53;
  const double golden = 0.6180339887498949;
  double f = base + golden * attempt;
  f -= std::floor(f);
  return (2.0 * f - 1.0) * (0.25 / K) * 0.999;
}

namespace {

Point2 line_point(Axis axis, double coord, double u) { return axis == Axis::x ? Point2{coord, u} : Point2{u, coord}; }

double line_variation(const PlanarMap& map, Axis axis, double coord, int n, const Tolerances& tol) {
  std::vector<Point2> pts(n + 1);
  for (int k = 0; k <= n; ++k) pts[k] = line_point(axis, coord, static_cast<double>(k) / n);
  const auto img = serial::eval_batch(map, pts, tol);
  double tv = 0.0;
  for (int k = 0; k < n; ++k) tv += dist(img[k], img[k + 1]);
  return tv;
}

}  // namespace

std::string grid_line_defect(const PlanarMap& map, Axis axis, double coord, const Tolerances& tol) {
  for (Point2 d : map.discontinuities()) {
    const double off = axis == Axis::x ? std::abs(d.x - coord) : std::abs(d.y - coord);
    if (off <= tol.tau_disc) return "passes through a discontinuity";
  }
  const int n = std::max(tol.n_samples, 8);
  try {
    for (int k = 0; k <= n; ++k) {
      const Point2 p = line_point(axis, coord, static_cast<double>(k) / n);
      const double det = jacobian(map, p, tol.fd_step, tol).det();
      if (!(std::abs(det) > tol.tau_det)) return "jacobian determinant vanishes";
    }
    const double tv = line_variation(map, axis, coord, n, tol);
    const double tv2 = line_variation(map, axis, coord, 2 * n, tol);
    if (!std::isfinite(tv) || std::abs(tv2 - tv) > tol.tv_stability * std::max(tv, 1e-300)) {
      return "image variation unstable";
    }
  } catch (const Error& e) {
    return e.code();
  }
  return {};
}

Grid build_grid(int K, const PlanarMap& map, std::uint64_t seed, const Tolerances& tol, bool use_threads) {
  if (K < 2) throw Error("precondition", "K must be at least 2");
  if (map.domain.kind != Domain::Kind::unit_square) throw Error("precondition", "grids need the unit-square domain");
  Grid g = uniform_grid(K);
  const int lines = K - 1;
  std::vector<double> coords(2 * lines);
  std::vector<int> failed(2 * lines, 0);
  auto pick = [&](std::size_t slot) {
    const Axis axis = slot < static_cast<std::size_t>(lines) ? Axis::x : Axis::y;
    const int index = static_cast<int>(slot % lines) + 1;
    for (int attempt = 0; attempt <= tol.max_retries; ++attempt) {
      const double c = static_cast<double>(index) / K + grid_jitter(K, seed, axis, index, attempt);
      if (grid_line_defect(map, axis, c, tol).empty()) {
        coords[slot] = c;
        return;
      }
    }
    failed[slot] = 1;
  };
  if (use_threads) {
    parallel_for(coords.size(), pick);
  } else {
    serial_for(coords.size(), pick);
  }
  for (std::size_t slot = 0; slot < coords.size(); ++slot) {
    if (failed[slot]) {
      const bool vertical = slot < static_cast<std::size_t>(lines);
      throw Error("grid-construction-failed", std::string("no admissible ") + (vertical ? "s" : "t") + "_" +
                                                  std::to_string(slot % lines + 1) + " within the retry budget");
    }
  }
  for (int i = 1; i < K; ++i) {
    g.s[i] = coords[i - 1];
    g.t[i] = coords[lines + i - 1];
  }
  return g;
}

std::vector<double> preimages_on_segment(const PlanarMap& map, const GridSegment& seg, double level, Axis axis,
                                         const Tolerances& tol) {
  const double len = seg.length();
  const int m = std::max(8, static_cast<int>(std::ceil(tol.n_samples * len)));
  auto g = [&](double lambda) {
    const Point2 v = eval_extended(map, seg.at(lambda), tol);
    return (axis == Axis::x ? v.x : v.y) - level;
  };
  std::vector<double> vals(m + 1);
  for (int k = 0; k <= m; ++k) vals[k] = g(static_cast<double>(k) / m);
  const double step = len / m;
  auto slope_ok = [&](double d) { return std::abs(d) / step > tol.tau_transversal; };

  std::vector<double> roots;
  for (int k = 0; k <= m; ++k) {
    const double lam = static_cast<double>(k) / m;
    if (vals[k] == 0.0) {
      const double before = k > 0 ? vals[k - 1] : -vals[k + 1];
      const double after = k < m ? vals[k + 1] : -vals[k - 1];
      if (before * after >= 0.0 || !slope_ok(after - before)) {
        throw Error("tangential-crossing", "level touched without a sign change");
      }
      roots.push_back(lam);
      continue;
    }
    if (k < m && vals[k + 1] != 0.0 && (vals[k] < 0.0) != (vals[k + 1] < 0.0)) {
      if (!slope_ok(vals[k + 1] - vals[k])) throw Error("tangential-crossing", "crossing slope below threshold");
      double lo = lam, hi = static_cast<double>(k + 1) / m;
      double glo = vals[k];
      for (int it = 0; it < 200 && hi - lo > tol.root_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    // A near-zero local extremum of |g| without a sign change hides a tangency or a double root.
    if (k > 0 && k < m && vals[k - 1] * vals[k] > 0.0 && vals[k] * vals[k + 1] > 0.0 &&
        std::abs(vals[k]) <= std::abs(vals[k - 1]) && std::abs(vals[k]) <= std::abs(vals[k + 1]) &&
        std::abs(vals[k]) < tol.tau_transversal * step) {
      throw Error("tangential-crossing", "near-tangential approach to the level");
    }
  }
  return roots;
}

}  // namespace noncross
