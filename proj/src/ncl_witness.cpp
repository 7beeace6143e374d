#include "noncross/ncl_witness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace noncross {

namespace {

const Point2 kP{-1.0, 0.0};
constexpr double kPClearance = 1e-6;
constexpr double kNestingTol = 1e-6;

double u1(const PlanarMap& map, const Polyline& g, double t) { return eval(map, curve_at(g, t)).x; }

// Half-height of the ellipse u(circle of radius 1 + s) above abscissa x (0 outside it).
double ellipse_half_height(double s, double x) {
  const double xc = 0.5 * (1.0 - s), a = 0.5 * (1.0 + 3.0 * s), b = 2.0 * s;
  const double q = (x - xc) / a;
  return q * q >= 1.0 ? 0.0 : b * std::sqrt(1.0 - q * q);
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double& arg) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  arg = f1 <= f2 ? x1 : x2;
  return std::min(f1, f2);
}

using Sample = std::pair<double, Point2>;

// Samples f on (t0, t1]: the segment grid, `res` uniform points, then midpoint refinement until the
// chord sag is below sag_tol.
void add_range(std::vector<Sample>& out, const std::function<Point2(double)>& f, double t0, double t1, int nseg,
               int res, double sag_tol) {
  if (!(t1 > t0)) return;
  std::vector<double> ts;
  const double step = 1.0 / (static_cast<double>(nseg) * res);
  for (long long k = static_cast<long long>(std::floor(t0 / step)) + 1; k * step < t1; ++k) ts.push_back(k * step);
  for (int k = 1; k < res; ++k) ts.push_back(t0 + (t1 - t0) * k / res);
  ts.push_back(t1);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::function<void(double, Point2, double, Point2, int)> refine = [&](double a, Point2 fa, double b, Point2 fb,
                                                                        int depth) {
    const double m = 0.5 * (a + b);
    const Point2 fm = f(m);
    if (depth < 24 && dist(fm, 0.5 * (fa + fb)) > sag_tol) {
      refine(a, fa, m, fm, depth + 1);
      refine(m, fm, b, fb, depth + 1);
      return;
    }
    out.emplace_back(b, fb);
  };
  double a = t0;
  Point2 fa = f(t0);
  for (double t : ts) {
    if (t <= t0) continue;
    const Point2 ft = f(t);
    refine(a, fa, t, ft, 0);
    a = t;
    fa = ft;
  }
}

}  // namespace

Point2 curve_at(const Polyline& gamma, double t) {
  const std::size_t n = gamma.segment_count();
  const double T = std::clamp(t, 0.0, 1.0) * static_cast<double>(n);
  const std::size_t k = std::min(static_cast<std::size_t>(T), n - 1);
  return lerp(gamma.segment_start(k), gamma.segment_end(k), T - static_cast<double>(k));
}

std::vector<double> radius_crossings(const Polyline& gamma, double radius, double tau_transversal) {
  std::vector<double> out;
  const std::size_t n = gamma.segment_count();
  for (std::size_t k = 0; k < n; ++k) {
    const Point2 p = gamma.segment_start(k), d = gamma.segment_end(k) - p;
    const double A = dot(d, d), B = 2.0 * dot(p, d), C = dot(p, p) - radius * radius;
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) continue;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
    std::vector<double> roots;
    if (q != 0.0) {
      roots = {q / A, C / q};
    } else {
      roots = {0.0};
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    for (double lam : roots) {
      if (lam < 0.0 || lam >= 1.0) continue;
      const Point2 x = p + lam * d;
      const double c = std::abs(dot(x, d)) / (norm(x) * norm(d));
      if (c <= tau_transversal) {
        throw Error("non-transversal-curve", "tangential contact with the circle of radius " + std::to_string(radius));
      }
      if (lam == 0.0 && k > 0) {
        const Point2 dp = gamma.segment_end(k - 1) - gamma.segment_start(k - 1);
        if ((dot(x, dp) > 0.0) != (dot(x, d) > 0.0)) {
          throw Error("non-transversal-curve", "the curve touches a circle at a vertex without crossing");
        }
      }
      out.push_back((static_cast<double>(k) + lam) / static_cast<double>(n));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool chord_nested(const Crossing1& i, const Crossing1& j) {
  const double lo_i = std::min(i.theta_a, i.theta_b), hi_i = std::max(i.theta_a, i.theta_b);
  const double lo_j = std::min(j.theta_a, j.theta_b), hi_j = std::max(j.theta_a, j.theta_b);
  return lo_j < lo_i && hi_i < hi_j;
}

CrossingDecomposition decompose_crossings(const Polyline& gamma, double delta, const Tolerances& tol) {
  if (gamma.closed()) throw Error("precondition", "the curve must be open");
  const auto& v = gamma.vertices();
  if (std::abs(norm(v.front()) - 2.0) > 1e-9 || std::abs(norm(v.back()) - 2.0) > 1e-9) {
    throw Error("precondition", "curve endpoints must lie on the circle of radius 2");
  }
  for (Point2 p : v) {
    if (norm(p) > 2.0 + 1e-9) throw Error("precondition", "curve leaves the disk of radius 2");
  }
  if (!(delta > 0.0) || delta >= 1.0) throw Error("precondition", "delta must lie in (0, 1)");
  if (polyline_self_intersects(gamma, true)) throw Error("precondition", "curve is not injective");
  if (distance_to_polyline(gamma, kP) <= kPClearance) throw Error("curve-hits-P", "curve passes through (-1, 0)");

  const auto c1 = radius_crossings(gamma, 1.0, tol.tau_transversal);
  if (c1.size() % 2 != 0) throw Error("non-transversal-curve", "odd number of unit-circle crossings");
  const auto cd = radius_crossings(gamma, 1.0 + delta, tol.tau_transversal);
  const std::size_t N = c1.size() / 2;
  if (cd.size() != 2 * N) throw Error("delta-too-large", "extra crossings of the circle of radius 1 + delta");
  CrossingDecomposition dec;
  dec.gamma = gamma;
  dec.delta = delta;
  for (std::size_t i = 0; i < N; ++i) {
    Crossing1 c;
    c.a = c1[2 * i];
    c.b = c1[2 * i + 1];
    c.a_minus = cd[2 * i];
    c.b_plus = cd[2 * i + 1];
    if (!(c.a_minus < c.a && c.b < c.b_plus) || (i > 0 && !(dec.crossings.back().b_plus < c.a_minus))) {
      throw Error("delta-too-large", "marker circle crossings do not bracket the unit-disk intervals");
    }
    c.P = curve_at(gamma, c.a_minus);
    c.Q = curve_at(gamma, c.b_plus);
    const Point2 A = curve_at(gamma, c.a), B = curve_at(gamma, c.b);
    c.theta_a = std::atan2(A.y, A.x);
    c.theta_b = std::atan2(B.y, B.x);
    dec.crossings.push_back(c);
  }
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      if (i == j) continue;
      const auto& ci = dec.crossings[i];
      const auto& cj = dec.crossings[j];
      const double lo_i = std::min(ci.theta_a, ci.theta_b), hi_i = std::max(ci.theta_a, ci.theta_b);
      const double lo_j = std::min(cj.theta_a, cj.theta_b), hi_j = std::max(cj.theta_a, cj.theta_b);
      const bool disjoint = hi_i < lo_j || hi_j < lo_i;
      if (!disjoint && !chord_nested(ci, cj) && !chord_nested(cj, ci)) {
        throw Error("nesting-anomaly", "two chords interleave on the unit circle");
      }
    }
  }
  return dec;
}

WitnessPlan plan_witness(const CrossingDecomposition& dec, const PlanarMap& map, double eps, const Tolerances& tol) {
  if (map.kind != MapKind::counterexample) throw Error("precondition", "witnesses are built for the counterexample map");
  if (!(eps > 0.0)) throw Error("precondition", "eps must be positive");
  const double delta = dec.delta;
  if (!(delta < eps / 8.0)) throw Error("precondition", "delta must be below eps/8");
  const Polyline& g = dec.gamma;
  const std::size_t N = dec.crossings.size();
  const int nseg = static_cast<int>(g.segment_count());
  const int res = std::max(8, tol.witness_resolution);
  const double floor_c = tol.min_constant;
  auto too_small = [](const std::string& what) {
    return Error("epsilon-too-small-for-resolution", what + " fell below the minimum constant");
  };

  WitnessPlan plan;
  plan.eps = eps;
  plan.delta = delta;
  plan.crossings.resize(N);
  if (delta < floor_c) throw too_small("delta");

  // Minimum of u_1 along each interval, smallest minimizer first.
  for (std::size_t i = 0; i < N; ++i) {
    const auto& c = dec.crossings[i];
    auto f = [&](double t) { return u1(map, g, t); };
    const int m = res * std::max(1, static_cast<int>(std::ceil((c.b - c.a) * nseg)));
    std::vector<double> ts(m + 1), fs(m + 1);
    for (int k = 0; k <= m; ++k) {
      ts[k] = c.a + (c.b - c.a) * k / m;
      fs[k] = f(ts[k]);
    }
    std::vector<std::pair<double, double>> cands;  // (value, t)
    for (int k = 0; k <= m; ++k) {
      const bool left = k == 0 || fs[k] <= fs[k - 1];
      const bool right = k == m || fs[k] <= fs[k + 1];
      if (!left || !right) continue;
      double arg = ts[k];
      const double lo = ts[std::max(0, k - 1)], hi = ts[std::min(m, k + 1)];
      double val = golden_min(f, lo, hi, arg);
      if (fs[k] < val) {
        val = fs[k];
        arg = ts[k];
      }
      cands.emplace_back(val, arg);
    }
    double ell = std::numeric_limits<double>::infinity();
    for (const auto& cd : cands) ell = std::min(ell, cd.first);
    double cmin = std::numeric_limits<double>::infinity();
    for (const auto& cd : cands) {
      if (cd.first <= ell + 1e-12) cmin = std::min(cmin, cd.second);
    }
    plan.crossings[i].ell = ell;
    plan.crossings[i].c = cmin;
  }

  // Nesting structure and the ordering of nested minima.
  std::vector<int> contains(N, 0);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      if (i == j || !chord_nested(dec.crossings[i], dec.crossings[j])) continue;
      plan.crossings[i].depth += 1;
      contains[j] += 1;
      if (plan.crossings[j].ell > plan.crossings[i].ell + kNestingTol) {
        throw Error("nesting-anomaly", "a nested chord has a smaller minimum than the chord around it");
      }
    }
  }
  if (N == 0) {
    plan.tail = delta / 2.0;
    plan.delta1 = delta / 16.0;
    plan.delta2 = plan.delta1 / 16.0;
    plan.delta3 = plan.delta2 / 16.0;
    return plan;
  }

  // Boundary ranks of the 2N crossing points.
  struct End {
    double theta;
    std::size_t crossing;
    bool entry;
  };
  std::vector<End> ends;
  for (std::size_t i = 0; i < N; ++i) {
    ends.push_back({dec.crossings[i].theta_a, i, true});
    ends.push_back({dec.crossings[i].theta_b, i, false});
  }
  std::sort(ends.begin(), ends.end(), [](const End& x, const End& y) { return x.theta < y.theta; });

  // Tail radius: straight tails start on the ellipse u(|x| = 1 + s), right of x = 1, in boundary order.
  bool ok = false;
  double s = delta / 2.0;
  for (int it = 0; it < tol.shrink_iterations && !ok && s >= floor_c; ++it, s = ok ? s : s / 2.0) {
    std::vector<double> cr;
    try {
      cr = radius_crossings(g, 1.0 + s, tol.tau_transversal);
    } catch (const Error&) {
      continue;
    }
    ok = true;
    for (std::size_t i = 0; i < N && ok; ++i) {
      const auto& c = dec.crossings[i];
      std::vector<double> in_a, in_b;
      for (double t : cr) {
        if (t > c.a_minus && t < c.a) in_a.push_back(t);
        if (t > c.b && t < c.b_plus) in_b.push_back(t);
      }
      if (in_a.size() != 1 || in_b.size() != 1) {
        ok = false;
        break;
      }
      plan.crossings[i].tau_a = in_a[0];
      plan.crossings[i].tau_b = in_b[0];
      for (double t : {in_a[0], in_b[0]}) {
        if (eval(map, curve_at(g, t)).x <= 1.0 + 1e-3 * s) ok = false;
      }
    }
    if (!ok) continue;
    std::vector<double> tail_theta;
    for (const auto& e : ends) {
      const double t = e.entry ? plan.crossings[e.crossing].tau_a : plan.crossings[e.crossing].tau_b;
      const Point2 p = curve_at(g, t);
      tail_theta.push_back(std::atan2(p.y, p.x));
    }
    ok = std::is_sorted(tail_theta.begin(), tail_theta.end()) &&
         std::adjacent_find(tail_theta.begin(), tail_theta.end()) == tail_theta.end();
  }
  if (!ok || s < floor_c) throw too_small("tail radius");
  plan.tail = s;

  // delta1: the strip [-delta1, 1] x [-delta1, delta1] sits well inside the tail ellipse.
  double d1 = delta / 16.0;
  ok = false;
  for (int it = 0; it < 4 * tol.shrink_iterations && d1 >= floor_c; ++it) {
    if (ellipse_half_height(s, 1.0) >= 2.0 * d1 && ellipse_half_height(s, -d1) >= 2.0 * d1) {
      ok = true;
      break;
    }
    d1 /= 2.0;
  }
  if (!ok || d1 < floor_c) throw too_small("delta'");
  plan.delta1 = d1;
  const double gap = 2.0 * d1 / static_cast<double>(2 * N + 1);
  plan.delta2 = std::min(d1, gap) / 8.0;
  if (plan.delta2 < floor_c) throw too_small("delta''");
  for (std::size_t r = 0; r < ends.size(); ++r) {
    const double y = -d1 + static_cast<double>(r + 1) * gap;
    auto& wc = plan.crossings[ends[r].crossing];
    (ends[r].entry ? wc.p_tilde : wc.q_tilde) = y;
  }
  const double denom = static_cast<double>((N + 1) * (N + 1));
  for (std::size_t i = 0; i < N; ++i) {
    const double w = (static_cast<double>((N + 1) * contains[i]) + static_cast<double>(i + 1)) / denom;
    plan.crossings[i].ell_tilde = plan.crossings[i].ell - plan.delta2 * w;
  }

  // delta3: u_1 stays inside the bridge band on (c - 2 delta3, c + 2 delta3).
  double d3 = plan.delta2 / 16.0;
  ok = false;
  for (int it = 0; it < 4 * tol.shrink_iterations && d3 >= floor_c; ++it) {
    ok = true;
    for (std::size_t i = 0; i < N && ok; ++i) {
      const auto& c = dec.crossings[i];
      const auto& wc = plan.crossings[i];
      if (!(wc.c - 2.0 * d3 > c.a && wc.c + 2.0 * d3 < c.b)) {
        ok = false;
        break;
      }
      for (int k = 0; k <= 32; ++k) {
        const double v = u1(map, g, wc.c - 2.0 * d3 + 4.0 * d3 * k / 32.0);
        if (!(v > wc.ell_tilde - plan.delta2 && v < wc.ell_tilde + plan.delta2)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) break;
    d3 /= 2.0;
  }
  if (!ok || d3 < floor_c) throw too_small("delta'''");
  plan.delta3 = d3;
  return plan;
}

Point2 Witness::at(double t) const {
  const auto& v = phi.vertices();
  if (t <= params.front()) return v.front();
  if (t >= params.back()) return v.back();
  const auto it = std::upper_bound(params.begin(), params.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - params.begin());
  const double span = params[k] - params[k - 1];
  return lerp(v[k - 1], v[k], span > 0.0 ? (t - params[k - 1]) / span : 0.0);
}

Witness build_witness(const CrossingDecomposition& dec, const WitnessPlan& plan, const PlanarMap& map,
                      const Tolerances& tol) {
  const Polyline& g = dec.gamma;
  const int nseg = static_cast<int>(g.segment_count());
  const int res = std::max(8, tol.witness_resolution);
  const double sag_u = std::min(plan.eps / 100.0, plan.tail * plan.tail / 64.0);
  const double sag_track = plan.eps / 100.0;
  auto u = [&](double t) { return eval(map, curve_at(g, t)); };

  std::vector<Sample> out;
  out.emplace_back(0.0, u(0.0));
  double from = 0.0;
  for (std::size_t i = 0; i < dec.crossings.size(); ++i) {
    const auto& c = dec.crossings[i];
    const auto& w = plan.crossings[i];
    const double d2 = plan.delta2, d3 = plan.delta3;
    const double sigma = w.q_tilde > w.p_tilde ? 1.0 : -1.0;
    add_range(out, u, from, c.a_minus, nseg, res, sag_u);
    add_range(out, u, c.a_minus, w.tau_a, nseg, res, sag_u);
    out.emplace_back(c.a, Point2{1.0, w.p_tilde});
    const double e1 = w.c - 2.0 * d3;
    auto upper = [&](double t) {
      return Point2{u1(map, g, t), w.p_tilde + sigma * d2 * (t - c.a) / (e1 - c.a)};
    };
    add_range(out, upper, c.a, e1, nseg, res, sag_track);
    out.emplace_back(w.c - d3, Point2{w.ell_tilde, w.p_tilde + 2.0 * sigma * d2});
    out.emplace_back(w.c + d3, Point2{w.ell_tilde, w.q_tilde - 2.0 * sigma * d2});
    const double e2 = w.c + 2.0 * d3;
    auto lower = [&](double t) {
      if (t >= c.b) return Point2{1.0, w.q_tilde};
      return Point2{u1(map, g, t), w.q_tilde - sigma * d2 * (c.b - t) / (c.b - e2)};
    };
    out.emplace_back(e2, lower(e2));
    add_range(out, lower, e2, c.b, nseg, res, sag_track);
    out.emplace_back(w.tau_b, u(w.tau_b));
    add_range(out, u, w.tau_b, c.b_plus, nseg, res, sag_u);
    from = c.b_plus;
  }
  add_range(out, u, from, 1.0, nseg, res, sag_u);

  Witness wt;
  std::vector<Point2> pts;
  for (const auto& [t, p] : out) {
    if (!pts.empty() && dist(pts.back(), p) <= 1e-12) {
      if (t == 1.0) {
        pts.back() = p;
        wt.params.back() = t;
      }
      continue;
    }
    pts.push_back(p);
    wt.params.push_back(t);
  }
  wt.phi = Polyline(std::move(pts));
  return wt;
}

WitnessReport verify_witness(const Polyline& gamma, const Witness& phi, const PlanarMap& map, double eps,
                             int n_samples) {
  WitnessReport rep;
  if (auto hit = polyline_self_intersects(phi.phi, true)) {
    rep.injective = false;
    rep.self_intersection = hit->point;
  }
  const int n = std::max(2, n_samples);
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    rep.sup_error = std::max(rep.sup_error, dist(phi.at(t), eval(map, curve_at(gamma, t))));
  }
  const auto& v = phi.phi.vertices();
  rep.endpoints_ok = dist(v.front(), gamma.vertices().front()) <= 1e-9 && dist(v.back(), gamma.vertices().back()) <= 1e-9;
  rep.pass = rep.injective && rep.sup_error < eps && rep.endpoints_ok;
  return rep;
}

WitnessResult run_witness(const Polyline& gamma, const PlanarMap& map, double eps, const Tolerances& tol) {
  WitnessResult res;
  double delta = eps / 16.0;
  for (int it = 0;; ++it) {
    try {
      res.dec = decompose_crossings(gamma, delta, tol);
      break;
    } catch (const Error& e) {
      if (e.code() != "delta-too-large" || it + 1 >= tol.shrink_iterations) throw;
      delta /= 2.0;
      if (delta < tol.min_constant) throw Error("epsilon-too-small-for-resolution", "delta fell below the minimum constant");
    }
  }
  res.plan = plan_witness(res.dec, map, eps, tol);
  res.witness = build_witness(res.dec, res.plan, map, tol);
  res.report = verify_witness(gamma, res.witness, map, eps);
  return res;
}

std::vector<Polyline> curve_corpus(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<Polyline> out;
  auto polar = [](double r, double a) { return Point2{r * std::cos(a), r * std::sin(a)}; };
  for (int c = 0; c < count; ++c) {
    const int k = rng.uniform_int(1, 3);
    const int n = 2 * k + 1;
    const double lo = -0.7 * kPi + 0.2 * kPi * rng.uniform();
    const double hi = 0.7 * kPi - 0.2 * kPi * rng.uniform();
    std::vector<double> cuts(n);
    for (int i = 1; i < n; ++i) cuts[i] = cuts[i - 1] + 0.6 + 0.8 * rng.uniform();
    std::vector<Point2> v;
    for (int i = 0; i < n; ++i) {
      const double a = lo + (hi - lo) * cuts[i] / cuts[n - 1];
      double r = 2.0;
      if (i > 0 && i < n - 1) r = (i % 2 == 1) ? rng.uniform(0.2, 0.9) : rng.uniform(1.3, 1.8);
      v.push_back(polar(r, a));
    }
    out.emplace_back(std::move(v));
  }
  return out;
}

Polyline nested_curve(double mid, double half_width, double dip) {
  auto polar = [](double r, double a) { return Point2{r * std::cos(a), r * std::sin(a)}; };
  return Polyline({polar(2.0, 1.0), {0.0, 0.2}, {0.1, -0.3}, polar(1.5, -0.45), polar(1.3, mid - half_width),
                   polar(dip, mid), polar(1.3, mid + half_width), polar(2.0, mid + half_width + 0.15)});
}

Polyline nested_fixture() { return nested_curve(0.0, 0.15, 0.97); }

Polyline diameter_fixture() { return Polyline({{0.0, 2.0}, {0.0, -2.0}}); }

}  // namespace noncross
