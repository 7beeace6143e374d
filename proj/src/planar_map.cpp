#include "noncross/planar_map.hpp"

#include <algorithm>
#include <limits>

namespace noncross {

bool Domain::contains(Point2 p, double tol) const {
  if (kind == Kind::unit_square) return Rect{}.contains(p, tol);
  return norm(p) <= R * (1.0 + tol);
}

std::string to_string(MapKind k) {
  switch (k) {
    case MapKind::identity: return "identity";
    case MapKind::counterexample: return "counterexample";
    case MapKind::cavitation: return "cavitation";
    case MapKind::shear: return "shear";
    case MapKind::twist: return "twist";
    case MapKind::affine: return "affine";
    case MapKind::composition: return "composition";
  }
  return "unknown";
}

MapKind map_kind_from_string(const std::string& s) {
  for (auto k : {MapKind::identity, MapKind::counterexample, MapKind::cavitation, MapKind::shear,
                 MapKind::twist, MapKind::affine, MapKind::composition}) {
    if (to_string(k) == s) return k;
  }
  throw Error("schema-error", "unknown map kind: " + s);
}

PlanarMap identity_map(Domain d) {
  PlanarMap m;
  m.domain = d;
  return m;
}

PlanarMap counterexample_map() {
  PlanarMap m;
  m.kind = MapKind::counterexample;
  m.domain = Domain::disk(2.0);
  return m;
}

PlanarMap shear_map(double k) {
  PlanarMap m;
  m.kind = MapKind::shear;
  m.k = k;
  return m;
}

PlanarMap affine_map(Mat2 M, Point2 b) {
  PlanarMap m;
  m.kind = MapKind::affine;
  m.M = M;
  m.b = b;
  return m;
}

PlanarMap twist_map(Point2 center, double radius, double angle) {
  if (!(radius > 0.0)) throw Error("schema-error", "twist radius must be positive");
  PlanarMap m;
  m.kind = MapKind::twist;
  m.center = center;
  m.radius = radius;
  m.angle = angle;
  return m;
}

PlanarMap cavitation_map(Point2 center, double radius, double strength) {
  if (!(radius > 0.0)) throw Error("schema-error", "cavitation radius must be positive");
  if (!(strength > 0.0 && strength < 1.0)) throw Error("schema-error", "cavitation strength must lie in (0,1)");
  PlanarMap m;
  m.kind = MapKind::cavitation;
  m.center = center;
  m.radius = radius;
  m.strength = strength;
  return m;
}

PlanarMap composition_map(std::vector<PlanarMap> parts, Domain d) {
  if (parts.empty()) throw Error("schema-error", "composition needs at least one part");
  PlanarMap m;
  m.kind = MapKind::composition;
  m.domain = d;
  m.parts = std::move(parts);
  return m;
}

PlanarMap embedded_counterexample(Point2 c, double R) {
  if (!(R > 0.0)) throw Error("schema-error", "embedding radius must be positive");
  const double s = 2.0 / R;
  PlanarMap to_disk = affine_map({s, 0.0, 0.0, s}, -1.0 * (s * c));
  PlanarMap back = affine_map({1.0 / s, 0.0, 0.0, 1.0 / s}, c);
  return composition_map({to_disk, counterexample_map(), back});
}

namespace {

bool is_affine_kind(const PlanarMap& m) {
  return m.kind == MapKind::identity || m.kind == MapKind::shear || m.kind == MapKind::affine;
}

void affine_parts(const PlanarMap& m, Mat2& M, Point2& b) {
  switch (m.kind) {
    case MapKind::identity: M = {}; b = {}; return;
    case MapKind::shear: M = {1.0, m.k, 0.0, 1.0}; b = {}; return;
    case MapKind::affine: M = m.M; b = m.b; return;
    default: throw Error("internal", "not an affine map");
  }
}

Point2 rotate(Point2 v, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

double twist_profile(const PlanarMap& m, double r) {
  if (r >= m.radius) return 0.0;
  const double q = 1.0 - (r * r) / (m.radius * m.radius);
  return m.angle * q * q;
}

// Nested ellipses filling B_2 minus [0,1]x{0}; s in (0,1].
Point2 outer_ellipse(double s, double phi) {
  return {0.5 * (1.0 - s) + 0.5 * (1.0 + 3.0 * s) * std::cos(phi), 2.0 * s * std::sin(phi)};
}

Point2 eval_counterexample(Point2 p) {
  const double r = norm(p);
  if (r <= 0.5) return {1.0 - 2.0 * r, 0.0};
  const double theta = std::atan2(p.y, p.x);
  if (r <= 1.0) {
    const double eps = 1.0 - r;
    const double alpha = kPi - std::abs(theta);
    if (eps <= 0.0) return {1.0, 0.0};
    const double ratio = alpha / (2.0 * kPi * eps);
    return {(1.0 - 2.0 * eps) * std::min(ratio, 1.0), 0.0};
  }
  if (r >= 2.0) return p;
  const double s = r - 1.0;
  const double x = std::abs(theta) / kPi;
  const double h = s * x / (1.0 - x + s * x);
  const double psi = (theta < 0.0 ? -1.0 : 1.0) * kPi * h;
  return outer_ellipse(s, psi);
}

Point2 eval_raw(const PlanarMap& m, Point2 p) {
  switch (m.kind) {
    case MapKind::identity: return p;
    case MapKind::shear: return {p.x + m.k * p.y, p.y};
    case MapKind::affine: return m.M * p + m.b;
    case MapKind::counterexample: return eval_counterexample(p);
    case MapKind::twist: {
      const Point2 v = p - m.center;
      return m.center + rotate(v, twist_profile(m, norm(v)));
    }
    case MapKind::cavitation: {
      const Point2 v = p - m.center;
      const double r = norm(v);
      if (r >= m.radius) return p;
      const double a = m.strength * m.radius;
      const double f = a + (1.0 - a / m.radius) * r;
      return m.center + (f / r) * v;
    }
    case MapKind::composition: {
      Point2 q = p;
      for (const auto& part : m.parts) q = eval_raw(part, q);
      return q;
    }
  }
  return p;
}

Mat2 jacobian_analytic(const PlanarMap& m, Point2 p) {
  switch (m.kind) {
    case MapKind::identity: return {};
    case MapKind::shear: return {1.0, m.k, 0.0, 1.0};
    case MapKind::affine: return m.M;
    case MapKind::twist: {
      const Point2 v = p - m.center;
      const double r = norm(v);
      if (r >= m.radius) return {};
      const double q = 1.0 - r * r / (m.radius * m.radius);
      const double a = m.angle * q * q;
      const double c = std::cos(a), s = std::sin(a);
      const Mat2 R{c, -s, s, c};
      const Point2 w = rotate(v, a);
      const Point2 dw{-w.y, w.x};
      // grad a = -4 angle q / radius^2 * v
      const double g = -4.0 * m.angle * q / (m.radius * m.radius);
      const Point2 ga = g * v;
      return {R.a11 + dw.x * ga.x, R.a12 + dw.x * ga.y, R.a21 + dw.y * ga.x, R.a22 + dw.y * ga.y};
    }
    case MapKind::cavitation: {
      const Point2 v = p - m.center;
      const double r = norm(v);
      if (r >= m.radius) return {};
      const double a = m.strength * m.radius;
      const double fp = 1.0 - a / m.radius;
      const double f = a + fp * r;
      const Point2 n = (1.0 / r) * v;
      const double t = f / r;
      return {t + (fp - t) * n.x * n.x, (fp - t) * n.x * n.y, (fp - t) * n.x * n.y, t + (fp - t) * n.y * n.y};
    }
    case MapKind::composition: {
      Mat2 J;
      Point2 q = p;
      for (const auto& part : m.parts) {
        J = jacobian_analytic(part, q) * J;
        q = eval_raw(part, q);
      }
      return J;
    }
    case MapKind::counterexample: break;
  }
  throw Error("internal", "no analytic jacobian for " + to_string(m.kind));
}

bool disk_inside_square(Point2 c, double r) {
  return c.x - r >= 0.0 && c.x + r <= 1.0 && c.y - r >= 0.0 && c.y + r <= 1.0;
}

}  // namespace

std::vector<Point2> PlanarMap::discontinuities() const {
  switch (kind) {
    case MapKind::counterexample: return {{-1.0, 0.0}};
    case MapKind::cavitation: return {center};
    case MapKind::composition: {
      std::vector<Point2> out;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        bool invertible = true;
        for (std::size_t j = 0; j < i; ++j) {
          if (!is_affine_kind(parts[j])) invertible = false;
        }
        if (!invertible) continue;
        for (Point2 d : parts[i].discontinuities()) {
          for (std::size_t j = i; j-- > 0;) {
            Mat2 M;
            Point2 b;
            affine_parts(parts[j], M, b);
            d = M.inverse() * (d - b);
          }
          out.push_back(d);
        }
      }
      return out;
    }
    default: return {};
  }
}

bool PlanarMap::has_analytic_jacobian() const {
  if (kind == MapKind::counterexample) return false;
  if (kind == MapKind::composition) {
    return std::all_of(parts.begin(), parts.end(), [](const PlanarMap& p) { return p.has_analytic_jacobian(); });
  }
  return true;
}

bool PlanarMap::declares_identity_on_boundary() const {
  switch (kind) {
    case MapKind::identity:
    case MapKind::counterexample: return true;
    case MapKind::shear: return k == 0.0;
    case MapKind::affine: return M == Mat2{} && b == Point2{};
    case MapKind::twist:
    case MapKind::cavitation:
      return domain.kind == Domain::Kind::unit_square && disk_inside_square(center, radius);
    case MapKind::composition: {
      if (std::all_of(parts.begin(), parts.end(),
                      [](const PlanarMap& p) { return p.declares_identity_on_boundary(); })) {
        return true;
      }
      // Conjugation A^-1 o X o A of a disk map that is the identity off its disk.
      if (parts.size() != 3 || !is_affine_kind(parts[0]) || !is_affine_kind(parts[2])) return false;
      const PlanarMap& inner = parts[1];
      if (inner.kind != MapKind::counterexample || domain.kind != Domain::Kind::unit_square) return false;
      Mat2 M0, M2;
      Point2 b0, b2;
      affine_parts(parts[0], M0, b0);
      affine_parts(parts[2], M2, b2);
      const Mat2 P = M2 * M0;
      const Point2 q = M2 * b0 + b2;
      if (std::abs(P.a11 - 1) > 1e-12 || std::abs(P.a12) > 1e-12 || std::abs(P.a21) > 1e-12 ||
          std::abs(P.a22 - 1) > 1e-12 || norm(q) > 1e-12) {
        return false;
      }
      if (std::abs(M2.a12) > 1e-15 || std::abs(M2.a21) > 1e-15 || M2.a11 != M2.a22 || !(M2.a11 > 0)) return false;
      return disk_inside_square(b2, inner.domain.R * M2.a11);
    }
  }
  return false;
}

double distance_to_discontinuity(const PlanarMap& map, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (Point2 d : map.discontinuities()) best = std::min(best, dist(p, d));
  return best;
}

Point2 eval_extended(const PlanarMap& map, Point2 p, const Tolerances& tol) {
  if (!is_finite(p)) throw Error("out-of-domain", "non-finite point");
  if (distance_to_discontinuity(map, p) <= tol.tau_disc) {
    throw Error("undefined-at-point", "point lies on a discontinuity");
  }
  return eval_raw(map, p);
}

Point2 eval(const PlanarMap& map, Point2 p, const Tolerances& tol) {
  if (!is_finite(p) || !map.domain.contains(p)) throw Error("out-of-domain", "point outside the map domain");
  return eval_extended(map, p, tol);
}

Mat2 jacobian_fd(const PlanarMap& map, Point2 p, double h, const Tolerances& tol) {
  if (distance_to_discontinuity(map, p) < 2.0 * h) {
    throw Error("jacobian-unreliable", "point within 2h of a discontinuity");
  }
  const Point2 ex = (1.0 / (2.0 * h)) * (eval_raw(map, {p.x + h, p.y}) - eval_raw(map, {p.x - h, p.y}));
  const Point2 ey = (1.0 / (2.0 * h)) * (eval_raw(map, {p.x, p.y + h}) - eval_raw(map, {p.x, p.y - h}));
  (void)tol;
  return {ex.x, ey.x, ex.y, ey.y};
}

Mat2 jacobian(const PlanarMap& map, Point2 p, double h, const Tolerances& tol) {
  if (distance_to_discontinuity(map, p) < 2.0 * h) {
    throw Error("jacobian-unreliable", "point within 2h of a discontinuity");
  }
  if (map.has_analytic_jacobian()) return jacobian_analytic(map, p);
  return jacobian_fd(map, p, h, tol);
}

double local_affine_deviation(const PlanarMap& map, Point2 x, double r, int n, const Tolerances& tol) {
  if (n < 1) throw Error("schema-error", "sample count must be positive");
  const Mat2 J = jacobian(map, x, tol.fd_step, tol);
  const Point2 ux = eval_extended(map, x, tol);
  double worst = 0.0;
  // Sunflower pattern reaching the rim at the last sample.
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double rho = r * std::sqrt((i + 1.0) / n);
    const double a = golden * i;
    const Point2 z = x + rho * Point2{std::cos(a), std::sin(a)};
    worst = std::max(worst, dist(eval_extended(map, z, tol), ux + J * (z - x)));
  }
  return worst;
}

namespace {

std::vector<Point2> boundary_samples(const Domain& d, int n) {
  std::vector<Point2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    if (d.kind == Domain::Kind::disk) {
      out.push_back({d.R * std::cos(2 * kPi * t), d.R * std::sin(2 * kPi * t)});
    } else {
      const double s = 4.0 * t;
      const int side = static_cast<int>(s);
      const double f = s - side;
      switch (side) {
        case 0: out.push_back({f, 0.0}); break;
        case 1: out.push_back({1.0, f}); break;
        case 2: out.push_back({1.0 - f, 1.0}); break;
        default: out.push_back({0.0, 1.0 - f}); break;
      }
    }
  }
  return out;
}

}  // namespace

double boundary_identity_deviation(const PlanarMap& map, int n) {
  double worst = 0.0;
  for (Point2 p : boundary_samples(map.domain, n)) worst = std::max(worst, dist(eval(map, p), p));
  return worst;
}

AffineTrace boundary_affine_trace(const PlanarMap& map, double fit_tol) {
  AffineTrace tr;
  if (map.domain.kind != Domain::Kind::unit_square) return tr;
  const Point2 o = eval(map, {0.0, 0.0});
  const Point2 ex = eval(map, {1.0, 0.0}) - o;
  const Point2 ey = eval(map, {0.0, 1.0}) - o;
  tr.M = {ex.x, ey.x, ex.y, ey.y};
  tr.b = o;
  for (Point2 p : boundary_samples(map.domain, 256)) {
    tr.residual = std::max(tr.residual, dist(eval(map, p), tr.M * p + tr.b));
  }
  tr.ok = tr.residual < fit_tol && tr.M.det() > 0.0;
  return tr;
}

}  // namespace noncross
