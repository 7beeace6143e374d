#include "noncross/types.hpp"

#include <algorithm>
#include <limits>

namespace noncross {

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return dist(p, a);
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return dist(p, a + t * d);
}

Mat2 Mat2::inverse() const {
  const double d = det();
  if (d == 0.0) throw Error("singular-matrix", "matrix is not invertible");
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

double Mat2::spectral_norm() const {
  // sqrt of the largest eigenvalue of M^T M.
  const double p = a11 * a11 + a21 * a21;
  const double q = a12 * a12 + a22 * a22;
  const double r = a11 * a12 + a21 * a22;
  const double mean = 0.5 * (p + q);
  const double disc = std::sqrt(0.25 * (p - q) * (p - q) + r * r);
  return std::sqrt(mean + disc);
}

double Rect::boundary_distance(Point2 p) const {
  if (strictly_contains(p)) {
    return std::min({p.x - x_lo, x_hi - p.x, p.y - y_lo, y_hi - p.y});
  }
  const double dx = std::max({x_lo - p.x, 0.0, p.x - x_hi});
  const double dy = std::max({y_lo - p.y, 0.0, p.y - y_hi});
  if (dx > 0.0 || dy > 0.0) return std::hypot(dx, dy);
  return 0.0;
}

namespace {

template <typename T>
void set_number(T& field, const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw Error("schema-error", "tolerance " + key + " is not a number: " + value);
  }
  if (used != value.size() || !std::isfinite(v)) {
    throw Error("schema-error", "tolerance " + key + " is not a number: " + value);
  }
  field = static_cast<T>(v);
}

}  // namespace

void Tolerances::set(const std::string& key, const std::string& value) {
  if (key == "planar_maps.tau_disc") return set_number(tau_disc, key, value);
  if (key == "planar_maps.fd_step") return set_number(fd_step, key, value);
  if (key == "geometry.tau_on") return set_number(tau_on, key, value);
  if (key == "geometry.winding_residual") return set_number(winding_residual, key, value);
  if (key == "inv_check.n_curve") return set_number(n_curve, key, value);
  if (key == "inv_check.tv_stability") return set_number(tv_stability, key, value);
  if (key == "grids.tau_det") return set_number(tau_det, key, value);
  if (key == "grids.tau_transversal") return set_number(tau_transversal, key, value);
  if (key == "grids.n_samples") return set_number(n_samples, key, value);
  if (key == "grids.max_retries") return set_number(max_retries, key, value);
  if (key == "grids.root_tol") return set_number(root_tol, key, value);
  if (key == "arrival_grid.tau_bad") return set_number(tau_bad, key, value);
  if (key == "arrival_grid.tau_unreliable") return set_number(tau_unreliable, key, value);
  if (key == "arrival_grid.tau_dup") return set_number(tau_dup, key, value);
  if (key == "injectify.resolution") return set_number(resolution, key, value);
  if (key == "injectify.full_sweep") {
    double v = 0.0;
    set_number(v, key, value);
    full_sweep = v != 0.0;
    return;
  }
  if (key == "ncl_witness.resolution") return set_number(witness_resolution, key, value);
  if (key == "ncl_witness.shrink_iterations") return set_number(shrink_iterations, key, value);
  if (key == "ncl_witness.min_constant") return set_number(min_constant, key, value);
  throw Error("schema-error", "unknown tolerance key: " + key);
}

std::map<std::string, double> Tolerances::as_map() const {
  return {
      {"planar_maps.tau_disc", tau_disc},
      {"planar_maps.fd_step", fd_step},
      {"geometry.tau_on", tau_on},
      {"geometry.winding_residual", winding_residual},
      {"inv_check.n_curve", static_cast<double>(n_curve)},
      {"inv_check.tv_stability", tv_stability},
      {"grids.tau_det", tau_det},
      {"grids.tau_transversal", tau_transversal},
      {"grids.n_samples", static_cast<double>(n_samples)},
      {"grids.max_retries", static_cast<double>(max_retries)},
      {"grids.root_tol", root_tol},
      {"arrival_grid.tau_bad", tau_bad},
      {"arrival_grid.tau_unreliable", tau_unreliable},
      {"arrival_grid.tau_dup", tau_dup},
      {"injectify.resolution", static_cast<double>(resolution)},
      {"injectify.full_sweep", full_sweep ? 1.0 : 0.0},
      {"ncl_witness.resolution", static_cast<double>(witness_resolution)},
      {"ncl_witness.shrink_iterations", static_cast<double>(shrink_iterations)},
      {"ncl_witness.min_constant", min_constant},
  };
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& w : state_) {
    s = splitmix64(s);
    w = s;
  }
}

std::uint64_t Rng::next() {
  const auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(next() % span);
}

}  // namespace noncross
