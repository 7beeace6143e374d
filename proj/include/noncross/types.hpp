#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace noncross {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 lerp(Point2 a, Point2 b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Distance from p to the closed segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

struct Mat2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  double det() const { return a11 * a22 - a12 * a21; }
  Point2 operator*(Point2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  Mat2 inverse() const;
  // Largest singular value.
  double spectral_norm() const;
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

struct Rect {
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;

  double width() const { return x_hi - x_lo; }
  double height() const { return y_hi - y_lo; }
  Point2 center() const { return {0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi)}; }
  bool contains(Point2 p, double tol = 0.0) const {
    return p.x >= x_lo - tol && p.x <= x_hi + tol && p.y >= y_lo - tol && p.y <= y_hi + tol;
  }
  bool strictly_contains(Point2 p, double margin = 0.0) const {
    return p.x > x_lo + margin && p.x < x_hi - margin && p.y > y_lo + margin && p.y < y_hi - margin;
  }
  // Distance from p to the rectangle boundary (p assumed inside or near).
  double boundary_distance(Point2 p) const;
};

// All failures carry a stable kebab-case code (e.g. "undefined-at-point"); the CLI maps
// codes to exit statuses and reports them verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Tunable thresholds. Keys are namespaced "module.name" so they can be overridden from
// the command line (--tol geometry.tau_on=1e-10).
struct Tolerances {
  // planar_maps
  double tau_disc = 1e-9;
  double fd_step = 1e-5;
  // geometry
  double tau_on = 1e-9;
  double winding_residual = 1e-6;
  // inv_check
  int n_curve = 512;
  double tv_stability = 0.05;
  // grids
  double tau_det = 1e-6;
  double tau_transversal = 1e-6;
  int n_samples = 1024;  // per unit length
  int max_retries = 64;
  double root_tol = 1e-14;
  // arrival_grid
  double tau_bad = 1e-4;
  double tau_unreliable = 1e-3;
  double tau_dup = 1e-9;
  // injectify
  int resolution = 256;
  bool full_sweep = false;
  // ncl_witness
  int witness_resolution = 256;
  int shrink_iterations = 20;
  double min_constant = 1e-12;

  void set(const std::string& key, const std::string& value);
  std::map<std::string, double> as_map() const;
};

// Deterministic pseudo-random source (xoshiro256** seeded through splitmix64). Doubles
// are derived from raw bits, so streams are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);     // inclusive

 private:
  std::uint64_t state_[4];
};

std::uint64_t splitmix64(std::uint64_t x);

constexpr double kPi = 3.14159265358979323846;

}  // namespace noncross
