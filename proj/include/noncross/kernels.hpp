#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include "noncross/geometry.hpp"
#include "noncross/planar_map.hpp"

namespace noncross {

// Runs f(i) for i in [0, n). The lowest-index exception is rethrown after the loop, so failures
// are reported identically with or without threads.
template <typename F>
void serial_for(std::size_t n, F&& f) {
  for (std::size_t i = 0; i < n; ++i) f(i);
}

template <typename F>
void parallel_for(std::size_t n, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace serial {

std::vector<Point2> eval_batch(const PlanarMap& map, const std::vector<Point2>& pts, const Tolerances& tol = {});
double max_distance(const std::vector<Point2>& a, const std::vector<Point2>& b);
// Brute-force count of properly crossing or touching pairs of non-adjacent polyline segments.
std::size_t count_contacts(const Polyline& c);
std::vector<int> winding_numbers(const Polyline& curve, const std::vector<Point2>& probes, double tau_on);

}  // namespace serial

namespace parallel {

std::vector<Point2> eval_batch(const PlanarMap& map, const std::vector<Point2>& pts, const Tolerances& tol = {});
double max_distance(const std::vector<Point2>& a, const std::vector<Point2>& b);
std::size_t count_contacts(const Polyline& c);
std::vector<int> winding_numbers(const Polyline& curve, const std::vector<Point2>& probes, double tau_on);

}  // namespace parallel

}  // namespace noncross
