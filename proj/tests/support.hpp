#pragma once

#include <string>

#include "noncross/serialize.hpp"

namespace noncross::testing {

inline std::string fixture(const std::string& rel) { return std::string(NONCROSS_FIXTURES) + "/" + rel; }

inline PlanarMap load_map(const std::string& name) { return map_from_json(read_json_file(fixture("maps/" + name + ".json"))); }

inline Polyline load_curve(const std::string& name) {
  return polyline_from_json(read_json_file(fixture("curves/" + name + ".json")));
}

// Code carried by the Error thrown from f, or "" when nothing is thrown.
template <typename F>
std::string error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace noncross::testing
