#include "noncross/serialize.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace noncross {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error("schema-error", what); }

void expect_object(const Json& j, const std::string& what, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(what + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) bad("unknown field \"" + it.key() + "\" in " + what);
  }
}

const Json& field(const Json& j, const char* key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) bad(what + " is missing \"" + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) bad(what + " must be an integer");
  return j.get<int>();
}

std::vector<double> numbers(const Json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be an array");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(number(e, what));
  return out;
}

Json points_to_json(const std::vector<Point2>& pts) {
  Json a = Json::array();
  for (Point2 p : pts) a.push_back(point_to_json(p));
  return a;
}

std::vector<Point2> points_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be an array");
  std::vector<Point2> out;
  for (const auto& e : j) out.push_back(point_from_json(e));
  return out;
}

Json mat_to_json(const Mat2& m) { return Json::array({Json::array({m.a11, m.a12}), Json::array({m.a21, m.a22})}); }

Mat2 mat_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 || j[1].size() != 2) {
    bad("matrix must be [[a11, a12], [a21, a22]]");
  }
  return {number(j[0][0], "matrix entry"), number(j[0][1], "matrix entry"), number(j[1][0], "matrix entry"),
          number(j[1][1], "matrix entry")};
}

Json domain_to_json(const Domain& d) {
  if (d.kind == Domain::Kind::unit_square) return Json{{"kind", "unit_square"}};
  return Json{{"kind", "disk"}, {"R", d.R}};
}

Domain domain_from_json(const Json& j) {
  if (j.is_string()) {
    if (j == "unit_square") return Domain::square();
    bad("unknown domain \"" + j.get<std::string>() + "\"");
  }
  expect_object(j, "domain", {"kind", "R"});
  const Json& k = field(j, "kind", "domain");
  if (k == "unit_square") return Domain::square();
  if (k == "disk") {
    const double R = number(field(j, "R", "domain"), "domain.R");
    if (!(R > 0.0)) bad("domain.R must be positive");
    return Domain::disk(R);
  }
  bad("unknown domain kind");
}

}  // namespace

Json point_to_json(Point2 p) { return Json::array({p.x, p.y}); }

Point2 point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) bad("a point must be [x, y]");
  return {number(j[0], "coordinate"), number(j[1], "coordinate")};
}

Json map_to_json(const PlanarMap& m) {
  Json params = Json::object();
  switch (m.kind) {
    case MapKind::identity:
    case MapKind::counterexample: break;
    case MapKind::shear: params["k"] = m.k; break;
    case MapKind::affine:
      params["M"] = mat_to_json(m.M);
      params["b"] = point_to_json(m.b);
      break;
    case MapKind::twist:
      params["center"] = point_to_json(m.center);
      params["radius"] = m.radius;
      params["angle"] = m.angle;
      break;
    case MapKind::cavitation:
      params["center"] = point_to_json(m.center);
      params["radius"] = m.radius;
      params["strength"] = m.strength;
      break;
    case MapKind::composition: {
      Json parts = Json::array();
      for (const auto& p : m.parts) parts.push_back(map_to_json(p));
      params["parts"] = parts;
      break;
    }
  }
  return Json{{"kind", to_string(m.kind)}, {"params", params}, {"domain", domain_to_json(m.domain)}};
}

PlanarMap map_from_json(const Json& j) {
  expect_object(j, "map", {"kind", "params", "domain"});
  const Json& kj = field(j, "kind", "map");
  if (!kj.is_string()) bad("map.kind must be a string");
  MapKind kind;
  try {
    kind = map_kind_from_string(kj.get<std::string>());
  } catch (const Error&) {
    bad("unknown map kind \"" + kj.get<std::string>() + "\"");
  }
  const Json empty = Json::object();
  const Json& p = j.contains("params") ? j["params"] : empty;
  const bool has_domain = j.contains("domain");
  PlanarMap m;
  switch (kind) {
    case MapKind::identity:
      expect_object(p, "identity params", {});
      m = identity_map(has_domain ? domain_from_json(j["domain"]) : Domain::square());
      return m;
    case MapKind::counterexample:
      expect_object(p, "counterexample params", {"center", "R"});
      if (p.contains("center") || p.contains("R")) {
        m = embedded_counterexample(point_from_json(field(p, "center", "counterexample params")),
                                    number(field(p, "R", "counterexample params"), "R"));
        if (has_domain && domain_from_json(j["domain"]).kind != Domain::Kind::unit_square) {
          bad("an embedded counterexample lives in the unit square");
        }
        return m;
      }
      m = counterexample_map();
      if (has_domain) {
        const Domain d = domain_from_json(j["domain"]);
        if (d.kind != Domain::Kind::disk || d.R != 2.0) bad("the counterexample lives on the disk of radius 2");
      }
      return m;
    case MapKind::shear:
      expect_object(p, "shear params", {"k"});
      m = shear_map(number(field(p, "k", "shear params"), "k"));
      break;
    case MapKind::affine: {
      expect_object(p, "affine params", {"M", "b"});
      m = affine_map(mat_from_json(field(p, "M", "affine params")),
                     p.contains("b") ? point_from_json(p["b"]) : Point2{});
      break;
    }
    case MapKind::twist:
      expect_object(p, "twist params", {"center", "radius", "angle"});
      m = twist_map(point_from_json(field(p, "center", "twist params")), number(field(p, "radius", "twist params"), "radius"),
                    number(field(p, "angle", "twist params"), "angle"));
      break;
    case MapKind::cavitation:
      expect_object(p, "cavitation params", {"center", "radius", "strength"});
      m = cavitation_map(point_from_json(field(p, "center", "cavitation params")),
                         number(field(p, "radius", "cavitation params"), "radius"),
                         number(field(p, "strength", "cavitation params"), "strength"));
      break;
    case MapKind::composition: {
      expect_object(p, "composition params", {"parts"});
      const Json& parts = field(p, "parts", "composition params");
      if (!parts.is_array() || parts.empty()) bad("composition parts must be a non-empty array");
      std::vector<PlanarMap> ps;
      for (const auto& e : parts) ps.push_back(map_from_json(e));
      m = composition_map(std::move(ps));
      break;
    }
  }
  if (has_domain) m.domain = domain_from_json(j["domain"]);
  return m;
}

Json polyline_to_json(const Polyline& p) {
  return Json{{"closed", p.closed()}, {"vertices", points_to_json(p.vertices())}};
}

Polyline polyline_from_json(const Json& j) {
  expect_object(j, "polyline", {"closed", "vertices"});
  bool closed = false;
  if (j.contains("closed")) {
    if (!j["closed"].is_boolean()) bad("polyline.closed must be a boolean");
    closed = j["closed"].get<bool>();
  }
  auto v = points_from_json(field(j, "vertices", "polyline"), "polyline.vertices");
  try {
    return Polyline(std::move(v), closed);
  } catch (const Error& e) {
    bad(std::string("polyline: ") + e.what());
  }
}

Json grid_to_json(const Grid& g) { return Json{{"K", g.K}, {"s", g.s}, {"t", g.t}}; }

Grid grid_from_json(const Json& j) {
  expect_object(j, "grid", {"K", "s", "t"});
  Grid g;
  g.K = integer(field(j, "K", "grid"), "grid.K");
  g.s = numbers(field(j, "s", "grid"), "grid.s");
  g.t = numbers(field(j, "t", "grid"), "grid.t");
  validate_grid(g, false);
  return g;
}

Json arrival_to_json(const ArrivalGrid& ag) { return Json{{"eta", ag.eta}, {"x", ag.x}, {"y", ag.y}}; }

ArrivalGrid arrival_from_json(const Json& j) {
  expect_object(j, "arrival grid", {"eta", "x", "y"});
  ArrivalGrid ag;
  ag.eta = number(field(j, "eta", "arrival grid"), "eta");
  ag.x = numbers(field(j, "x", "arrival grid"), "x");
  ag.y = numbers(field(j, "y", "arrival grid"), "y");
  validate_arrival_grid(ag);
  return ag;
}

Json marked_to_json(const std::vector<MarkedPoint>& pts) {
  Json a = Json::array();
  for (const auto& m : pts) {
    Json e{{"kind", to_string(m.kind)}, {"location", point_to_json(m.location)}, {"image", point_to_json(m.image)}};
    if (m.kind == MarkedPoint::Kind::interior_crossing) {
      e["segment"] = m.segment;
      e["lambda"] = m.lambda;
      e["axis"] = m.axis == Axis::x ? "x" : "y";
      e["line"] = m.line;
      e["lebesgue_surrogate"] = m.lebesgue_surrogate;
    }
    a.push_back(e);
  }
  return a;
}

Json gridmap_to_json(const GridMap& v) {
  Json vertices = Json::object();
  for (std::size_t i = 0; i < v.nodes.size(); ++i) {
    const auto& n = v.nodes[i];
    vertices[std::to_string(i)] = Json{{"kind", n.kind == GridNode::Kind::marked ? "marked" : "vertex"},
                                       {"source", point_to_json(n.source)},
                                       {"image", point_to_json(v.to_target(n.image))}};
  }
  Json segments = Json::array();
  for (const auto& p : v.pieces) {
    Json path = Json::array();
    for (Point2 q : p.path) path.push_back(point_to_json(v.to_target(q)));
    const auto& s = v.simples[p.simple];
    Json e{{"from", p.from}, {"to", p.to}, {"simple", p.simple}, {"boundary", s.boundary}};
    if (!s.boundary) e["rect"] = Json::array({s.rect_n, s.rect_m});
    e["path"] = path;
    segments.push_back(e);
  }
  return Json{{"vertices", vertices}, {"segments", segments}};
}

Json injectivity_to_json(const InjectivityReport& r) {
  Json viol = Json::array();
  for (const auto& v : r.violations) {
    viol.push_back(Json{{"kind", v.kind}, {"a", v.a}, {"b", v.b}, {"point", point_to_json(v.point)}});
  }
  std::size_t consistent = 0;
  for (const auto& c : r.vertex_checks) consistent += c.consistent ? 1 : 0;
  return Json{{"injective", r.injective},
              {"sup_error", r.sup_error},
              {"bound", r.bound},
              {"within_bound", r.sup_error <= r.bound},
              {"vertex_checks", r.vertex_checks.size()},
              {"vertex_checks_consistent", consistent},
              {"violations", viol}};
}

Json pipeline_to_json(const PipelineResult& r) {
  return Json{{"artifact", "gridmap"},
              {"regime", r.regime},
              {"eta_normalized", r.eta_normalized},
              {"transform", Json{{"M", mat_to_json(r.gridmap.M)}, {"b", point_to_json(r.gridmap.b)}}},
              {"grid", grid_to_json(r.grid)},
              {"arrival_grid", arrival_to_json(r.ag)},
              {"marked_points", r.marked.size()},
              {"gridmap", gridmap_to_json(r.gridmap)},
              {"report", injectivity_to_json(r.report)}};
}

Json distinct_violation_to_json(const DistinctImageViolation& e) {
  Json pairs = Json::array();
  for (const auto& p : e.pairs()) {
    const auto& a = e.points()[p.i];
    const auto& b = e.points()[p.j];
    pairs.push_back(Json{{"first", point_to_json(a.location)},
                         {"second", point_to_json(b.location)},
                         {"first_image", point_to_json(a.image)},
                         {"second_image", point_to_json(b.image)},
                         {"image_gap", p.image_gap}});
  }
  return Json{{"error", e.code()}, {"detail", e.what()}, {"pairs", pairs}};
}

Json obstruction_to_json(const NcObstruction& e) {
  const auto& c = e.check();
  return Json{{"error", e.code()},
              {"detail", e.what()},
              {"node", c.node},
              {"p1", point_to_json(c.p1)},
              {"p2", point_to_json(c.p2)},
              {"p3", point_to_json(c.p3)},
              {"p4", point_to_json(c.p4)},
              {"note", c.note}};
}

Json inv_report_to_json(const INVReport& r) {
  Json probes = Json::array();
  for (const auto& p : r.probes) {
    Json e{{"z", point_to_json(p.z)}, {"inside", p.inside}, {"verdict", to_string(p.verdict)}, {"degree", p.degree}};
    if (!p.note.empty()) e["note"] = p.note;
    probes.push_back(e);
  }
  return Json{{"center", point_to_json(r.center)},
              {"r", r.r},
              {"total_variation", r.total_variation},
              {"pass", r.pass},
              {"probes", probes}};
}

Json scan_to_json(const ScanReport& s) {
  Json circles = Json::array();
  for (std::size_t i = 0; i < s.circles.size(); ++i) {
    if (s.reports[i]) {
      circles.push_back(inv_report_to_json(*s.reports[i]));
    } else {
      std::string reason;
      for (const auto& sk : s.skipped) {
        if (sk.index == i) reason = sk.reason;
      }
      circles.push_back(Json{{"center", point_to_json(s.circles[i].center)}, {"r", s.circles[i].r}, {"skipped", reason}});
    }
  }
  Json out{{"artifact", "inv"}, {"passes", s.passes}, {"failures", s.failures}, {"skipped", s.skipped.size()}};
  out["first_violation"] = s.first_violation ? Json(*s.first_violation) : Json(nullptr);
  out["circles"] = circles;
  return out;
}

Json plan_to_json(const CrossingDecomposition& dec, const WitnessPlan& plan) {
  Json cr = Json::array();
  for (std::size_t i = 0; i < dec.crossings.size(); ++i) {
    const auto& c = dec.crossings[i];
    const auto& w = plan.crossings[i];
    cr.push_back(Json{{"a", c.a},
                      {"b", c.b},
                      {"a_minus", c.a_minus},
                      {"b_plus", c.b_plus},
                      {"P", point_to_json(c.P)},
                      {"Q", point_to_json(c.Q)},
                      {"ell", w.ell},
                      {"ell_tilde", w.ell_tilde},
                      {"c", w.c},
                      {"p_tilde", w.p_tilde},
                      {"q_tilde", w.q_tilde},
                      {"tau_a", w.tau_a},
                      {"tau_b", w.tau_b},
                      {"depth", w.depth}});
  }
  return Json{{"eps", plan.eps},       {"delta", plan.delta},   {"delta1", plan.delta1}, {"delta2", plan.delta2},
              {"delta3", plan.delta3}, {"tail", plan.tail},     {"crossings", cr}};
}

Json witness_to_json(const WitnessResult& w) {
  Json report{{"injective", w.report.injective},
              {"sup_error", w.report.sup_error},
              {"endpoints_ok", w.report.endpoints_ok},
              {"pass", w.report.pass}};
  if (w.report.self_intersection) report["self_intersection"] = point_to_json(*w.report.self_intersection);
  return Json{{"artifact", "witness"},
              {"gamma", polyline_to_json(w.dec.gamma)},
              {"phi", Json{{"closed", false}, {"vertices", points_to_json(w.witness.phi.vertices())}, {"t", w.witness.params}}},
              {"params", plan_to_json(w.dec, w.plan)},
              {"report", report}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io-error", "cannot write " + path);
  out << text;
}

}  // namespace noncross
