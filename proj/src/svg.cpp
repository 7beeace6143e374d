#include "noncross/svg.hpp"

#include <cstdio>
#include <sstream>
#include <vector>

namespace noncross {

namespace {

constexpr const char* kSource = "#1f77b4";
constexpr const char* kImage = "#d62728";
constexpr const char* kWitness = "#2ca02c";
constexpr const char* kArrival = "#7f7f7f";
constexpr const char* kMarker = "#000000";
constexpr double kPanel = 512.0;
constexpr double kPad = 16.0;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

struct Panel {
  double x0, y0, x1, y1;  // world box
  double ox;              // horizontal offset of the panel
  std::ostringstream body;

  Point2 map(Point2 p) const {
    const double s = (kPanel - 2.0 * kPad) / std::max(x1 - x0, y1 - y0);
    return {ox + kPad + (p.x - x0) * s, kPanel - kPad - (p.y - y0) * s};
  }
  void line(Point2 a, Point2 b, const char* color, double width) {
    const Point2 p = map(a), q = map(b);
    body << "<line x1=\"" << num(p.x) << "\" y1=\"" << num(p.y) << "\" x2=\"" << num(q.x) << "\" y2=\"" << num(q.y)
         << "\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << "\"/>\n";
  }
  void path(const std::vector<Point2>& pts, bool closed, const char* color, double width) {
    if (pts.empty()) return;
    body << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point2 p = map(pts[i]);
      body << (i ? " " : "") << num(p.x) << "," << num(p.y);
    }
    if (closed) {
      const Point2 p = map(pts.front());
      body << " " << num(p.x) << "," << num(p.y);
    }
    body << "\"/>\n";
  }
  void dot(Point2 c, const char* color, double r) {
    const Point2 p = map(c);
    body << "<circle cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"" << num(r) << "\" fill=\"" << color
         << "\"/>\n";
  }
  void circle(Point2 c, double r, const char* color, double width) {
    const Point2 p = map(c);
    const double s = (kPanel - 2.0 * kPad) / std::max(x1 - x0, y1 - y0);
    body << "<circle cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"" << num(r * s)
         << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << "\"/>\n";
  }
};

std::string document(const std::vector<Panel*>& panels) {
  std::ostringstream out;
  const double w = kPanel * static_cast<double>(panels.size());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(kPanel)
      << "\" viewBox=\"0 0 " << num(w) << " " << num(kPanel) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << num(w) << "\" height=\"" << num(kPanel) << "\" fill=\"#ffffff\"/>\n";
  for (auto* p : panels) out << "<g>\n" << p->body.str() << "</g>\n";
  out << "</svg>\n";
  return out.str();
}

std::vector<Point2> pts_of(const Json& a) {
  std::vector<Point2> out;
  for (const auto& e : a) out.push_back(point_from_json(e));
  return out;
}

void draw_grid(Panel& p, const Grid& g, const char* color) {
  for (double s : g.s) p.line({s, 0.0}, {s, 1.0}, color, 1.0);
  for (double t : g.t) p.line({0.0, t}, {1.0, t}, color, 1.0);
}

void draw_arrival(Panel& p, const ArrivalGrid& ag) {
  for (double x : ag.x) p.line({x, 0.0}, {x, 1.0}, kArrival, 0.5);
  for (double y : ag.y) p.line({0.0, y}, {1.0, y}, kArrival, 0.5);
}

std::string render_gridmap(const Json& j) {
  const Json& gm = j.contains("gridmap") ? j["gridmap"] : j;
  Panel src{0.0, 0.0, 1.0, 1.0, 0.0, {}};
  Panel img{0.0, 0.0, 1.0, 1.0, kPanel, {}};
  if (j.contains("grid")) draw_grid(src, grid_from_json(j["grid"]), kSource);
  if (j.contains("arrival_grid")) draw_arrival(img, arrival_from_json(j["arrival_grid"]));
  const Json& verts = gm.at("vertices");
  for (const auto& seg : gm.at("segments")) img.path(pts_of(seg.at("path")), false, kImage, 1.0);
  for (auto it = verts.begin(); it != verts.end(); ++it) {
    src.dot(point_from_json(it.value().at("source")), kMarker, 1.5);
    img.dot(point_from_json(it.value().at("image")), kMarker, 1.5);
  }
  return document({&src, &img});
}

std::string render_witness(const Json& j) {
  const Polyline gamma = polyline_from_json(j.at("gamma"));
  Panel src{-2.1, -2.1, 2.1, 2.1, 0.0, {}};
  Panel img{-2.1, -2.1, 2.1, 2.1, kPanel, {}};
  src.circle({0.0, 0.0}, 2.0, kArrival, 0.5);
  src.circle({0.0, 0.0}, 1.0, kArrival, 0.5);
  src.circle({0.0, 0.0}, 0.5, kArrival, 0.5);
  src.path(gamma.vertices(), false, kSource, 1.0);
  src.dot({-1.0, 0.0}, kMarker, 3.0);
  img.circle({0.0, 0.0}, 2.0, kArrival, 0.5);
  img.line({0.0, 0.0}, {1.0, 0.0}, kImage, 1.5);
  img.path(pts_of(j.at("phi").at("vertices")), false, kWitness, 1.0);
  if (j.contains("params")) {
    for (const auto& c : j["params"].at("crossings")) {
      src.dot(point_from_json(c.at("P")), kMarker, 2.0);
      src.dot(point_from_json(c.at("Q")), kMarker, 2.0);
    }
  }
  return document({&src, &img});
}

std::string render_scan(const Json& j) {
  Panel p{0.0, 0.0, 1.0, 1.0, 0.0, {}};
  double lo = 0.0, hi = 1.0;
  for (const auto& c : j.at("circles")) {
    const Point2 ctr = point_from_json(c.at("center"));
    const double r = c.at("r").get<double>();
    lo = std::min({lo, ctr.x - 1.5 * r, ctr.y - 1.5 * r});
    hi = std::max({hi, ctr.x + 1.5 * r, ctr.y + 1.5 * r});
  }
  p.x0 = p.y0 = lo;
  p.x1 = p.y1 = hi;
  for (const auto& c : j.at("circles")) {
    const Point2 ctr = point_from_json(c.at("center"));
    const double r = c.at("r").get<double>();
    const bool pass = c.contains("pass") && c["pass"].get<bool>();
    p.circle(ctr, r, pass ? kSource : kImage, 1.0);
    if (!c.contains("probes")) continue;
    for (const auto& pr : c["probes"]) {
      p.dot(point_from_json(pr.at("z")), pr.at("verdict") == "violation" ? kImage : kMarker, 1.5);
    }
  }
  return document({&p});
}

}  // namespace

std::string render_svg(const Json& j) {
  if (!j.is_object()) throw Error("schema-error", "artifact must be a JSON object");
  try {
    if (j.contains("gamma") && j.contains("phi")) return render_witness(j);
    if (j.contains("gridmap") || (j.contains("vertices") && j.contains("segments"))) return render_gridmap(j);
    if (j.contains("circles")) return render_scan(j);
    if (j.contains("K") && j.contains("s") && j.contains("t")) {
      Panel p{0.0, 0.0, 1.0, 1.0, 0.0, {}};
      draw_grid(p, grid_from_json(j), kSource);
      return document({&p});
    }
    if (j.contains("eta") && j.contains("x") && j.contains("y")) {
      Panel p{0.0, 0.0, 1.0, 1.0, 0.0, {}};
      draw_arrival(p, arrival_from_json(j));
      return document({&p});
    }
    if (j.contains("vertices")) {
      const Polyline c = polyline_from_json(j);
      double lo = 0.0, hi = 1.0;
      for (Point2 q : c.vertices()) {
        lo = std::min({lo, q.x, q.y});
        hi = std::max({hi, q.x, q.y});
      }
      Panel p{lo, lo, hi, hi, 0.0, {}};
      p.path(c.vertices(), c.closed(), kSource, 1.0);
      return document({&p});
    }
  } catch (const Json::exception& e) {
    throw Error("schema-error", std::string("malformed artifact: ") + e.what());
  }
  throw Error("schema-error", "unknown artifact type");
}

}  // namespace noncross
