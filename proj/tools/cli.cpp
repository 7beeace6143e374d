#include "cli.hpp"

#include <CLI11.hpp>

#include <optional>
#include <sstream>

#include "noncross/injectify.hpp"
#include "noncross/ncl_witness.hpp"
#include "noncross/serialize.hpp"
#include "noncross/svg.hpp"

namespace noncross::cli {

namespace {

struct Options {
  std::string map_path, curve_path, grid_path, in_path, out_path, svg_path;
  std::optional<int> K;
  std::optional<double> eta, eps;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tols, points, circles;
  bool jacobian = false;
  int random = 0;
};

std::vector<double> split_numbers(const std::string& s, std::size_t count, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error("schema-error", "malformed " + what + ": " + s);
    }
  }
  if (out.size() != count) throw Error("schema-error", "malformed " + what + ": " + s);
  return out;
}

Tolerances tolerances(const Options& o) {
  Tolerances tol;
  for (const auto& kv : o.tols) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error("schema-error", "tolerance override must be KEY=VAL: " + kv);
    tol.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return tol;
}

template <typename T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw Error("usage", std::string("missing required flag ") + flag);
  return *v;
}

std::string need_path(const std::string& p, const char* flag) {
  if (p.empty()) throw Error("usage", std::string("missing required flag ") + flag);
  return p;
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  void emit(const Json& j) {
    const std::string text = dump(j);
    if (o_.out_path.empty()) {
      out_ << text;
    } else {
      write_text_file(o_.out_path, text);
    }
    if (!o_.svg_path.empty()) write_text_file(o_.svg_path, render_svg(j));
  }

  int map_eval() {
    const PlanarMap map = map_from_json(read_json_file(need_path(o_.map_path, "--map")));
    const Tolerances tol = tolerances(o_);
    if (o_.points.empty()) throw Error("usage", "map eval needs at least one --point");
    Json results = Json::array();
    for (const auto& s : o_.points) {
      const auto xy = split_numbers(s, 2, "point");
      const Point2 p{xy[0], xy[1]};
      Json r{{"point", point_to_json(p)}, {"image", point_to_json(eval(map, p, tol))}};
      if (o_.jacobian) {
        const Mat2 J = jacobian(map, p, tol.fd_step, tol);
        r["jacobian"] = Json::array({Json::array({J.a11, J.a12}), Json::array({J.a21, J.a22})});
        r["det"] = J.det();
      }
      results.push_back(r);
    }
    emit(results.size() == 1 ? results[0] : Json{{"results", results}});
    return 0;
  }

  int inv_check() {
    const PlanarMap map = map_from_json(read_json_file(need_path(o_.map_path, "--map")));
    const Tolerances tol = tolerances(o_);
    std::vector<CircleSpec> circles;
    for (const auto& s : o_.circles) {
      const auto v = split_numbers(s, 3, "circle");
      circles.push_back({{v[0], v[1]}, v[2]});
    }
    if (o_.random > 0) {
      const auto extra = random_circle_family(map.domain, static_cast<std::size_t>(o_.random), need(o_.seed, "--seed"));
      circles.insert(circles.end(), extra.begin(), extra.end());
    }
    const bool explicit_circles = !o_.circles.empty();
    if (circles.empty()) circles = default_circle_family(map.domain);
    const ScanReport scan = scan_inv(map, circles, tol);
    if (explicit_circles) {
      for (const auto& sk : scan.skipped) {
        if (sk.index < o_.circles.size()) throw Error("bad-circle", sk.reason);
      }
    }
    emit(scan_to_json(scan));
    return scan.failures > 0 ? 1 : 0;
  }

  int grid_build() {
    const PlanarMap map = map_from_json(read_json_file(need_path(o_.map_path, "--map")));
    const Grid g = build_grid(need(o_.K, "--K"), map, need(o_.seed, "--seed"), tolerances(o_));
    emit(grid_to_json(g));
    return 0;
  }

  int arrival_build() {
    const PlanarMap map = map_from_json(read_json_file(need_path(o_.map_path, "--map")));
    const Grid g = grid_from_json(read_json_file(need_path(o_.grid_path, "--grid")));
    const ArrivalGrid ag = build_arrival_grid(map, g, need(o_.eta, "--eta"), need(o_.seed, "--seed"), tolerances(o_));
    emit(arrival_to_json(ag));
    return 0;
  }

  int injectify_run() {
    const PlanarMap map = map_from_json(read_json_file(need_path(o_.map_path, "--map")));
    std::optional<Grid> supplied;
    if (!o_.grid_path.empty()) supplied = grid_from_json(read_json_file(o_.grid_path));
    const int K = supplied ? supplied->K : need(o_.K, "--K");
    const PipelineResult r = run_pipeline(map, K, need(o_.eta, "--eta"), need(o_.seed, "--seed"), tolerances(o_), supplied);
    emit(pipeline_to_json(r));
    return r.report.injective ? 0 : 1;
  }

  int witness_run() {
    const Polyline gamma = polyline_from_json(read_json_file(need_path(o_.curve_path, "--curve")));
    const PlanarMap map = o_.map_path.empty() ? counterexample_map() : map_from_json(read_json_file(o_.map_path));
    const WitnessResult w = run_witness(gamma, map, need(o_.eps, "--eps"), tolerances(o_));
    emit(witness_to_json(w));
    return w.report.pass ? 0 : 1;
  }

  int render() {
    const std::string svg = render_svg(read_json_file(need_path(o_.in_path, "--in")));
    if (o_.out_path.empty()) {
      out_ << svg;
    } else {
      write_text_file(o_.out_path, svg);
    }
    return 0;
  }

 private:
  const Options& o_;
  std::ostream& out_;
};

void diagnostics(const Options& o, std::ostream& out, const Json& j) {
  const std::string text = dump(j);
  if (o.out_path.empty()) {
    out << text;
  } else {
    write_text_file(o.out_path, text);
  }
}

}  // namespace

int exit_code_for(const std::string& code) {
  for (const char* c : {"schema-error", "precondition", "usage", "io-error", "bad-circle", "degenerate-polyline"}) {
    if (code == c) return 2;
  }
  for (const char* c : {"undefined-at-point", "out-of-domain", "jacobian-unreliable"}) {
    if (code == c) return 3;
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-crossing approximation toolkit"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out_path, "Output file (stdout when omitted)");
    c->add_option("--tol", o.tols, "Tolerance override KEY=VAL (repeatable)");
  };
  auto with_map = [&](CLI::App* c) { c->add_option("--map", o.map_path, "Map descriptor JSON"); };
  auto with_svg = [&](CLI::App* c) { c->add_option("--svg", o.svg_path, "Also render the result to this SVG file"); };

  auto* map_cmd = app.add_subcommand("map", "Planar maps")->require_subcommand(1);
  auto* map_eval = map_cmd->add_subcommand("eval", "Evaluate a map at points");
  with_map(map_eval);
  common(map_eval);
  map_eval->add_option("--point", o.points, "Point x,y (repeatable)");
  map_eval->add_flag("--jacobian", o.jacobian, "Add the Jacobian and its determinant");

  auto* inv_cmd = app.add_subcommand("inv", "INV property")->require_subcommand(1);
  auto* inv_check = inv_cmd->add_subcommand("check", "Degree checks on circles");
  with_map(inv_check);
  common(inv_check);
  with_svg(inv_check);
  inv_check->add_option("--circle", o.circles, "Circle cx,cy,r (repeatable)");
  inv_check->add_option("--random", o.random, "Add this many random circles (needs --seed)");
  inv_check->add_option("--seed", o.seed, "Random seed");

  auto* grid_cmd = app.add_subcommand("grid", "Source grids")->require_subcommand(1);
  auto* grid_build = grid_cmd->add_subcommand("build", "Build a good starting grid");
  with_map(grid_build);
  common(grid_build);
  with_svg(grid_build);
  grid_build->add_option("--K", o.K, "Grid size");
  grid_build->add_option("--seed", o.seed, "Random seed");

  auto* arr_cmd = app.add_subcommand("arrival", "Arrival grids")->require_subcommand(1);
  auto* arr_build = arr_cmd->add_subcommand("build", "Build a good arrival grid");
  with_map(arr_build);
  common(arr_build);
  with_svg(arr_build);
  arr_build->add_option("--grid", o.grid_path, "Source grid JSON");
  arr_build->add_option("--eta", o.eta, "Side length");
  arr_build->add_option("--seed", o.seed, "Random seed");

  auto* inj_cmd = app.add_subcommand("injectify", "Grid injectification")->require_subcommand(1);
  auto* inj_run = inj_cmd->add_subcommand("run", "Run the full pipeline");
  with_map(inj_run);
  common(inj_run);
  with_svg(inj_run);
  inj_run->add_option("--K", o.K, "Grid size");
  inj_run->add_option("--grid", o.grid_path, "Use this grid instead of building one");
  inj_run->add_option("--eta", o.eta, "Arrival side length");
  inj_run->add_option("--seed", o.seed, "Random seed");

  auto* wit_cmd = app.add_subcommand("witness", "Curve witnesses")->require_subcommand(1);
  auto* wit_run = wit_cmd->add_subcommand("run", "Build and verify a witness");
  wit_run->add_option("--curve", o.curve_path, "Curve polyline JSON");
  with_map(wit_run);
  common(wit_run);
  with_svg(wit_run);
  wit_run->add_option("--eps", o.eps, "Approximation radius");

  auto* render_cmd = app.add_subcommand("render", "Render an artifact to SVG");
  render_cmd->add_option("--in", o.in_path, "Artifact JSON");
  render_cmd->add_option("--out", o.out_path, "SVG file (stdout when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  Runner r(o, out);
  try {
    if (map_eval->parsed()) return r.map_eval();
    if (inv_check->parsed()) return r.inv_check();
    if (grid_build->parsed()) return r.grid_build();
    if (arr_build->parsed()) return r.arrival_build();
    if (inj_run->parsed()) return r.injectify_run();
    if (wit_run->parsed()) return r.witness_run();
    if (render_cmd->parsed()) return r.render();
  } catch (const DistinctImageViolation& e) {
    err << "error: " << e.what() << "\n";
    diagnostics(o, out, distinct_violation_to_json(e));
    return 1;
  } catch (const NcObstruction& e) {
    err << "error: " << e.what() << "\n";
    diagnostics(o, out, obstruction_to_json(e));
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const int code = exit_code_for(e.code());
    if (code == 1) diagnostics(o, out, Json{{"error", e.code()}, {"detail", e.what()}});
    return code;
  }
  err << "error: no command\n";
  return 2;
}

}  // namespace noncross::cli
