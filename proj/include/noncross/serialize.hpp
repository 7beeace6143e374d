#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "noncross/arrival_grid.hpp"
#include "noncross/grids.hpp"
#include "noncross/injectify.hpp"
#include "noncross/inv_check.hpp"
#include "noncross/ncl_witness.hpp"
#include "noncross/planar_map.hpp"

namespace noncross {

using Json = nlohmann::ordered_json;

// All readers throw "schema-error" on missing, mistyped or unknown fields.

Json point_to_json(Point2 p);
Point2 point_from_json(const Json& j);

// {"kind", "params", "domain"}. The counterexample accepts {"center", "R"} params, which embed it in
// the unit square as a disk of radius R about center.
Json map_to_json(const PlanarMap& m);
PlanarMap map_from_json(const Json& j);

// {"closed", "vertices"}
Json polyline_to_json(const Polyline& p);
Polyline polyline_from_json(const Json& j);

// {"K", "s", "t"}
Json grid_to_json(const Grid& g);
Grid grid_from_json(const Json& j);

// {"eta", "x", "y"}
Json arrival_to_json(const ArrivalGrid& ag);
ArrivalGrid arrival_from_json(const Json& j);

Json marked_to_json(const std::vector<MarkedPoint>& pts);
Json gridmap_to_json(const GridMap& v);
Json injectivity_to_json(const InjectivityReport& r);
Json pipeline_to_json(const PipelineResult& r);
Json distinct_violation_to_json(const DistinctImageViolation& e);
Json obstruction_to_json(const NcObstruction& e);

Json inv_report_to_json(const INVReport& r);
Json scan_to_json(const ScanReport& s);

Json plan_to_json(const CrossingDecomposition& dec, const WitnessPlan& plan);
// {"gamma", "phi", "params", "report"}
Json witness_to_json(const WitnessResult& w);

// Stable text form: two-space indent and a trailing newline.
std::string dump(const Json& j);
Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace noncross
