#pragma once

#include <string>

#include "noncross/serialize.hpp"

namespace noncross {

// Palette: source geometry #1f77b4, images and u o gamma #d62728, witness curves #2ca02c,
// arrival grid #7f7f7f, markers #000000. Panels are 512 x 512 with a fixed world box per artifact
// type, coordinates printed with four decimals.

// Recognizes grids {"K","s","t"}, arrival grids {"eta","x","y"}, polylines {"closed","vertices"},
// grid maps (pipeline output or a bare {"vertices","segments"}), witnesses {"gamma","phi"} (two
// panels) and INV scans. Throws "schema-error" for anything else or for an empty polyline.
std::string render_svg(const Json& artifact);

}  // namespace noncross
