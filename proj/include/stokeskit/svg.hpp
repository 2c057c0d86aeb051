#pragma once

#include <string>
#include <vector>

#include "stokeskit/geometry.hpp"

namespace stokeskit {

// SVG 1.1 figure of Stokes curves (one polyline each) and Stokes lines (one ray
// each) inside the disc; viewBox equals the disc bounding box.
std::string render_svg(const std::vector<StokesCurve>& curves,
                       const std::vector<Direction>& lines, double disc_radius);

} // namespace stokeskit
