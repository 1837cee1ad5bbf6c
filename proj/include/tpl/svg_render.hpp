#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tpl/layout.hpp"

namespace tpl {

/// One layer of a layout as a standalone SVG document: a grid frame, gray
/// obstacle rectangles, wire bodies filled with one fixed color per mask
/// (gray for uncolored wires), and a small cross per stitch.  An empty
/// layout renders to just the frame.
std::string render_layer_svg(const Layout& layout, int layer);

/// Every layer rendered, paired with the file path it should land in.  A
/// single-layer layout keeps `base_path` verbatim; with more layers a
/// `_l<N>` tag is inserted before the extension ("plan.svg" -> "plan_l0.svg",
/// "plan_l1.svg", ...).
std::vector<std::pair<std::string, std::string>> render_svg(
    const Layout& layout, const std::string& base_path);

}  // namespace tpl
