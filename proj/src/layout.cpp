#include "tpl/layout.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tpl/serial_util.hpp"

namespace tpl {

using ojson = nlohmann::ordered_json;

std::string serialize_layout(const Layout& l) {
  std::string out;

  ojson header;
  header["kind"] = "header";
  header["width"] = l.width;
  header["height"] = l.height;
  header["layers"] = l.layers;
  header["sp_w"] = l.rules.sp_w;
  header["hw_w"] = l.rules.hw_w;
  header["sp_tp"] = l.rules.sp_tp;
  out += header.dump() + "\n";

  auto obstacles = l.obstacles;
  std::sort(obstacles.begin(), obstacles.end(), rect_order_less);
  for (const Rect& r : obstacles) {
    ojson j;
    j["kind"] = "obstacle";
    j["layer"] = r.layer;
    j["x_lo"] = r.x_lo;
    j["y_lo"] = r.y_lo;
    j["x_hi"] = r.x_hi;
    j["y_hi"] = r.y_hi;
    out += j.dump() + "\n";
  }

  auto wires = l.wires;
  std::sort(wires.begin(), wires.end(),
            [](const PlacedWire& a, const PlacedWire& b) {
              return a.seg.id < b.seg.id;
            });
  for (const PlacedWire& w : wires) {
    ojson j;
    j["kind"] = "wire";
    j["id"] = w.seg.id;
    j["net"] = w.seg.net;
    j["layer"] = w.seg.layer;
    j["axis"] = w.seg.axis == Axis::horizontal ? "h" : "v";
    j["x1"] = w.seg.x1;
    j["y1"] = w.seg.y1;
    j["x2"] = w.seg.x2;
    j["y2"] = w.seg.y2;
    j["hw"] = w.seg.hw;
    j["class"] = w.token;
    j["color"] = w.color;
    out += j.dump() + "\n";
  }

  auto stitches = l.stitches;
  std::sort(stitches.begin(), stitches.end());
  for (const Stitch& s : stitches) {
    ojson j;
    j["kind"] = "stitch";
    j["net"] = s.net;
    j["layer"] = s.layer;
    j["x"] = s.x;
    j["y"] = s.y;
    out += j.dump() + "\n";
  }
  return out;
}

Layout parse_layout(const std::string& text) {
  Layout l;
  bool saw_header = false;
  std::set<int> wire_ids;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const ojson j = parse_json_line(line, lineno);
    const std::string kind = get_str(j, "kind", lineno);

    if (kind == "header") {
      if (saw_header) {
        fail_line(lineno, "duplicate header");
      }
      saw_header = true;
      l.width = get_int(j, "width", lineno);
      l.height = get_int(j, "height", lineno);
      l.layers = static_cast<int>(get_int(j, "layers", lineno));
      l.rules.sp_w = get_int(j, "sp_w", lineno);
      l.rules.hw_w = get_int(j, "hw_w", lineno);
      l.rules.sp_tp = get_int(j, "sp_tp", lineno);
      if (l.width < 1 || l.height < 1 || l.layers < 1) {
        fail_line(lineno, "grid dimensions and layers must be positive");
      }
      if (l.rules.sp_w < 1 || l.rules.hw_w < 1 ||
          l.rules.sp_tp < l.rules.sp_w) {
        fail_line(lineno, "rules must satisfy sp_w >= 1, hw_w >= 1, "
                          "sp_tp >= sp_w");
      }
    } else if (kind == "obstacle") {
      if (!saw_header) {
        fail_line(lineno, "header must come first");
      }
      Rect r;
      r.layer = static_cast<int>(get_int(j, "layer", lineno));
      r.x_lo = get_int(j, "x_lo", lineno);
      r.y_lo = get_int(j, "y_lo", lineno);
      r.x_hi = get_int(j, "x_hi", lineno);
      r.y_hi = get_int(j, "y_hi", lineno);
      if (r.layer < 0 || r.layer >= l.layers) {
        fail_line(lineno, "obstacle layer out of range");
      }
      if (r.x_lo > r.x_hi || r.y_lo > r.y_hi) {
        fail_line(lineno, "obstacle extents must be ordered");
      }
      l.obstacles.push_back(r);
    } else if (kind == "wire") {
      if (!saw_header) {
        fail_line(lineno, "header must come first");
      }
      const int id = static_cast<int>(get_int(j, "id", lineno));
      if (!wire_ids.insert(id).second) {
        fail_line(lineno, "duplicate wire id: " + std::to_string(id));
      }
      const std::string axis = get_str(j, "axis", lineno);
      if (axis != "h" && axis != "v") {
        fail_line(lineno, "axis must be \"h\" or \"v\"");
      }
      PlacedWire w;
      try {
        w.seg = make_segment(
            id, get_str(j, "net", lineno),
            static_cast<int>(get_int(j, "layer", lineno)),
            axis == "h" ? Axis::horizontal : Axis::vertical,
            get_int(j, "x1", lineno), get_int(j, "y1", lineno),
            get_int(j, "x2", lineno), get_int(j, "y2", lineno),
            get_int(j, "hw", lineno));
      } catch (const std::invalid_argument& e) {
        fail_line(lineno, e.what());
      }
      if (w.seg.layer < 0 || w.seg.layer >= l.layers) {
        fail_line(lineno, "wire layer out of range");
      }
      w.token = static_cast<int>(get_int(j, "class", lineno));
      w.color = static_cast<int>(get_int(j, "color", lineno));
      if (w.color < 0 || w.color > 3) {
        fail_line(lineno, "color must be 0 (none) or 1..3");
      }
      l.wires.push_back(std::move(w));
    } else if (kind == "stitch") {
      if (!saw_header) {
        fail_line(lineno, "header must come first");
      }
      Stitch s;
      s.net = get_str(j, "net", lineno);
      s.layer = static_cast<int>(get_int(j, "layer", lineno));
      s.x = get_int(j, "x", lineno);
      s.y = get_int(j, "y", lineno);
      if (s.layer < 0 || s.layer >= l.layers) {
        fail_line(lineno, "stitch layer out of range");
      }
      l.stitches.push_back(std::move(s));
    } else {
      fail_line(lineno, "unknown record kind: " + kind);
    }
  }

  if (!saw_header) {
    throw std::invalid_argument("layout: missing header record");
  }
  return l;
}

}  // namespace tpl
