#include "tpl/netlist.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "tpl/serial_util.hpp"

namespace tpl {

using ojson = nlohmann::ordered_json;

std::string serialize_netlist(const Netlist& n) {
  std::string out;

  ojson header;
  header["kind"] = "header";
  header["width"] = n.width;
  header["height"] = n.height;
  header["layers"] = ojson::array();
  for (Axis d : n.layer_dirs) {
    header["layers"].push_back(d == Axis::horizontal ? "h" : "v");
  }
  out += header.dump() + "\n";

  ojson rules;
  rules["kind"] = "rules";
  rules["sp_w"] = n.rules.sp_w;
  rules["hw_w"] = n.rules.hw_w;
  rules["sp_tp"] = n.rules.sp_tp;
  out += rules.dump() + "\n";

  auto obstacles = n.obstacles;
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

  auto nets = n.nets;
  std::sort(nets.begin(), nets.end(),
            [](const Net& a, const Net& b) { return a.name < b.name; });
  for (const Net& net : nets) {
    ojson j;
    j["kind"] = "net";
    j["name"] = net.name;
    j["pins"] = ojson::array();
    for (const Pin& p : net.pins) {
      ojson jp;
      jp["x"] = p.x;
      jp["y"] = p.y;
      jp["layer"] = p.layer;
      j["pins"].push_back(jp);
    }
    out += j.dump() + "\n";
  }
  return out;
}

Netlist parse_netlist(const std::string& text) {
  Netlist n;
  bool saw_header = false;
  bool saw_rules = false;
  std::set<std::string> names;

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
      n.width = get_int(j, "width", lineno);
      n.height = get_int(j, "height", lineno);
      if (n.width < 1 || n.height < 1) {
        fail_line(lineno, "grid dimensions must be positive");
      }
      const auto& layers = get_array(j, "layers", lineno);
      for (const auto& d : layers) {
        if (!d.is_string() || (d != "h" && d != "v")) {
          fail_line(lineno, "layer direction must be \"h\" or \"v\"");
        }
        n.layer_dirs.push_back(d == "h" ? Axis::horizontal : Axis::vertical);
      }
      if (n.layer_dirs.empty()) {
        fail_line(lineno, "at least one layer required");
      }
    } else if (kind == "rules") {
      if (!saw_header) {
        fail_line(lineno, "header must come first");
      }
      if (saw_rules) {
        fail_line(lineno, "duplicate rules");
      }
      saw_rules = true;
      n.rules.sp_w = get_int(j, "sp_w", lineno);
      n.rules.hw_w = get_int(j, "hw_w", lineno);
      n.rules.sp_tp = get_int(j, "sp_tp", lineno);
      if (n.rules.sp_w < 1 || n.rules.hw_w < 1) {
        fail_line(lineno, "spacing and half width must be positive");
      }
      if (n.rules.sp_tp < n.rules.sp_w) {
        fail_line(lineno, "color spacing must be at least the wire spacing");
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
      if (r.layer < 0 || r.layer >= static_cast<int>(n.layer_dirs.size())) {
        fail_line(lineno, "obstacle layer out of range");
      }
      if (r.x_lo > r.x_hi || r.y_lo > r.y_hi) {
        fail_line(lineno, "obstacle extents must be ordered");
      }
      if (r.x_lo < 0 || r.y_lo < 0 || r.x_hi >= n.width ||
          r.y_hi >= n.height) {
        fail_line(lineno, "obstacle outside the grid");
      }
      n.obstacles.push_back(r);
    } else if (kind == "net") {
      if (!saw_header) {
        fail_line(lineno, "header must come first");
      }
      Net net;
      net.name = get_str(j, "name", lineno);
      if (net.name.empty()) {
        fail_line(lineno, "net name must be nonempty");
      }
      if (!names.insert(net.name).second) {
        fail_line(lineno, "duplicate net name: " + net.name);
      }
      for (const auto& jp : get_array(j, "pins", lineno)) {
        if (!jp.is_object()) {
          fail_line(lineno, "pin must be an object");
        }
        Pin p;
        p.x = get_int(jp, "x", lineno);
        p.y = get_int(jp, "y", lineno);
        p.layer = static_cast<int>(get_int(jp, "layer", lineno));
        if (p.x < 0 || p.x >= n.width || p.y < 0 || p.y >= n.height) {
          fail_line(lineno, "pin outside the grid");
        }
        if (p.layer < 0 || p.layer >= static_cast<int>(n.layer_dirs.size())) {
          fail_line(lineno, "pin layer out of range");
        }
        net.pins.push_back(p);
      }
      if (net.pins.empty()) {
        fail_line(lineno, "net without pins: " + net.name);
      }
      n.nets.push_back(std::move(net));
    } else {
      fail_line(lineno, "unknown record kind: " + kind);
    }
  }

  if (!saw_header) {
    throw std::invalid_argument("netlist: missing header record");
  }
  if (!saw_rules) {
    throw std::invalid_argument("netlist: missing rules record");
  }
  return n;
}

}  // namespace tpl
