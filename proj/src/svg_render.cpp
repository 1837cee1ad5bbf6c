#include "tpl/svg_render.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace tpl {
namespace {

constexpr std::array<const char*, 3> kMaskFill = {"#e63946", "#457b9d",
                                                  "#2a9d8f"};
constexpr const char* kUncoloredFill = "#999999";
constexpr const char* kObstacleFill = "#bbbbbb";

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void rect_element(std::ostringstream& os, Coord x, Coord y, Coord w, Coord h,
                  const char* cls, const std::string& fill,
                  const std::string& extra = {}) {
  os << "  <rect class=\"" << cls << "\" x=\"" << x << "\" y=\"" << y
     << "\" width=\"" << w << "\" height=\"" << h << "\" fill=\"" << fill
     << "\"" << extra << "/>\n";
}

}  // namespace

std::string render_layer_svg(const Layout& layout, int layer) {
  const Coord w = std::max<Coord>(layout.width, 1);
  const Coord h = std::max<Coord>(layout.height, 1);
  const Coord pad = 4;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << -pad << " "
     << -pad << " " << (w + 2 * pad) << " " << (h + 2 * pad)
     << "\" width=\"" << 8 * (w + 2 * pad) << "\" height=\""
     << 8 * (h + 2 * pad) << "\">\n";
  os << "  <rect class=\"frame\" x=\"0\" y=\"0\" width=\"" << w
     << "\" height=\"" << h
     << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  for (const Rect& r : layout.obstacles) {
    if (r.layer != layer) {
      continue;
    }
    rect_element(os, r.x_lo, r.y_lo, r.x_hi - r.x_lo, r.y_hi - r.y_lo,
                 "obstacle", kObstacleFill);
  }

  for (const PlacedWire& pw : layout.wires) {
    if (pw.seg.layer != layer) {
      continue;
    }
    const Rect body = pw.seg.body();
    const std::string fill =
        pw.color >= 1 && pw.color <= 3 ? kMaskFill[pw.color - 1]
                                       : kUncoloredFill;
    rect_element(os, body.x_lo, body.y_lo, body.x_hi - body.x_lo,
                 body.y_hi - body.y_lo, "wire", fill,
                 " data-net=\"" + xml_escape(pw.seg.net) + "\"");
  }

  for (const Stitch& st : layout.stitches) {
    if (st.layer != layer) {
      continue;
    }
    os << "  <g class=\"stitch\" stroke=\"#111111\" stroke-width=\"1\">"
       << "<line x1=\"" << (st.x - 3) << "\" y1=\"" << st.y << "\" x2=\""
       << (st.x + 3) << "\" y2=\"" << st.y << "\"/>"
       << "<line x1=\"" << st.x << "\" y1=\"" << (st.y - 3) << "\" x2=\""
       << st.x << "\" y2=\"" << (st.y + 3) << "\"/></g>\n";
  }

  os << "</svg>\n";
  return os.str();
}

std::vector<std::pair<std::string, std::string>> render_svg(
    const Layout& layout, const std::string& base_path) {
  std::vector<std::pair<std::string, std::string>> out;
  const int layers = std::max(layout.layers, 1);
  if (layers == 1) {
    out.emplace_back(base_path, render_layer_svg(layout, 0));
    return out;
  }
  const std::size_t dot = base_path.rfind('.');
  const std::string stem =
      dot == std::string::npos ? base_path : base_path.substr(0, dot);
  const std::string ext =
      dot == std::string::npos ? "" : base_path.substr(dot);
  for (int l = 0; l < layers; ++l) {
    out.emplace_back(stem + "_l" + std::to_string(l) + ext,
                     render_layer_svg(layout, l));
  }
  return out;
}

}  // namespace tpl
