#include "tpl/gen.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>

namespace tpl {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform-ish value in [0, n).  Plain modulo over the raw engine output;
  /// the slight bias is irrelevant here and the sequence is portable.
  int below(int n) {
    if (n <= 1) {
      return 0;
    }
    return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
  }

  /// Uniform-ish value in [lo, hi], inclusive.
  int between(int lo, int hi) { return lo + below(hi - lo + 1); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace

Netlist random_netlist(std::uint64_t seed, const GenParams& params) {
  Rng rng(seed);
  Netlist nl;
  nl.width = params.width;
  nl.height = params.height;
  nl.rules = params.rules;
  for (int l = 0; l < params.layers; ++l) {
    nl.layer_dirs.push_back(l % 2 == 0 ? Axis::horizontal : Axis::vertical);
  }

  std::set<std::tuple<int, int, int>> used;  // cells pins must avoid
  for (int i = 0; i < params.obstacles; ++i) {
    const int w = rng.between(1, 3);
    const int h = rng.between(1, 3);
    const int x = rng.below(std::max(1, params.width - w + 1));
    const int y = rng.below(std::max(1, params.height - h + 1));
    const int layer = rng.below(params.layers);
    nl.obstacles.push_back({x, y, x + w - 1, y + h - 1, layer});
    for (int cx = x; cx < x + w; ++cx) {
      for (int cy = y; cy < y + h; ++cy) {
        used.insert({cx, cy, layer});
      }
    }
  }

  for (int n = 0; n < params.nets; ++n) {
    Net net;
    net.name = "n" + std::to_string(n + 1);
    const int ax = rng.below(params.width);
    const int ay = rng.below(params.height);
    const int want = rng.between(params.min_pins, params.max_pins);
    int attempts = 0;
    while (static_cast<int>(net.pins.size()) < want && attempts < 200) {
      ++attempts;
      const int px =
          std::clamp(ax + rng.between(-params.pin_spread, params.pin_spread),
                     0, params.width - 1);
      const int py =
          std::clamp(ay + rng.between(-params.pin_spread, params.pin_spread),
                     0, params.height - 1);
      const int pl = rng.below(params.layers);
      if (used.count({px, py, pl})) {
        continue;
      }
      used.insert({px, py, pl});
      net.pins.push_back({px, py, pl});
    }
    if (net.pins.size() >= 2) {
      nl.nets.push_back(std::move(net));
    }
  }
  return nl;
}

}  // namespace tpl
