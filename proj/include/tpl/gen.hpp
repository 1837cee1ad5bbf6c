#pragma once

#include <cstdint>

#include "tpl/netlist.hpp"

namespace tpl {

/// Knobs for the synthetic netlist generator.
struct GenParams {
  int width = 24;      ///< routing grid columns
  int height = 24;     ///< routing grid rows
  int layers = 2;      ///< routing layers
  int nets = 12;       ///< nets to attempt (nets left with <2 pins are dropped)
  int min_pins = 2;    ///< pins per net, lower bound
  int max_pins = 4;    ///< pins per net, upper bound
  int pin_spread = 8;  ///< pins land within this radius of a per-net anchor
  int obstacles = 0;   ///< random blockage rectangles
  SpacingRules rules{};
};

/// Deterministic synthetic netlist: the same seed and params produce the
/// same netlist on every platform.  The generator derives values from the
/// raw engine output rather than distribution classes, whose sequences are
/// implementation-defined.
Netlist random_netlist(std::uint64_t seed, const GenParams& params = {});

}  // namespace tpl
