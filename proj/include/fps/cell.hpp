#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fps {

// One constant-potential slab. The potential is measured from the band edge
// of the embedding half-spaces.
struct Layer {
  double width_nm = 0.0;
  double potential_ev = 0.0;
};

// The physical period of the structure: an ordered layer stack plus the
// (position- and energy-independent) effective mass ratio m*/m0.
struct UnitCell {
  std::vector<Layer> layers;
  double effective_mass_ratio = 1.0;

  double period() const {
    double d = 0.0;
    for (const Layer& l : layers) d += l.width_nm;
    return d;
  }
};

inline void validate(const UnitCell& cell) {
  if (cell.layers.empty())
    throw std::invalid_argument("unit cell needs at least one layer");
  if (!(cell.effective_mass_ratio > 0.0) || !std::isfinite(cell.effective_mass_ratio))
    throw std::invalid_argument("effective mass ratio must be positive");
  for (std::size_t i = 0; i < cell.layers.size(); ++i) {
    const Layer& l = cell.layers[i];
    if (!(l.width_nm > 0.0) || !std::isfinite(l.width_nm))
      throw std::invalid_argument("layer " + std::to_string(i) + ": width must be > 0");
    if (!std::isfinite(l.potential_ev))
      throw std::invalid_argument("layer " + std::to_string(i) + ": potential must be finite");
  }
}

// Barrier-then-well cell with the well at the half-space band edge; the case
// with closed-form matrix elements.
inline bool is_barrier_well(const UnitCell& cell) {
  return cell.layers.size() == 2 && cell.layers[0].potential_ev > 0.0 &&
         cell.layers[1].potential_ev == 0.0;
}

}  // namespace fps
