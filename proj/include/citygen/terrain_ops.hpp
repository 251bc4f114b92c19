#pragma once

#include <vector>

#include "citygen/world.hpp"

namespace citygen {

// Turns every Vegetation column into bare ground of the modal ground kind,
// dropping its canopy. Returns the number of columns cleared.
int clear_vegetation(VoxelWorld& world);

// Signed neighbour comparison: +1 for each existing 4-neighbour lower than
// the cell, -1 for each higher one. Range [-4, 4].
int compare_altitude(const VoxelWorld& world, Cell c);

struct ReshapeChange {
  Cell cell;
  int score = 0;
  int altitude_before = 0;
  int altitude_after = 0;
};

struct ReshapeReport {
  int lowered = 0;
  int raised = 0;
  int passes = 0;
  // Mean altitude before reshaping. Reported only; it drives no decision.
  double mean_altitude = 0.0;
  std::vector<ReshapeChange> changes;
};

struct ReshapeOptions {
  // Repeat raster passes until one makes no change (bounded by max_passes).
  bool until_fixpoint = false;
  int max_passes = 100;
};

// Raster scan (x outer, z inner) over the live altitude map. A cell scoring
// exactly +3 loses its top block (two edits: air, then ground below); one
// scoring exactly -3 gains a ground block (one edit). Artificial cells are
// left alone.
ReshapeReport reshape(VoxelWorld& world, const ReshapeOptions& options = {});

}  // namespace citygen
