#pragma once

#include <array>
#include <vector>

#include "citygen/geometry.hpp"
#include "citygen/world.hpp"

namespace citygen {

struct WallConfig {
  int ring_width = 3;
  // Plane height above the highest terrain under the ring.
  int plane_clearance = 4;
  int fixture_interval = 8;
  // Tower height above the plane.
  int tower_size = 5;
};

// Throws ConfigError on out-of-range parameters.
void validate(const WallConfig& cfg);

// Build rectangle inset by ring_width + 1: the wall ring plus its
// around-artificial fringe. Throws ConfigError when no inner cell remains.
Rect inner_city_bounds(int width, int length, const WallConfig& cfg);
Rect inner_city_bounds(const VoxelWorld& world, const WallConfig& cfg);

// Cells within ring_width of the world border.
bool in_ring(const VoxelWorld& world, const WallConfig& cfg, Cell c);

// One fringe cell per corner tower, 4-adjacent to both the tower and the
// inner city. Order: (min x, min z), (max x, min z), (min x, max z),
// (max x, max z).
std::array<Cell, 4> tower_entrances(const VoxelWorld& world, const WallConfig& cfg);

// The loop along which torches and cannons alternate (innermost ring row),
// walked clockwise from its minimum corner.
std::vector<Cell> fixture_loop(const VoxelWorld& world, const WallConfig& cfg);

struct WallReport {
  int plane_height = 0;
  std::array<Cell, 4> entrances{};
  int torches = 0;
  int cannons = 0;
  int passages = 0;
};

// Fills every ring column up to the plane height H = max ring altitude +
// clearance (wall_base blocks, then one wall_plane block as the top),
// raises corner towers tower_size above H, alternates torches and cannons
// every fixture_interval cells along fixture_loop(), and marks the whole
// ring artificial. Cells set in `passages` (roads through the ring) get no
// wall blocks.
WallReport build_wall(VoxelWorld& world, const WallConfig& cfg, const CellMask* passages = nullptr);

// True when every ring cell is artificial and the ring is 4-connected.
bool ring_closed(const VoxelWorld& world, const WallConfig& cfg);

}  // namespace citygen
