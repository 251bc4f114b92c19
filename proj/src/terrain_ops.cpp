#include "citygen/terrain_ops.hpp"

#include <string>

#include "citygen/errors.hpp"

namespace citygen {

namespace {

constexpr Cell kNeighbours4[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

}  // namespace

int clear_vegetation(VoxelWorld& world) {
  const std::string ground_block = "ground:" + modal_ground(world);
  int removed = 0;
  for (int x = 0; x < world.width(); ++x) {
    for (int z = 0; z < world.length(); ++z) {
      const Cell c{x, z};
      if (world.surface(c).kind != SurfaceKind::Vegetation) continue;
      const int ground = world.altitude(c) - world.canopy(c);
      if (world.canopy(c) > 0) world.apply({x, ground, z, "air"});
      world.apply({x, ground - 1, z, ground_block});
      ++removed;
    }
  }
  return removed;
}

int compare_altitude(const VoxelWorld& world, Cell c) {
  world.check_bounds(c);
  const int a = world.altitude(c);
  int score = 0;
  for (Cell d : kNeighbours4) {
    const Cell n{c.x + d.x, c.z + d.z};
    if (!world.in_bounds(n)) continue;
    const int b = world.altitude(n);
    score += (a > b) - (a < b);
  }
  return score;
}

ReshapeReport reshape(VoxelWorld& world, const ReshapeOptions& options) {
  if (options.max_passes < 1) throw ConfigError("reshape needs at least one pass");
  const std::string ground_block = "ground:" + modal_ground(world);

  ReshapeReport report;
  double sum = 0.0;
  for (int x = 0; x < world.width(); ++x) {
    for (int z = 0; z < world.length(); ++z) sum += world.altitude({x, z});
  }
  report.mean_altitude = sum / (static_cast<double>(world.width()) * world.length());

  const int pass_limit = options.until_fixpoint ? options.max_passes : 1;
  while (report.passes < pass_limit) {
    ++report.passes;
    bool changed = false;
    for (int x = 0; x < world.width(); ++x) {
      for (int z = 0; z < world.length(); ++z) {
        const Cell c{x, z};
        if (is_artificial_surface(world, c)) continue;
        const int score = compare_altitude(world, c);
        const int a = world.altitude(c);
        if (score == 3) {
          world.apply({x, a - 1, z, "air"});
          world.apply({x, a - 2, z, ground_block});
          report.changes.push_back({c, score, a, world.altitude(c)});
          ++report.lowered;
          changed = true;
        } else if (score == -3) {
          world.apply({x, a, z, ground_block});
          report.changes.push_back({c, score, a, world.altitude(c)});
          ++report.raised;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return report;
}

}  // namespace citygen
