#include "citygen/walls.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <string>

#include "citygen/errors.hpp"

namespace citygen {

namespace {

constexpr Cell kNeighbours4[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

int border_distance(const VoxelWorld& world, Cell c) {
  return std::min({c.x, c.z, world.width() - 1 - c.x, world.length() - 1 - c.z});
}

// Corner squares of side ring_width + 1.
bool in_tower(const VoxelWorld& world, const WallConfig& cfg, Cell c) {
  const int side = cfg.ring_width + 1;
  const bool near_x = c.x < side || c.x >= world.width() - side;
  const bool near_z = c.z < side || c.z >= world.length() - side;
  return near_x && near_z;
}

}  // namespace

void validate(const WallConfig& cfg) {
  if (cfg.ring_width < 1) throw ConfigError("wall: ring_width must be >= 1");
  if (cfg.plane_clearance < 1) throw ConfigError("wall: plane_clearance must be >= 1");
  if (cfg.fixture_interval < 2) throw ConfigError("wall: fixture_interval must be >= 2");
  if (cfg.tower_size < 0) throw ConfigError("wall: tower_size must be >= 0");
}

Rect inner_city_bounds(int width, int length, const WallConfig& cfg) {
  validate(cfg);
  const int margin = cfg.ring_width + 1;
  if (width <= 2 * margin || length <= 2 * margin) {
    throw ConfigError("world " + std::to_string(width) + "x" + std::to_string(length) +
                      " is too small for a wall ring of width " + std::to_string(cfg.ring_width));
  }
  return {margin, margin, width - 2 * margin, length - 2 * margin};
}

Rect inner_city_bounds(const VoxelWorld& world, const WallConfig& cfg) {
  return inner_city_bounds(world.width(), world.length(), cfg);
}

bool in_ring(const VoxelWorld& world, const WallConfig& cfg, Cell c) {
  return world.in_bounds(c) && border_distance(world, c) < cfg.ring_width;
}

std::array<Cell, 4> tower_entrances(const VoxelWorld& world, const WallConfig& cfg) {
  inner_city_bounds(world, cfg);
  const int rw = cfg.ring_width;
  const int hi_x = world.width() - 1 - rw;
  const int hi_z = world.length() - 2 - rw;
  return {{{rw, rw + 1}, {hi_x, rw + 1}, {rw, hi_z}, {hi_x, hi_z}}};
}

std::vector<Cell> fixture_loop(const VoxelWorld& world, const WallConfig& cfg) {
  const int o = cfg.ring_width - 1;
  const int x1 = world.width() - 1 - o;
  const int z1 = world.length() - 1 - o;
  std::vector<Cell> loop;
  for (int x = o; x < x1; ++x) loop.push_back({x, o});
  for (int z = o; z < z1; ++z) loop.push_back({x1, z});
  for (int x = x1; x > o; --x) loop.push_back({x, z1});
  for (int z = z1; z > o; --z) loop.push_back({o, z});
  return loop;
}

WallReport build_wall(VoxelWorld& world, const WallConfig& cfg, const CellMask* passages) {
  inner_city_bounds(world, cfg);
  auto is_passage = [&](Cell c) { return passages != nullptr && passages->test(c); };

  WallReport report;
  int max_altitude = 0;
  for (int x = 0; x < world.width(); ++x) {
    for (int z = 0; z < world.length(); ++z) {
      if (in_ring(world, cfg, {x, z})) max_altitude = std::max(max_altitude, world.altitude({x, z}));
    }
  }
  const int plane = max_altitude + cfg.plane_clearance;
  report.plane_height = plane;

  for (int x = 0; x < world.width(); ++x) {
    for (int z = 0; z < world.length(); ++z) {
      const Cell c{x, z};
      const bool ring = in_ring(world, cfg, c);
      const bool tower = in_tower(world, cfg, c);
      if (!ring && !tower) continue;
      if (is_passage(c)) {
        if (ring) ++report.passages;
        world.mark_artificial(c);
        continue;
      }
      const int ground = world.altitude(c);
      if (ring) {
        for (int y = ground; y < plane - 1; ++y) world.apply({x, y, z, "wall_base"});
        world.apply({x, std::max(ground, plane - 1), z, "wall_plane"});
      }
      if (tower) {
        for (int y = world.altitude(c); y < plane + cfg.tower_size; ++y) world.apply({x, y, z, "tower"});
      }
    }
  }

  const std::vector<Cell> loop = fixture_loop(world, cfg);
  const std::size_t fixtures = loop.size() / static_cast<std::size_t>(cfg.fixture_interval);
  for (std::size_t i = 0; i < fixtures; ++i) {
    const Cell c = loop[i * static_cast<std::size_t>(cfg.fixture_interval)];
    const bool torch = i % 2 == 0;
    world.apply({c.x, std::max(plane, world.altitude(c)), c.z, torch ? "torch" : "cannon"});
    ++(torch ? report.torches : report.cannons);
  }

  report.entrances = tower_entrances(world, cfg);
  return report;
}

bool ring_closed(const VoxelWorld& world, const WallConfig& cfg) {
  std::optional<Cell> start;
  std::size_t ring_cells = 0;
  for (int x = 0; x < world.width(); ++x) {
    for (int z = 0; z < world.length(); ++z) {
      const Cell c{x, z};
      if (!in_ring(world, cfg, c)) continue;
      if (!world.artificial(c)) return false;
      ++ring_cells;
      if (!start) start = c;
    }
  }
  if (!start) return false;
  CellMask seen(world.width(), world.length());
  std::queue<Cell> frontier;
  frontier.push(*start);
  seen.set(*start);
  std::size_t reached = 0;
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop();
    ++reached;
    for (Cell d : kNeighbours4) {
      const Cell n{c.x + d.x, c.z + d.z};
      if (in_ring(world, cfg, n) && !seen.test(n)) {
        seen.set(n);
        frontier.push(n);
      }
    }
  }
  return reached == ring_cells;
}

}  // namespace citygen
