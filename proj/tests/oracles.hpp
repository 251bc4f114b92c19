#pragma once

// Independent reference implementations used only by tests. None of these
// call into the code paths they are used to check.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

#include "citygen/catalog.hpp"
#include "citygen/geometry.hpp"
#include "citygen/world.hpp"

namespace citygen::oracle {

using Grid = std::vector<std::vector<int>>;

inline Grid altitudes(const VoxelWorld& world) {
  Grid a(world.width(), std::vector<int>(world.length()));
  for (int x = 0; x < world.width(); ++x)
    for (int z = 0; z < world.length(); ++z) a[x][z] = world.altitude({x, z});
  return a;
}

// Straight transcription of the raster reshaping loop on a bare altitude grid.
struct ReshapeOutcome {
  Grid altitude;
  std::set<std::pair<int, int>> modified;
};

inline ReshapeOutcome reshape_transcription(Grid a) {
  const int w = static_cast<int>(a.size());
  const int l = static_cast<int>(a[0].size());
  ReshapeOutcome out;
  for (int x = 0; x < w; ++x) {
    for (int z = 0; z < l; ++z) {
      int score = 0;
      const int dx[] = {1, -1, 0, 0};
      const int dz[] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx[k];
        const int nz = z + dz[k];
        if (nx < 0 || nz < 0 || nx >= w || nz >= l) continue;
        if (a[x][z] > a[nx][nz]) score += 1;
        if (a[x][z] < a[nx][nz]) score -= 1;
      }
      if (score == 3) {
        a[x][z] -= 1;
        out.modified.insert({x, z});
      }
      if (score == -3) {
        a[x][z] += 1;
        out.modified.insert({x, z});
      }
    }
  }
  out.altitude = std::move(a);
  return out;
}

// Plain Dijkstra over the road cost: 1 + 2|Δaltitude| + 4 entering water,
// blocked cells impassable. Returns nullopt when unreachable.
inline std::optional<std::int64_t> dijkstra_road_cost(const VoxelWorld& world, const CellMask& blocked,
                                                      Cell start, Cell goal) {
  const int w = world.width();
  const int l = world.length();
  std::vector<std::int64_t> dist(static_cast<std::size_t>(w) * l, std::numeric_limits<std::int64_t>::max());
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[start.x * l + start.z] = 0;
  pq.push({0, start.x * l + start.z});
  while (!pq.empty()) {
    auto [d, id] = pq.top();
    pq.pop();
    if (d != dist[id]) continue;
    const int x = id / l;
    const int z = id % l;
    if (x == goal.x && z == goal.z) return d;
    const int dx[] = {1, -1, 0, 0};
    const int dz[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int nx = x + dx[k];
      const int nz = z + dz[k];
      if (nx < 0 || nz < 0 || nx >= w || nz >= l || blocked.test({nx, nz})) continue;
      std::int64_t step = 1 + 2 * std::abs(world.altitude({nx, nz}) - world.altitude({x, z}));
      if (world.surface({nx, nz}).kind == SurfaceKind::Water) step += 4;
      const int nid = nx * l + nz;
      if (d + step < dist[nid]) {
        dist[nid] = d + step;
        pq.push({dist[nid], nid});
      }
    }
  }
  return std::nullopt;
}

// Terrain cost of one cell written out from the class table: artificial
// 10000, next to artificial 50, water 10, plain 0, otherwise the gradient.
inline std::int64_t terrain_cost(const VoxelWorld& world, Cell c) {
  auto artificial = [&](Cell q) {
    return world.artificial(q) || world.surface(q).kind == SurfaceKind::Artificial;
  };
  if (artificial(c)) return 10000;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dz = -1; dz <= 1; ++dz) {
      const Cell n{c.x + dx, c.z + dz};
      if (world.in_bounds(n) && artificial(n)) return 50;
    }
  if (world.surface(c).kind == SurfaceKind::Water) return 10;
  int grad = 0;
  const int dx[] = {1, -1, 0, 0};
  const int dz[] = {0, 0, 1, -1};
  for (int k = 0; k < 4; ++k) {
    const Cell n{c.x + dx[k], c.z + dz[k]};
    if (world.in_bounds(n)) grad += std::abs(world.altitude(n) - world.altitude(c));
  }
  return grad;
}

// Exhaustive optimum over every legal way to place (or skip) each of two
// non-monument buildings. Valid when min_distance exceeds the
// around-artificial radius, so placements cannot change each other's cost.
inline std::int64_t two_building_optimum(const VoxelWorld& world, const BuildingSpec& a,
                                         const BuildingSpec& b, const CostModel& model, const Rect& inner) {
  struct Option {
    Rect fp;
    std::int64_t score;
  };
  auto options = [&](const BuildingSpec& spec) {
    std::vector<Option> out;
    for (int x = inner.x; x + spec.footprint_width <= inner.x_end(); ++x) {
      for (int z = inner.z; z + spec.footprint_length <= inner.z_end(); ++z) {
        std::int64_t cost = 0;
        for (int i = x; i < x + spec.footprint_width; ++i)
          for (int j = z; j < z + spec.footprint_length; ++j) cost += terrain_cost(world, {i, j});
        out.push_back({{x, z, spec.footprint_width, spec.footprint_length}, spec.reward - cost});
      }
    }
    return out;
  };
  const auto oa = options(a);
  const auto ob = options(b);
  std::int64_t best = 0;  // neither placed
  for (const auto& p : oa) best = std::max(best, p.score);
  for (const auto& q : ob) best = std::max(best, q.score);
  for (const auto& p : oa) {
    for (const auto& q : ob) {
      const int gx = std::max({0, q.fp.x - p.fp.x_end(), p.fp.x - q.fp.x_end()});
      const int gz = std::max({0, q.fp.z - p.fp.z_end(), p.fp.z - q.fp.z_end()});
      if (std::max(gx, gz) >= model.min_distance) best = std::max(best, p.score + q.score);
    }
  }
  return best;
}

// Smallest Manhattan distance from `from` to a cell accepted by `legal`,
// scanning every cell within `radius`.
template <typename Legal>
std::optional<int> nearest_legal_distance(const VoxelWorld& world, Cell from, int radius, Legal&& legal) {
  std::optional<int> best;
  for (int x = 0; x < world.width(); ++x) {
    for (int z = 0; z < world.length(); ++z) {
      const int d = std::abs(x - from.x) + std::abs(z - from.z);
      if (d <= radius && legal(Cell{x, z}) && (!best || d < *best)) best = d;
    }
  }
  return best;
}

}  // namespace citygen::oracle
