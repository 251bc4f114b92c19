#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citygen/catalog.hpp"
#include "citygen/geometry.hpp"
#include "citygen/layout_opt.hpp"
#include "citygen/routing.hpp"
#include "citygen/world.hpp"

namespace citygen {

struct Point2 {
  double x = 0.0;
  double z = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct KMeansResult {
  std::vector<Point2> centroids;
  std::vector<int> assignment;
  int iterations = 0;
};

// Lloyd's algorithm from k distinct random input points. Stops when the
// assignment stops changing or after max_iter rounds. A cluster that loses
// all its points restarts at the point farthest from its old centroid.
// Throws ConfigError unless 1 <= k <= points.size().
KMeansResult kmeans(std::span<const Point2> points, int k, int max_iter, std::uint64_t seed);

// Sum of squared distances from each point to its nearest centroid.
double within_cluster_ss(std::span<const Point2> points, std::span<const Point2> centroids);

struct LightPlan {
  int k = 0;
  std::vector<Point2> centroids;
  std::vector<Cell> lights;
  std::vector<std::string> warnings;
};

struct LightingParams {
  // Defaults to max(1, ceil(buildings / 2)).
  std::optional<int> k;
  int max_iter = 100;
  int search_radius = 20;
};

// A streetlight may stand inside `inner` on a cell that is not water, not
// artificial, not part of a footprint or road and not already lit.
bool light_cell_legal(const VoxelWorld& world, const CellMask& occupied, const Rect& inner, Cell c);

// BFS (4-connected, through any cell) from `from` to the nearest legal
// light cell within `radius` steps.
std::optional<Cell> nearest_light_cell(const VoxelWorld& world, const CellMask& occupied,
                                       const Rect& inner, Cell from, int radius);

// Clusters building centres, snaps each centroid to the nearest legal cell
// and writes a "streetlight" edit on each one.
LightPlan place_streetlights(VoxelWorld& world, const Catalog& catalog, const Layout& layout,
                             const RoadPlan& roads, const Rect& inner, const LightingParams& params,
                             std::uint64_t seed);

}  // namespace citygen
