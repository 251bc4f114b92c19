#include "citygen/lighting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "citygen/errors.hpp"
#include "citygen/rng.hpp"

namespace citygen {

namespace {

constexpr Cell kNeighbours4[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

double dist2(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dz = a.z - b.z;
  return dx * dx + dz * dz;
}

int nearest_centroid(const Point2& p, std::span<const Point2> centroids) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = dist2(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace

KMeansResult kmeans(std::span<const Point2> points, int k, int max_iter, std::uint64_t seed) {
  if (k < 1) throw ConfigError("kmeans: k must be >= 1");
  if (points.size() < static_cast<std::size_t>(k)) {
    throw ConfigError("kmeans: need at least k = " + std::to_string(k) + " points, got " +
                      std::to_string(points.size()));
  }
  if (max_iter < 1) throw ConfigError("kmeans: max_iter must be >= 1");

  // Partial Fisher-Yates picks k distinct indices.
  Rng rng(seed);
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  KMeansResult result;
  for (int c = 0; c < k; ++c) {
    const std::size_t pick = c + rng.below(order.size() - c);
    std::swap(order[c], order[pick]);
    result.centroids.push_back(points[order[c]]);
  }

  result.assignment.assign(points.size(), -1);
  std::vector<int> next(points.size());
  for (result.iterations = 0; result.iterations < max_iter;) {
    for (std::size_t i = 0; i < points.size(); ++i) next[i] = nearest_centroid(points[i], result.centroids);
    if (next == result.assignment) break;
    result.assignment = next;
    ++result.iterations;

    std::vector<Point2> sums(k);
    std::vector<int> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      sums[result.assignment[i]].x += points[i].x;
      sums[result.assignment[i]].z += points[i].z;
      ++counts[result.assignment[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        result.centroids[c] = {sums[c].x / counts[c], sums[c].z / counts[c]};
        continue;
      }
      std::size_t far = 0;
      for (std::size_t i = 1; i < points.size(); ++i) {
        if (dist2(points[i], result.centroids[c]) > dist2(points[far], result.centroids[c])) far = i;
      }
      result.centroids[c] = points[far];
    }
  }
  return result;
}

double within_cluster_ss(std::span<const Point2> points, std::span<const Point2> centroids) {
  double total = 0.0;
  for (const Point2& p : points) total += dist2(p, centroids[nearest_centroid(p, centroids)]);
  return total;
}

bool light_cell_legal(const VoxelWorld& world, const CellMask& occupied, const Rect& inner, Cell c) {
  return inner.contains(c) && world.in_bounds(c) && !occupied.test(c) &&
         world.surface(c).kind != SurfaceKind::Water && !is_artificial_surface(world, c);
}

std::optional<Cell> nearest_light_cell(const VoxelWorld& world, const CellMask& occupied,
                                       const Rect& inner, Cell from, int radius) {
  if (!world.in_bounds(from)) return std::nullopt;
  CellMask seen(world.width(), world.length());
  std::queue<std::pair<Cell, int>> frontier;
  frontier.push({from, 0});
  seen.set(from);
  while (!frontier.empty()) {
    const auto [c, depth] = frontier.front();
    frontier.pop();
    if (light_cell_legal(world, occupied, inner, c)) return c;
    if (depth == radius) continue;
    for (Cell d : kNeighbours4) {
      const Cell n{c.x + d.x, c.z + d.z};
      if (world.in_bounds(n) && !seen.test(n)) {
        seen.set(n);
        frontier.push({n, depth + 1});
      }
    }
  }
  return std::nullopt;
}

LightPlan place_streetlights(VoxelWorld& world, const Catalog& catalog, const Layout& layout,
                             const RoadPlan& roads, const Rect& inner, const LightingParams& params,
                             std::uint64_t seed) {
  LightPlan plan;
  const auto buildings = static_cast<int>(layout.placements.size());
  plan.k = params.k.value_or(std::max(1, (buildings + 1) / 2));
  if (plan.k < 0) throw ConfigError("streetlights: k must be non-negative");
  if (plan.k == 0) return plan;
  if (buildings == 0) {
    plan.warnings.push_back("no buildings to light; no streetlights placed");
    return plan;
  }
  if (plan.k > buildings) {
    plan.warnings.push_back("k = " + std::to_string(plan.k) + " exceeds the " + std::to_string(buildings) +
                            " buildings; using k = " + std::to_string(buildings));
    plan.k = buildings;
  }

  CellMask occupied(world.width(), world.length());
  std::vector<Point2> centres;
  for (const Placement& p : layout.placements) {
    const BuildingSpec& spec = catalog.at(p.building_id);
    occupied.fill(spec.footprint_at(p.anchor));
    centres.push_back({p.anchor.x + spec.footprint_width / 2.0, p.anchor.z + spec.footprint_length / 2.0});
  }
  for (const RoadSegment& seg : roads.segments) {
    for (Cell c : seg.cells) occupied.set(c);
  }

  plan.centroids = kmeans(centres, plan.k, params.max_iter, seed).centroids;
  for (const Point2& centroid : plan.centroids) {
    const Cell rounded{static_cast<int>(std::lround(centroid.x)), static_cast<int>(std::lround(centroid.z))};
    const auto cell = nearest_light_cell(world, occupied, inner, rounded, params.search_radius);
    if (!cell) {
      plan.warnings.push_back("no legal streetlight cell within " + std::to_string(params.search_radius) +
                              " steps of (" + std::to_string(rounded.x) + ", " +
                              std::to_string(rounded.z) + ")");
      continue;
    }
    occupied.set(*cell);
    plan.lights.push_back(*cell);
  }
  for (Cell c : plan.lights) world.apply({c.x, world.altitude(c), c.z, "streetlight"});
  return plan;
}

}  // namespace citygen
