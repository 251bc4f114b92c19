#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citygen/catalog.hpp"
#include "citygen/geometry.hpp"
#include "citygen/layout_opt.hpp"
#include "citygen/world.hpp"

namespace citygen {

enum class Edge : std::uint8_t { North, South, West, East };

std::string_view to_string(Edge edge);

// Gates in Edge order: north (z = 0), south (z = length - 1), west (x = 0),
// east (x = width - 1).
using Gates = std::array<Cell, 4>;

// For each edge midpoint, the BFS-nearest cell that is neither water nor
// artificial. Throws GatePlacementError naming the edge when none exists.
Gates find_gates(const VoxelWorld& world);

// Cost of stepping between two 4-adjacent cells, or nullopt if `to` cannot
// be entered. Costs must be at least 1 for the Manhattan heuristic to stay
// admissible.
using StepCostFn = std::function<std::optional<std::int64_t>(Cell from, Cell to)>;

struct RoadCostParams {
  std::int64_t altitude_weight = 2;
  std::int64_t water_surcharge = 4;
};

// 1 + weight·|Δaltitude|, plus the surcharge entering water; cells set in
// `blocked` are forbidden.
StepCostFn road_step_cost(const VoxelWorld& world, const CellMask& blocked,
                          const RoadCostParams& params = {});

struct Path {
  std::vector<Cell> cells;
  std::int64_t cost = 0;
};

// 4-connected A* with the Manhattan heuristic. The open list is ordered by
// (f, x, z) so equal-cost ties resolve the same way every run. Throws
// UnreachableError when the goal cannot be reached.
Path astar(const VoxelWorld& world, Cell start, Cell goal, const StepCostFn& cost);

struct RoadSegment {
  std::string from;
  std::string to;
  std::vector<Cell> cells;
  std::vector<bool> bridge;  // original surface was water
  std::int64_t cost = 0;
};

struct RoadPlan {
  Gates gates{};
  std::vector<RoadSegment> segments;
  std::vector<std::string> failures;
};

// Connects every gate to the monument perimeter (or to the layout centroid
// when there is no monument) and each munition factory perimeter to the
// nearest tower entrance. Unreachable segments are recorded in `failures`;
// the rest are planned. Road cells are marked artificial in `world`.
RoadPlan plan_roads(VoxelWorld& world, const Catalog& catalog, const Layout& layout,
                    const Gates& gates, std::span<const Cell> tower_entrances,
                    const RoadCostParams& params = {});

struct BridgeReport {
  int roads = 0;
  int bridges = 0;
};

// Writes one edit per distinct road cell: "bridge" over water, "road"
// elsewhere, replacing the column's top block.
BridgeReport build_bridges(VoxelWorld& world, const RoadPlan& plan);

}  // namespace citygen
