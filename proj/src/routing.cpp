#include "citygen/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

#include "citygen/errors.hpp"

namespace citygen {

namespace {

constexpr Cell kNeighbours4[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

std::string cell_text(Cell c) {
  return "(" + std::to_string(c.x) + ", " + std::to_string(c.z) + ")";
}

bool gate_legal(const VoxelWorld& world, Cell c) {
  return world.surface(c).kind != SurfaceKind::Water && !is_artificial_surface(world, c);
}

}  // namespace

std::string_view to_string(Edge edge) {
  switch (edge) {
    case Edge::North:
      return "north";
    case Edge::South:
      return "south";
    case Edge::West:
      return "west";
    case Edge::East:
      return "east";
  }
  return "unknown";
}

Gates find_gates(const VoxelWorld& world) {
  const int w = world.width();
  const int l = world.length();
  const std::array<std::pair<Edge, Cell>, 4> midpoints = {{
      {Edge::North, {w / 2, 0}},
      {Edge::South, {w / 2, l - 1}},
      {Edge::West, {0, l / 2}},
      {Edge::East, {w - 1, l / 2}},
  }};
  Gates gates{};
  for (std::size_t e = 0; e < midpoints.size(); ++e) {
    const auto [edge, start] = midpoints[e];
    CellMask seen(w, l);
    std::queue<Cell> frontier;
    frontier.push(start);
    seen.set(start);
    std::optional<Cell> found;
    while (!frontier.empty() && !found) {
      const Cell c = frontier.front();
      frontier.pop();
      if (gate_legal(world, c)) {
        found = c;
        break;
      }
      for (Cell d : kNeighbours4) {
        const Cell n{c.x + d.x, c.z + d.z};
        if (world.in_bounds(n) && !seen.test(n)) {
          seen.set(n);
          frontier.push(n);
        }
      }
    }
    if (!found) {
      throw GatePlacementError("no legal gate cell for the " + std::string(to_string(edge)) + " edge");
    }
    gates[e] = *found;
  }
  return gates;
}

StepCostFn road_step_cost(const VoxelWorld& world, const CellMask& blocked,
                          const RoadCostParams& params) {
  return [&world, &blocked, params](Cell from, Cell to) -> std::optional<std::int64_t> {
    if (blocked.test(to)) return std::nullopt;
    std::int64_t cost = 1 + params.altitude_weight * std::abs(world.altitude(to) - world.altitude(from));
    if (world.surface(to).kind == SurfaceKind::Water) cost += params.water_surcharge;
    return cost;
  };
}

Path astar(const VoxelWorld& world, Cell start, Cell goal, const StepCostFn& cost) {
  world.check_bounds(start);
  world.check_bounds(goal);
  const int w = world.width();
  const int l = world.length();
  const auto idx = [l](Cell c) { return static_cast<std::size_t>(c.x) * l + c.z; };
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

  std::vector<std::int64_t> g(static_cast<std::size_t>(w) * l, kInf);
  std::vector<Cell> parent(g.size(), Cell{-1, -1});
  std::vector<std::uint8_t> closed(g.size(), 0);

  using Entry = std::tuple<std::int64_t, int, int>;  // f, x, z
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[idx(start)] = 0;
  open.emplace(manhattan(start, goal), start.x, start.z);

  while (!open.empty()) {
    const auto [f, x, z] = open.top();
    open.pop();
    const Cell c{x, z};
    if (closed[idx(c)]) continue;
    closed[idx(c)] = 1;
    if (c == goal) {
      Path path;
      path.cost = g[idx(c)];
      for (Cell p = goal; p != Cell{-1, -1}; p = parent[idx(p)]) path.cells.push_back(p);
      std::reverse(path.cells.begin(), path.cells.end());
      return path;
    }
    for (Cell d : kNeighbours4) {
      const Cell n{c.x + d.x, c.z + d.z};
      if (!world.in_bounds(n) || closed[idx(n)]) continue;
      const auto step = cost(c, n);
      if (!step) continue;
      const std::int64_t candidate = g[idx(c)] + *step;
      if (candidate < g[idx(n)]) {
        g[idx(n)] = candidate;
        parent[idx(n)] = c;
        open.emplace(candidate + manhattan(n, goal), n.x, n.z);
      }
    }
  }
  throw UnreachableError("no road from " + cell_text(start) + " to " + cell_text(goal));
}

namespace {

// Passable cells 4-adjacent to `fp` and outside it.
std::vector<Cell> perimeter(const VoxelWorld& world, const Rect& fp, const CellMask& blocked) {
  std::vector<Cell> cells;
  auto consider = [&](Cell c) {
    if (world.in_bounds(c) && !blocked.test(c)) cells.push_back(c);
  };
  for (int x = fp.x; x < fp.x_end(); ++x) {
    consider({x, fp.z - 1});
    consider({x, fp.z_end()});
  }
  for (int z = fp.z; z < fp.z_end(); ++z) {
    consider({fp.x - 1, z});
    consider({fp.x_end(), z});
  }
  return cells;
}

// Closest candidate to `target` by Manhattan distance, ties to the smaller cell.
std::optional<Cell> nearest(std::span<const Cell> candidates, Cell target) {
  std::optional<Cell> best;
  for (Cell c : candidates) {
    if (!best || std::pair(manhattan(c, target), c) < std::pair(manhattan(*best, target), *best)) best = c;
  }
  return best;
}

Cell nearest_open_cell(const VoxelWorld& world, Cell from, const CellMask& blocked) {
  CellMask seen(world.width(), world.length());
  std::queue<Cell> frontier;
  frontier.push(from);
  seen.set(from);
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop();
    if (!blocked.test(c)) return c;
    for (Cell d : kNeighbours4) {
      const Cell n{c.x + d.x, c.z + d.z};
      if (world.in_bounds(n) && !seen.test(n)) {
        seen.set(n);
        frontier.push(n);
      }
    }
  }
  throw UnreachableError("every cell is covered by a building");
}

}  // namespace

RoadPlan plan_roads(VoxelWorld& world, const Catalog& catalog, const Layout& layout,
                    const Gates& gates, std::span<const Cell> tower_entrances,
                    const RoadCostParams& params) {
  CellMask blocked(world.width(), world.length());
  const Placement* monument = nullptr;
  std::vector<const Placement*> factories;
  for (const Placement& p : layout.placements) {
    const BuildingSpec& spec = catalog.at(p.building_id);
    blocked.fill(spec.footprint_at(p.anchor));
    if (spec.is_monument && monument == nullptr) monument = &p;
    if (spec.is_munition_factory) factories.push_back(&p);
  }
  const StepCostFn cost = road_step_cost(world, blocked, params);

  RoadPlan plan;
  plan.gates = gates;
  auto add_segment = [&](std::string from, std::string to, Cell start, Cell goal) {
    try {
      Path path = astar(world, start, goal, cost);
      RoadSegment seg{std::move(from), std::move(to), std::move(path.cells), {}, path.cost};
      for (Cell c : seg.cells) seg.bridge.push_back(world.surface(c).kind == SurfaceKind::Water);
      plan.segments.push_back(std::move(seg));
    } catch (const UnreachableError& e) {
      plan.failures.push_back(from + " -> " + to + ": " + e.what());
    }
  };

  static constexpr Edge kGateEdges[] = {Edge::North, Edge::South, Edge::West, Edge::East};
  if (monument != nullptr) {
    const Rect fp = catalog.at(monument->building_id).footprint_at(monument->anchor);
    const std::vector<Cell> ring = perimeter(world, fp, blocked);
    for (std::size_t i = 0; i < gates.size(); ++i) {
      const std::string gate_name = "gate:" + std::string(to_string(kGateEdges[i]));
      if (auto goal = nearest(ring, gates[i])) {
        add_segment(gate_name, "monument", gates[i], *goal);
      } else {
        plan.failures.push_back(gate_name + " -> monument: monument has no open perimeter");
      }
    }
  } else {
    double sx = 0.0;
    double sz = 0.0;
    for (const Placement& p : layout.placements) {
      const BuildingSpec& spec = catalog.at(p.building_id);
      sx += p.anchor.x + spec.footprint_width / 2.0;
      sz += p.anchor.z + spec.footprint_length / 2.0;
    }
    Cell hub{world.width() / 2, world.length() / 2};
    if (!layout.placements.empty()) {
      const auto n = static_cast<double>(layout.placements.size());
      hub = {std::clamp(static_cast<int>(std::floor(sx / n)), 0, world.width() - 1),
             std::clamp(static_cast<int>(std::floor(sz / n)), 0, world.length() - 1)};
    }
    hub = nearest_open_cell(world, hub, blocked);
    for (std::size_t i = 0; i < gates.size(); ++i) {
      add_segment("gate:" + std::string(to_string(kGateEdges[i])), "centroid", gates[i], hub);
    }
  }

  for (const Placement* factory : factories) {
    const BuildingSpec& spec = catalog.at(factory->building_id);
    const Rect fp = spec.footprint_at(factory->anchor);
    const Cell centre{fp.x + fp.width / 2, fp.z + fp.length / 2};
    const auto entrance = nearest(tower_entrances, centre);
    const std::vector<Cell> ring = perimeter(world, fp, blocked);
    const auto start = entrance ? nearest(ring, *entrance) : std::nullopt;
    if (!entrance || !start) {
      plan.failures.push_back(spec.id + " -> tower: no entrance or open perimeter");
      continue;
    }
    add_segment(spec.id, "tower", *start, *entrance);
  }

  for (const RoadSegment& seg : plan.segments) {
    for (Cell c : seg.cells) world.mark_artificial(c);
  }
  return plan;
}

BridgeReport build_bridges(VoxelWorld& world, const RoadPlan& plan) {
  BridgeReport report;
  std::set<Cell> done;
  for (const RoadSegment& seg : plan.segments) {
    for (std::size_t i = 0; i < seg.cells.size(); ++i) {
      const Cell c = seg.cells[i];
      if (!done.insert(c).second) continue;
      const bool bridge = seg.bridge[i];
      world.apply({c.x, world.altitude(c) - 1, c.z, bridge ? "bridge" : "road"});
      ++(bridge ? report.bridges : report.roads);
    }
  }
  return report;
}

}  // namespace citygen
