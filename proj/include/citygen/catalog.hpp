#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citygen/geometry.hpp"
#include "citygen/world.hpp"

namespace citygen {

struct BuildingSpec {
  std::string id;
  std::string name;
  int footprint_width = 1;   // along x
  int footprint_length = 1;  // along z
  std::int64_t reward = 0;
  bool is_monument = false;
  bool is_munition_factory = false;

  Rect footprint_at(Cell anchor) const {
    return {anchor.x, anchor.z, footprint_width, footprint_length};
  }
  std::int64_t area() const {
    return static_cast<std::int64_t>(footprint_width) * footprint_length;
  }
};

// Immutable set of buildings, keyed by id.
class Catalog {
 public:
  Catalog() = default;
  // Throws ConfigError on duplicate ids, empty footprints, negative rewards
  // or more than one monument.
  explicit Catalog(std::vector<BuildingSpec> specs);

  const std::vector<BuildingSpec>& specs() const { return specs_; }
  const BuildingSpec* find(std::string_view id) const;
  const BuildingSpec* find_by_name(std::string_view name) const;
  // Throws ConfigError for unknown ids.
  const BuildingSpec& at(std::string_view id) const;

 private:
  std::vector<BuildingSpec> specs_;
};

// The nine buildings with their rewards; footprints default to a rectangle
// whose area equals the reward.
Catalog default_catalog();

struct CostModel {
  TerrainCosts terrain;
  std::int64_t monument_bonus_max = 100;
  // Minimum Chebyshev gap, in cells, between any two footprints.
  int min_distance = 3;
};

struct Placement {
  std::string building_id;
  Cell anchor;

  friend bool operator==(const Placement&, const Placement&) = default;
};

// Sum of cell_cost over the footprint. Throws IllegalPlacementError when the
// footprint leaves the world.
std::int64_t building_cost(const VoxelWorld& world, const BuildingSpec& spec, Cell anchor,
                           const CostModel& model);

// floor(B * (1 - d / d_max)) for monuments, where d is the distance from the
// footprint centre to the centre of `inner` and d_max the centre-to-corner
// distance. Zero for every other building.
std::int64_t monument_bonus(const Rect& inner, const BuildingSpec& spec, Cell anchor,
                            const CostModel& model);

// reward + monument bonus - building cost; may be negative.
std::int64_t placement_score(const VoxelWorld& world, const BuildingSpec& spec, Cell anchor,
                             const CostModel& model, const Rect& inner);

// True when the footprint lies inside `inner` and keeps at least
// model.min_distance empty cells from every existing placement.
bool legal(const Catalog& catalog, std::span<const Placement> existing, const BuildingSpec& spec,
           Cell anchor, const CostModel& model, const Rect& inner);

// Per-cell costs with 2D prefix sums, so a footprint's cost is O(1).
// Earlier placements can be overlaid as artificial rectangles; only
// footprints within the around-artificial radius of an overlay fall back to
// per-cell evaluation.
class CostField {
 public:
  CostField(const VoxelWorld& world, const TerrainCosts& costs);

  int width() const { return width_; }
  int length() const { return length_; }

  // `r` must lie inside the world.
  std::int64_t cost(const Rect& r) const;
  std::int64_t cost(const Rect& r, std::span<const Rect> overlays) const;

 private:
  std::int64_t prefix(int x, int z) const {
    return prefix_[static_cast<std::size_t>(x) * (length_ + 1) + z];
  }

  int width_ = 0;
  int length_ = 0;
  TerrainCosts costs_;
  std::vector<std::int64_t> base_;
  std::vector<TerrainClass> classes_;
  std::vector<std::int64_t> prefix_;
};

Catalog catalog_from_json(std::string_view text);
std::string catalog_to_json(const Catalog& catalog);
CostModel cost_model_from_json(std::string_view text);
std::string cost_model_to_json(const CostModel& model);

}  // namespace citygen
