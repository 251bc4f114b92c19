#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citygen/geometry.hpp"

namespace citygen {

enum class SurfaceKind : std::uint8_t { Water, Vegetation, NaturalGround, Artificial };

// Top-of-column material. `ground` names the block kind for NaturalGround
// cells and is empty otherwise.
struct Surface {
  SurfaceKind kind = SurfaceKind::NaturalGround;
  std::string ground = "grass_block";

  static Surface water() { return {SurfaceKind::Water, {}}; }
  static Surface vegetation() { return {SurfaceKind::Vegetation, {}}; }
  static Surface natural(std::string kind) { return {SurfaceKind::NaturalGround, std::move(kind)}; }
  static Surface artificial() { return {SurfaceKind::Artificial, {}}; }

  // "water", "vegetation", "ground:<kind>" or "artificial".
  std::string to_string() const;
  static Surface parse(std::string_view text);

  friend bool operator==(const Surface&, const Surface&) = default;
};

enum class TerrainClass : std::uint8_t { Plain, CommonLand, Water, Artificial, AroundArtificial };

std::string_view to_string(TerrainClass c);

// One block change. Block classes: "air", "ground:<kind>" and structure
// classes ("road", "bridge", "wall_base", "building:<id>", ...).
struct Edit {
  int x = 0;
  int y = 0;
  int z = 0;
  std::string block;

  friend bool operator==(const Edit&, const Edit&) = default;
};

bool is_structure_block(std::string_view block);

// Column-based voxel world: one altitude per (x, z) column, where the
// altitude is the y of the first air block above the column. Water columns
// store the height above the water surface.
//
// Every state change that should survive replay goes through apply(), which
// appends to the edit log. Mutators without an edit (set_*, mark_artificial)
// exist for world construction and scratch overlays.
class VoxelWorld {
 public:
  VoxelWorld() = default;
  VoxelWorld(int width, int length, int altitude = 0, Surface surface = {});

  int width() const { return width_; }
  int length() const { return length_; }
  Rect bounds() const { return {0, 0, width_, length_}; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.z >= 0 && c.x < width_ && c.z < length_; }

  int altitude(Cell c) const { return altitude_[index(c)]; }
  const Surface& surface(Cell c) const { return surface_[index(c)]; }
  int canopy(Cell c) const { return canopy_[index(c)]; }
  bool artificial(Cell c) const { return artificial_[index(c)] != 0; }

  void set_altitude(Cell c, int altitude);
  void set_surface(Cell c, Surface surface) { surface_[index(c)] = std::move(surface); }
  // Height of vegetation above the ground; included in altitude().
  void set_canopy(Cell c, int canopy);
  void mark_artificial(Cell c) { artificial_[index(c)] = 1; }

  // Applies one block change and appends it to the edit log.
  void apply(const Edit& edit);
  const std::vector<Edit>& edits() const { return edits_; }
  void clear_edits() { edits_.clear(); }
  // Appends to the log without touching the grids (loading saved history).
  void restore_edit(Edit edit) { edits_.push_back(std::move(edit)); }

  // Throws BoundsError when `c` lies outside the world.
  void check_bounds(Cell c) const;

  friend bool operator==(const VoxelWorld&, const VoxelWorld&) = default;

 private:
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.x) * static_cast<std::size_t>(length_) +
           static_cast<std::size_t>(c.z);
  }

  int width_ = 0;
  int length_ = 0;
  std::vector<int> altitude_;
  std::vector<Surface> surface_;
  std::vector<int> canopy_;
  std::vector<std::uint8_t> artificial_;
  std::vector<Edit> edits_;
};

// Reapplies `edits` on top of `original`.
VoxelWorld replay(const VoxelWorld& original, std::span<const Edit> edits);

// Per-class placement costs. Common land costs its gradient.
struct TerrainCosts {
  std::int64_t water = 10;
  std::int64_t plain = 0;
  std::int64_t artificial = 10000;
  std::int64_t around_artificial = 50;
  // Chebyshev radius of the "around artificial" band.
  int around_radius = 1;
};

bool is_artificial_surface(const VoxelWorld& world, Cell c);

TerrainClass classify_terrain(const VoxelWorld& world, Cell c, int around_radius = 1);

// Sum of |Δaltitude| over the existing 4-neighbours.
int gradient(const VoxelWorld& world, Cell c);

std::int64_t cell_cost(const VoxelWorld& world, Cell c, const TerrainCosts& costs = {});

// Fraction of cells classified Plain.
double plain_ratio(const VoxelWorld& world, int around_radius = 1);

struct TerrainGenStats {
  double achieved_plain_ratio = 0.0;
  int passes = 0;
  bool target_reached = false;
};

// Deterministic synthetic terrain: layered value noise, a water body
// covering `water_fraction` of the map, scattered trees, then smoothing
// passes until the plain ratio lands within ±0.05 of the target or 100 passes
// elapse.
VoxelWorld generate_terrain(std::uint64_t seed, int size, double target_plain_ratio,
                            double water_fraction, TerrainGenStats* stats = nullptr);

// Most common ground kind among NaturalGround cells ("grass_block" when there
// are none). Ties go to the lexicographically smallest kind.
std::string modal_ground(const VoxelWorld& world);

std::string world_to_json(const VoxelWorld& world);
VoxelWorld world_from_json(std::string_view text);
void save_world(const VoxelWorld& world, const std::filesystem::path& path);
VoxelWorld load_world(const std::filesystem::path& path);

}  // namespace citygen
