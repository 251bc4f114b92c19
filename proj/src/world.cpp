#include "citygen/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "citygen/errors.hpp"
#include "citygen/rng.hpp"

namespace citygen {

namespace {

constexpr int kWorldFormatVersion = 1;
constexpr std::string_view kGroundPrefix = "ground:";

constexpr Cell kNeighbours4[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

}  // namespace

std::string Surface::to_string() const {
  switch (kind) {
    case SurfaceKind::Water:
      return "water";
    case SurfaceKind::Vegetation:
      return "vegetation";
    case SurfaceKind::Artificial:
      return "artificial";
    case SurfaceKind::NaturalGround:
      break;
  }
  return std::string(kGroundPrefix) + ground;
}

Surface Surface::parse(std::string_view text) {
  if (text == "water") return water();
  if (text == "vegetation") return vegetation();
  if (text == "artificial") return artificial();
  if (text.starts_with(kGroundPrefix) && text.size() > kGroundPrefix.size()) {
    return natural(std::string(text.substr(kGroundPrefix.size())));
  }
  throw ParseError("unknown surface class '" + std::string(text) + "'");
}

std::string_view to_string(TerrainClass c) {
  switch (c) {
    case TerrainClass::Plain:
      return "plain";
    case TerrainClass::CommonLand:
      return "common_land";
    case TerrainClass::Water:
      return "water";
    case TerrainClass::Artificial:
      return "artificial";
    case TerrainClass::AroundArtificial:
      return "around_artificial";
  }
  return "unknown";
}

bool is_structure_block(std::string_view block) {
  return block != "air" && !block.starts_with(kGroundPrefix);
}

VoxelWorld::VoxelWorld(int width, int length, int altitude, Surface surface)
    : width_(width), length_(length) {
  if (width < 1 || length < 1) throw ConfigError("world dimensions must be positive");
  if (altitude < 0) throw ConfigError("altitude must be non-negative");
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(length);
  altitude_.assign(n, altitude);
  surface_.assign(n, surface);
  canopy_.assign(n, 0);
  artificial_.assign(n, 0);
}

void VoxelWorld::set_altitude(Cell c, int altitude) {
  if (altitude < 0) throw ConfigError("altitude must be non-negative");
  altitude_[index(c)] = altitude;
}

void VoxelWorld::set_canopy(Cell c, int canopy) {
  if (canopy < 0) throw ConfigError("canopy must be non-negative");
  canopy_[index(c)] = canopy;
}

void VoxelWorld::check_bounds(Cell c) const {
  if (!in_bounds(c)) {
    throw BoundsError("cell (" + std::to_string(c.x) + ", " + std::to_string(c.z) +
                      ") outside " + std::to_string(width_) + "x" + std::to_string(length_) +
                      " world");
  }
}

void VoxelWorld::apply(const Edit& edit) {
  const Cell c{edit.x, edit.z};
  check_bounds(c);
  const std::size_t i = index(c);
  int& top = altitude_[i];
  if (edit.block == "air") {
    if (edit.y >= 0 && edit.y < top) {
      const int removed = top - edit.y;
      top = edit.y;
      canopy_[i] = std::max(0, canopy_[i] - removed);
    }
  } else if (edit.block.starts_with(kGroundPrefix)) {
    if (edit.y >= top - 1) {
      top = std::max(top, edit.y + 1);
      surface_[i] = Surface::natural(edit.block.substr(kGroundPrefix.size()));
      canopy_[i] = 0;
    }
  } else {
    artificial_[i] = 1;
    if (edit.y >= top) top = edit.y + 1;
  }
  edits_.push_back(edit);
}

VoxelWorld replay(const VoxelWorld& original, std::span<const Edit> edits) {
  VoxelWorld world = original;
  for (const Edit& e : edits) world.apply(e);
  return world;
}

bool is_artificial_surface(const VoxelWorld& world, Cell c) {
  return world.artificial(c) || world.surface(c).kind == SurfaceKind::Artificial;
}

TerrainClass classify_terrain(const VoxelWorld& world, Cell c, int around_radius) {
  world.check_bounds(c);
  if (is_artificial_surface(world, c)) return TerrainClass::Artificial;
  const int x0 = std::max(0, c.x - around_radius);
  const int x1 = std::min(world.width() - 1, c.x + around_radius);
  const int z0 = std::max(0, c.z - around_radius);
  const int z1 = std::min(world.length() - 1, c.z + around_radius);
  for (int x = x0; x <= x1; ++x) {
    for (int z = z0; z <= z1; ++z) {
      if (is_artificial_surface(world, {x, z})) return TerrainClass::AroundArtificial;
    }
  }
  if (world.surface(c).kind == SurfaceKind::Water) return TerrainClass::Water;
  const int a = world.altitude(c);
  for (Cell d : kNeighbours4) {
    const Cell n{c.x + d.x, c.z + d.z};
    if (world.in_bounds(n) && world.altitude(n) != a) return TerrainClass::CommonLand;
  }
  return TerrainClass::Plain;
}

int gradient(const VoxelWorld& world, Cell c) {
  world.check_bounds(c);
  const int a = world.altitude(c);
  int sum = 0;
  for (Cell d : kNeighbours4) {
    const Cell n{c.x + d.x, c.z + d.z};
    if (world.in_bounds(n)) sum += std::abs(a - world.altitude(n));
  }
  return sum;
}

std::int64_t cell_cost(const VoxelWorld& world, Cell c, const TerrainCosts& costs) {
  switch (classify_terrain(world, c, costs.around_radius)) {
    case TerrainClass::Water:
      return costs.water;
    case TerrainClass::Plain:
      return costs.plain;
    case TerrainClass::Artificial:
      return costs.artificial;
    case TerrainClass::AroundArtificial:
      return costs.around_artificial;
    case TerrainClass::CommonLand:
      break;
  }
  return gradient(world, c);
}

double plain_ratio(const VoxelWorld& world, int around_radius) {
  std::size_t plain = 0;
  for (int x = 0; x < world.width(); ++x) {
    for (int z = 0; z < world.length(); ++z) {
      if (classify_terrain(world, {x, z}, around_radius) == TerrainClass::Plain) ++plain;
    }
  }
  return static_cast<double>(plain) /
         (static_cast<double>(world.width()) * static_cast<double>(world.length()));
}

std::string modal_ground(const VoxelWorld& world) {
  std::map<std::string, std::size_t> counts;
  for (int x = 0; x < world.width(); ++x) {
    for (int z = 0; z < world.length(); ++z) {
      const Surface& s = world.surface({x, z});
      if (s.kind == SurfaceKind::NaturalGround) ++counts[s.ground];
    }
  }
  std::string best = "grass_block";
  std::size_t best_count = 0;
  for (const auto& [kind, count] : counts) {
    if (count > best_count) {
      best = kind;
      best_count = count;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Terrain generation

namespace {

constexpr int kMaxPasses = 100;
constexpr double kRatioTolerance = 0.05;
constexpr int kBaseAltitude = 60;
constexpr double kTreeDensity = 0.005;

using Field = std::vector<double>;

// Bilinear value noise summed over four octaves, normalized to [0, 1].
Field layered_noise(Rng& rng, int size) {
  Field field(static_cast<std::size_t>(size) * size, 0.0);
  double amplitude = 1.0;
  for (int spacing = 32; spacing >= 4; spacing /= 2) {
    const int lattice = size / spacing + 2;
    std::vector<double> values(static_cast<std::size_t>(lattice) * lattice);
    for (double& v : values) v = rng.uniform01();
    for (int x = 0; x < size; ++x) {
      const int gx = x / spacing;
      const double tx = static_cast<double>(x % spacing) / spacing;
      for (int z = 0; z < size; ++z) {
        const int gz = z / spacing;
        const double tz = static_cast<double>(z % spacing) / spacing;
        auto at = [&](int i, int j) { return values[static_cast<std::size_t>(i) * lattice + j]; };
        const double top = at(gx, gz) * (1 - tx) + at(gx + 1, gz) * tx;
        const double bottom = at(gx, gz + 1) * (1 - tx) + at(gx + 1, gz + 1) * tx;
        field[static_cast<std::size_t>(x) * size + z] += amplitude * (top * (1 - tz) + bottom * tz);
      }
    }
    amplitude *= 0.5;
  }
  const auto [lo, hi] = std::minmax_element(field.begin(), field.end());
  const double min = *lo;
  const double span = std::max(1e-12, *hi - *lo);
  for (double& v : field) v = (v - min) / span;
  return field;
}

// Blends each value halfway toward its 3x3 neighbourhood mean.
void smooth(Field& field, int size) {
  Field next(field.size());
  for (int x = 0; x < size; ++x) {
    for (int z = 0; z < size; ++z) {
      double sum = 0.0;
      int count = 0;
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dz = -1; dz <= 1; ++dz) {
          const int nx = x + dx;
          const int nz = z + dz;
          if (nx < 0 || nz < 0 || nx >= size || nz >= size) continue;
          sum += field[static_cast<std::size_t>(nx) * size + nz];
          ++count;
        }
      }
      const std::size_t i = static_cast<std::size_t>(x) * size + z;
      next[i] = 0.5 * field[i] + 0.5 * sum / count;
    }
  }
  field.swap(next);
}

struct TerrainLayers {
  std::vector<std::uint8_t> water;
  std::vector<std::uint8_t> vegetation;
  std::vector<int> trees;  // canopy height, 0 for none
};

VoxelWorld realize(const Field& field, const TerrainLayers& layers, int size, double relief) {
  VoxelWorld world(size, size, kBaseAltitude);
  // Water surface sits at the highest water cell's level so the body is flat.
  int sea = kBaseAltitude;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (layers.water[i]) sea = std::max(sea, kBaseAltitude + static_cast<int>(std::lround(field[i] * relief)));
  }
  for (int x = 0; x < size; ++x) {
    for (int z = 0; z < size; ++z) {
      const std::size_t i = static_cast<std::size_t>(x) * size + z;
      const Cell c{x, z};
      if (layers.water[i]) {
        world.set_altitude(c, sea);
        world.set_surface(c, Surface::water());
        continue;
      }
      const int ground = std::max(sea, kBaseAltitude + static_cast<int>(std::lround(field[i] * relief)));
      if (layers.trees[i] > 0) {
        world.set_surface(c, Surface::vegetation());
        world.set_canopy(c, layers.trees[i]);
        world.set_altitude(c, ground + layers.trees[i]);
      } else {
        world.set_altitude(c, ground);
        if (layers.vegetation[i]) {
          world.set_surface(c, Surface::vegetation());
        } else if (ground > sea + static_cast<int>(0.8 * relief) && relief >= 5) {
          world.set_surface(c, Surface::natural("stone"));
        } else {
          world.set_surface(c, Surface::natural("grass_block"));
        }
      }
    }
  }
  // Beaches: land touching water becomes sand.
  for (int x = 0; x < size; ++x) {
    for (int z = 0; z < size; ++z) {
      const Cell c{x, z};
      if (world.surface(c).kind != SurfaceKind::NaturalGround) continue;
      for (Cell d : kNeighbours4) {
        const Cell n{x + d.x, z + d.z};
        if (world.in_bounds(n) && world.surface(n).kind == SurfaceKind::Water) {
          world.set_surface(c, Surface::natural("sand"));
          break;
        }
      }
    }
  }
  return world;
}

}  // namespace

VoxelWorld generate_terrain(std::uint64_t seed, int size, double target_plain_ratio,
                            double water_fraction, TerrainGenStats* stats) {
  if (size < 16) throw ConfigError("generated world size must be at least 16");
  if (target_plain_ratio < 0.0 || target_plain_ratio > 1.0) {
    throw ConfigError("target plain ratio must lie in [0, 1]");
  }
  if (water_fraction < 0.0 || water_fraction >= 1.0) {
    throw ConfigError("water fraction must lie in [0, 1)");
  }

  Rng rng(seed);
  Field field = layered_noise(rng, size);
  const Field moisture = layered_noise(rng, size);
  const std::size_t n = field.size();

  TerrainLayers layers;
  layers.water.assign(n, 0);
  layers.vegetation.assign(n, 0);
  layers.trees.assign(n, 0);

  // Lowest cells by the initial field become the water body.
  const auto water_cells = static_cast<std::size_t>(std::floor(water_fraction * static_cast<double>(n)));
  if (water_cells > 0) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return field[a] < field[b]; });
    for (std::size_t k = 0; k < water_cells; ++k) layers.water[order[k]] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (layers.water[i]) continue;
    if (moisture[i] > 0.7) layers.vegetation[i] = 1;
    if (rng.uniform01() < kTreeDensity) layers.trees[i] = 4 + static_cast<int>(rng.below(3));
  }

  // Each pass nudges the vertical relief toward the target band; the step
  // shrinks whenever the ratio crosses the target so the search settles.
  double relief = 4.0 + 0.4 * size * (1.0 - target_plain_ratio);
  double step = 1.6;
  int last_direction = 0;
  VoxelWorld world;
  double ratio = 0.0;
  int passes = 0;
  bool reached = false;
  while (true) {
    world = realize(field, layers, size, relief);
    ratio = plain_ratio(world);
    if (std::abs(ratio - target_plain_ratio) <= kRatioTolerance) {
      reached = true;
      break;
    }
    if (passes >= kMaxPasses) break;
    ++passes;
    const int direction = ratio < target_plain_ratio ? -1 : 1;
    if (last_direction != 0 && direction != last_direction) step = std::max(1.02, std::sqrt(step));
    last_direction = direction;
    if (direction < 0) {
      smooth(field, size);
      relief /= step;
    } else {
      relief *= step;
    }
  }
  if (stats != nullptr) *stats = {ratio, passes, reached};
  return world;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

using nlohmann::json;

const json& require(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) throw ParseError(std::string("world file: missing field '") + field + "'");
  return *it;
}

int require_int(const json& doc, const char* field) {
  const json& v = require(doc, field);
  if (!v.is_number_integer()) {
    throw ParseError(std::string("world file: field '") + field + "' must be an integer");
  }
  return v.get<int>();
}

template <typename Fn>
void read_grid(const json& doc, const char* field, int width, int length, bool optional, Fn&& fn) {
  auto it = doc.find(field);
  if (it == doc.end()) {
    if (optional) return;
    throw ParseError(std::string("world file: missing field '") + field + "'");
  }
  const json& grid = *it;
  if (!grid.is_array() || static_cast<int>(grid.size()) != width) {
    throw ParseError(std::string("world file: field '") + field + "' must have " +
                     std::to_string(width) + " rows");
  }
  for (int x = 0; x < width; ++x) {
    const json& row = grid[x];
    if (!row.is_array() || static_cast<int>(row.size()) != length) {
      throw ParseError(std::string("world file: field '") + field + "' row " + std::to_string(x) +
                       " must have " + std::to_string(length) + " entries");
    }
    for (int z = 0; z < length; ++z) {
      try {
        fn(Cell{x, z}, row[z]);
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception& e) {
        throw ParseError(std::string("world file: field '") + field + "' at [" + std::to_string(x) +
                         "][" + std::to_string(z) + "]: " + e.what());
      }
    }
  }
}

template <typename Fn>
void write_grid(std::ostream& out, const char* field, const VoxelWorld& world, Fn&& fn) {
  out << "  \"" << field << "\": [\n";
  for (int x = 0; x < world.width(); ++x) {
    json row = json::array();
    for (int z = 0; z < world.length(); ++z) row.push_back(fn(Cell{x, z}));
    out << "    " << row.dump() << (x + 1 < world.width() ? ",\n" : "\n");
  }
  out << "  ],\n";
}

}  // namespace

std::string world_to_json(const VoxelWorld& world) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"version\": " << kWorldFormatVersion << ",\n";
  out << "  \"width\": " << world.width() << ",\n";
  out << "  \"length\": " << world.length() << ",\n";
  write_grid(out, "altitude", world, [&](Cell c) { return json(world.altitude(c)); });
  write_grid(out, "surface", world, [&](Cell c) { return json(world.surface(c).to_string()); });
  write_grid(out, "canopy", world, [&](Cell c) { return json(world.canopy(c)); });
  write_grid(out, "artificial", world, [&](Cell c) { return json(world.artificial(c) ? 1 : 0); });
  out << "  \"edits\": [";
  const auto& edits = world.edits();
  for (std::size_t i = 0; i < edits.size(); ++i) {
    const Edit& e = edits[i];
    json j = {{"x", e.x}, {"y", e.y}, {"z", e.z}, {"block", e.block}};
    out << (i == 0 ? "\n    " : ",\n    ") << j.dump();
  }
  out << (edits.empty() ? "]\n" : "\n  ]\n");
  out << "}\n";
  return out.str();
}

VoxelWorld world_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("world file: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("world file: top level must be an object");
  const int version = require_int(doc, "version");
  if (version != kWorldFormatVersion) {
    throw UnsupportedVersionError("world file: unsupported version " + std::to_string(version) +
                                  " (expected " + std::to_string(kWorldFormatVersion) + ")");
  }
  const int width = require_int(doc, "width");
  const int length = require_int(doc, "length");
  if (width < 1 || length < 1) throw ParseError("world file: field 'width'/'length' must be positive");

  VoxelWorld world(width, length);
  read_grid(doc, "altitude", width, length, false, [&](Cell c, const json& v) {
    if (!v.is_number_integer() || v.get<int>() < 0) throw ParseError(
        "world file: field 'altitude' at [" + std::to_string(c.x) + "][" + std::to_string(c.z) +
        "] must be a non-negative integer");
    world.set_altitude(c, v.get<int>());
  });
  read_grid(doc, "surface", width, length, false, [&](Cell c, const json& v) {
    world.set_surface(c, Surface::parse(v.get<std::string>()));
  });
  read_grid(doc, "canopy", width, length, true, [&](Cell c, const json& v) {
    world.set_canopy(c, v.get<int>());
  });
  read_grid(doc, "artificial", width, length, false, [&](Cell c, const json& v) {
    const int flag = v.get<int>();
    if (flag != 0 && flag != 1) throw ParseError("world file: field 'artificial' entries must be 0 or 1");
    if (flag == 1) world.mark_artificial(c);
  });

  const json& edits = require(doc, "edits");
  if (!edits.is_array()) throw ParseError("world file: field 'edits' must be an array");
  // Edits are history: the grids already hold their effect, so they are
  // restored into the log without reapplying.
  std::vector<Edit> log;
  log.reserve(edits.size());
  for (std::size_t i = 0; i < edits.size(); ++i) {
    const json& e = edits[i];
    try {
      log.push_back({e.at("x").get<int>(), e.at("y").get<int>(), e.at("z").get<int>(),
                     e.at("block").get<std::string>()});
    } catch (const std::exception& ex) {
      throw ParseError("world file: field 'edits' entry " + std::to_string(i) + ": " + ex.what());
    }
    if (!world.in_bounds({log.back().x, log.back().z})) {
      throw ParseError("world file: field 'edits' entry " + std::to_string(i) + " out of bounds");
    }
  }
  for (Edit& e : log) world.restore_edit(std::move(e));
  return world;
}

void save_world(const VoxelWorld& world, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << world_to_json(world);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

VoxelWorld load_world(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return world_from_json(buffer.str());
}

}  // namespace citygen
