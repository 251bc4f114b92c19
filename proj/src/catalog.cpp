#include "citygen/catalog.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "citygen/errors.hpp"

namespace citygen {

using nlohmann::json;

Catalog::Catalog(std::vector<BuildingSpec> specs) : specs_(std::move(specs)) {
  int monuments = 0;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const BuildingSpec& s = specs_[i];
    if (s.id.empty()) throw ConfigError("catalog: building with empty id");
    if (s.footprint_width < 1 || s.footprint_length < 1) {
      throw ConfigError("catalog: building '" + s.id + "' needs a footprint of at least 1x1");
    }
    if (s.reward < 0) throw ConfigError("catalog: building '" + s.id + "' has a negative reward");
    if (s.is_monument) ++monuments;
    for (std::size_t j = 0; j < i; ++j) {
      if (specs_[j].id == s.id) throw ConfigError("catalog: duplicate building id '" + s.id + "'");
    }
  }
  if (monuments > 1) throw ConfigError("catalog: at most one monument is allowed");
}

const BuildingSpec* Catalog::find(std::string_view id) const {
  auto it = std::find_if(specs_.begin(), specs_.end(), [&](const auto& s) { return s.id == id; });
  return it == specs_.end() ? nullptr : &*it;
}

const BuildingSpec* Catalog::find_by_name(std::string_view name) const {
  auto it = std::find_if(specs_.begin(), specs_.end(), [&](const auto& s) { return s.name == name; });
  return it == specs_.end() ? nullptr : &*it;
}

const BuildingSpec& Catalog::at(std::string_view id) const {
  if (const BuildingSpec* s = find(id)) return *s;
  throw ConfigError("unknown building id '" + std::string(id) + "'");
}

Catalog default_catalog() {
  return Catalog({
      {"dorm", "Dorm", 17, 29, 493, false, false},
      {"church", "Church", 16, 26, 416, false, false},
      {"munition_factory", "Munition Factory", 7, 17, 119, false, true},
      {"monument", "Monument", 25, 25, 625, true, false},
      {"shop", "Shop", 13, 14, 182, false, false},
      {"him_statue", "HIM Statue", 5, 7, 35, false, false},
      {"enderman_statue", "Enderman Statue", 5, 5, 25, false, false},
      {"trampoline", "Trampoline", 5, 7, 35, false, false},
      {"enchanting_room", "Enchanting Room", 11, 11, 121, false, false},
  });
}

std::int64_t building_cost(const VoxelWorld& world, const BuildingSpec& spec, Cell anchor,
                           const CostModel& model) {
  const Rect fp = spec.footprint_at(anchor);
  if (!world.bounds().contains(fp)) {
    throw IllegalPlacementError("footprint of '" + spec.id + "' at (" + std::to_string(anchor.x) +
                                ", " + std::to_string(anchor.z) + ") leaves the world");
  }
  std::int64_t total = 0;
  for (int x = fp.x; x < fp.x_end(); ++x) {
    for (int z = fp.z; z < fp.z_end(); ++z) total += cell_cost(world, {x, z}, model.terrain);
  }
  return total;
}

std::int64_t monument_bonus(const Rect& inner, const BuildingSpec& spec, Cell anchor,
                            const CostModel& model) {
  if (!spec.is_monument) return 0;
  const double cx = anchor.x + spec.footprint_width / 2.0;
  const double cz = anchor.z + spec.footprint_length / 2.0;
  const double centre_x = inner.x + inner.width / 2.0;
  const double centre_z = inner.z + inner.length / 2.0;
  const double d_max = std::hypot(inner.width / 2.0, inner.length / 2.0);
  if (d_max <= 0.0) return model.monument_bonus_max;
  const double d = std::hypot(cx - centre_x, cz - centre_z);
  const double scaled = static_cast<double>(model.monument_bonus_max) * (1.0 - d / d_max);
  // Absorb rounding so exact ratios such as 0.2 do not floor one step low.
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(scaled + 1e-9)));
}

std::int64_t placement_score(const VoxelWorld& world, const BuildingSpec& spec, Cell anchor,
                             const CostModel& model, const Rect& inner) {
  return spec.reward + monument_bonus(inner, spec, anchor, model) -
         building_cost(world, spec, anchor, model);
}

bool legal(const Catalog& catalog, std::span<const Placement> existing, const BuildingSpec& spec,
           Cell anchor, const CostModel& model, const Rect& inner) {
  const Rect fp = spec.footprint_at(anchor);
  if (!inner.contains(fp)) return false;
  for (const Placement& p : existing) {
    const Rect other = catalog.at(p.building_id).footprint_at(p.anchor);
    if (rect_gap(fp, other) < model.min_distance) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

CostField::CostField(const VoxelWorld& world, const TerrainCosts& costs)
    : width_(world.width()), length_(world.length()), costs_(costs) {
  const auto n = static_cast<std::size_t>(width_) * length_;
  base_.resize(n);
  classes_.resize(n);
  prefix_.assign(static_cast<std::size_t>(width_ + 1) * (length_ + 1), 0);
  for (int x = 0; x < width_; ++x) {
    for (int z = 0; z < length_; ++z) {
      const std::size_t i = static_cast<std::size_t>(x) * length_ + z;
      classes_[i] = classify_terrain(world, {x, z}, costs.around_radius);
      base_[i] = cell_cost(world, {x, z}, costs);
    }
  }
  for (int x = 0; x < width_; ++x) {
    for (int z = 0; z < length_; ++z) {
      prefix_[static_cast<std::size_t>(x + 1) * (length_ + 1) + (z + 1)] =
          base_[static_cast<std::size_t>(x) * length_ + z] + prefix(x, z + 1) + prefix(x + 1, z) -
          prefix(x, z);
    }
  }
}

std::int64_t CostField::cost(const Rect& r) const {
  return prefix(r.x_end(), r.z_end()) - prefix(r.x, r.z_end()) - prefix(r.x_end(), r.z) +
         prefix(r.x, r.z);
}

std::int64_t CostField::cost(const Rect& r, std::span<const Rect> overlays) const {
  const int radius = costs_.around_radius;
  const bool touched = std::any_of(overlays.begin(), overlays.end(), [&](const Rect& o) {
    return o.expanded(radius).intersects(r);
  });
  if (!touched) return cost(r);

  std::int64_t total = 0;
  for (int x = r.x; x < r.x_end(); ++x) {
    for (int z = r.z; z < r.z_end(); ++z) {
      const std::size_t i = static_cast<std::size_t>(x) * length_ + z;
      bool inside = false;
      bool near = false;
      for (const Rect& o : overlays) {
        if (o.contains(Cell{x, z})) {
          inside = true;
          break;
        }
        if (o.expanded(radius).contains(Cell{x, z})) near = true;
      }
      if (inside || classes_[i] == TerrainClass::Artificial) {
        total += costs_.artificial;
      } else if (near) {
        total += costs_.around_artificial;
      } else {
        total += base_[i];
      }
    }
  }
  return total;
}

// ---------------------------------------------------------------------------

namespace {

template <typename T>
T field(const json& doc, const char* name, const char* what) {
  auto it = doc.find(name);
  if (it == doc.end()) throw ParseError(std::string(what) + ": missing field '" + name + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string(what) + ": field '" + name + "' has the wrong type");
  }
}

json parse_document(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

}  // namespace

Catalog catalog_from_json(std::string_view text) {
  const json doc = parse_document(text, "catalog");
  if (!doc.is_array()) throw ParseError("catalog: expected a list of buildings");
  std::vector<BuildingSpec> specs;
  for (const json& entry : doc) {
    BuildingSpec s;
    s.id = field<std::string>(entry, "id", "catalog");
    s.name = entry.contains("name") ? field<std::string>(entry, "name", "catalog") : s.id;
    const auto fp = field<std::vector<int>>(entry, "footprint", "catalog");
    if (fp.size() != 2) throw ParseError("catalog: field 'footprint' must be [fw, fl]");
    s.footprint_width = fp[0];
    s.footprint_length = fp[1];
    s.reward = field<std::int64_t>(entry, "reward", "catalog");
    if (entry.contains("roles")) {
      for (const auto& role : field<std::vector<std::string>>(entry, "roles", "catalog")) {
        if (role == "monument") {
          s.is_monument = true;
        } else if (role == "munition_factory") {
          s.is_munition_factory = true;
        } else {
          throw ParseError("catalog: unknown role '" + role + "'");
        }
      }
    }
    specs.push_back(std::move(s));
  }
  return Catalog(std::move(specs));
}

std::string catalog_to_json(const Catalog& catalog) {
  json doc = json::array();
  for (const BuildingSpec& s : catalog.specs()) {
    json roles = json::array();
    if (s.is_monument) roles.push_back("monument");
    if (s.is_munition_factory) roles.push_back("munition_factory");
    doc.push_back({{"id", s.id},
                   {"name", s.name},
                   {"footprint", {s.footprint_width, s.footprint_length}},
                   {"reward", s.reward},
                   {"roles", roles}});
  }
  return doc.dump(2);
}

CostModel cost_model_from_json(std::string_view text) {
  const json doc = parse_document(text, "cost model");
  if (!doc.is_object()) throw ParseError("cost model: expected an object");
  CostModel m;
  auto opt = [&](const char* name, auto& target) {
    if (doc.contains(name)) target = field<std::decay_t<decltype(target)>>(doc, name, "cost model");
  };
  opt("water", m.terrain.water);
  opt("plain", m.terrain.plain);
  opt("artificial", m.terrain.artificial);
  opt("around_artificial", m.terrain.around_artificial);
  opt("around_radius", m.terrain.around_radius);
  opt("monument_bonus_max", m.monument_bonus_max);
  opt("min_distance", m.min_distance);
  if (m.terrain.water < 0 || m.terrain.plain < 0 || m.terrain.artificial < 0 ||
      m.terrain.around_artificial < 0 || m.monument_bonus_max < 0) {
    throw ConfigError("cost model: costs must be non-negative");
  }
  if (m.min_distance < 0) throw ConfigError("cost model: min_distance must be non-negative");
  if (m.terrain.around_radius < 0) throw ConfigError("cost model: around_radius must be non-negative");
  return m;
}

std::string cost_model_to_json(const CostModel& m) {
  return json{{"water", m.terrain.water},
              {"plain", m.terrain.plain},
              {"artificial", m.terrain.artificial},
              {"around_artificial", m.terrain.around_artificial},
              {"around_radius", m.terrain.around_radius},
              {"monument_bonus_max", m.monument_bonus_max},
              {"min_distance", m.min_distance}}
      .dump(2);
}

}  // namespace citygen
