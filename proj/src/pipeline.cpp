#include "citygen/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "citygen/rng.hpp"

namespace citygen {

using nlohmann::json;

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Heuristic:
      return "heuristic";
    case Algorithm::Evolve:
      return "evolve";
    case Algorithm::Random:
      return "random";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "heuristic") return Algorithm::Heuristic;
  if (name == "evolve") return Algorithm::Evolve;
  if (name == "random") return Algorithm::Random;
  throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected heuristic, evolve or random)");
}

namespace {

template <typename T>
void read(const json& obj, const char* key, T& target, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    target = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: field '" + where + "." + key + "' has the wrong type");
  }
}

const json* section(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) return nullptr;
  if (!it->is_object()) throw ConfigError(std::string("config: '") + key + "' must be an object");
  return &*it;
}

}  // namespace

PipelineConfig pipeline_config_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");

  PipelineConfig cfg;
  if (const json* world = section(doc, "world")) {
    if (world->contains("file")) {
      std::string file;
      read(*world, "file", file, "world");
      cfg.world_file = file;
    }
    if (const json* gen = section(*world, "generate")) {
      read(*gen, "seed", cfg.generated.seed, "world.generate");
      read(*gen, "size", cfg.generated.size, "world.generate");
      read(*gen, "plain_ratio", cfg.generated.plain_ratio, "world.generate");
      read(*gen, "water_fraction", cfg.generated.water_fraction, "world.generate");
    }
  }
  try {
    if (doc.contains("catalog")) cfg.catalog = catalog_from_json(doc["catalog"].dump());
    if (doc.contains("cost_model")) cfg.model = cost_model_from_json(doc["cost_model"].dump());
  } catch (const ParseError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  read(doc, "buildlist", cfg.buildlist, "");
  if (doc.contains("algorithm")) {
    std::string name;
    read(doc, "algorithm", name, "");
    cfg.algorithm = parse_algorithm(name);
  }
  if (const json* h = section(doc, "heuristic")) {
    read(*h, "nb", cfg.heuristic.nb, "heuristic");
    read(*h, "max_try", cfg.heuristic.max_try, "heuristic");
    read(*h, "max_evaluations", cfg.heuristic.max_evaluations, "heuristic");
  }
  if (const json* e = section(doc, "evolve")) {
    read(*e, "pop_size", cfg.evolve.pop_size, "evolve");
    read(*e, "generations", cfg.evolve.generations, "evolve");
    read(*e, "pmut", cfg.evolve.pmut, "evolve");
  }
  if (const json* r = section(doc, "random")) read(*r, "samples", cfg.random.samples, "random");
  if (const json* r = section(doc, "reshape")) {
    read(*r, "until_fixpoint", cfg.reshape.until_fixpoint, "reshape");
    read(*r, "max_passes", cfg.reshape.max_passes, "reshape");
  }
  if (const json* r = section(doc, "roads")) {
    read(*r, "altitude_weight", cfg.roads.altitude_weight, "roads");
    read(*r, "water_surcharge", cfg.roads.water_surcharge, "roads");
  }
  if (const json* l = section(doc, "lighting")) {
    if (l->contains("k") && !(*l)["k"].is_null()) {
      int k = 0;
      read(*l, "k", k, "lighting");
      cfg.lighting.k = k;
    }
    read(*l, "max_iter", cfg.lighting.max_iter, "lighting");
    read(*l, "search_radius", cfg.lighting.search_radius, "lighting");
  }
  if (const json* w = section(doc, "wall")) {
    read(*w, "ring_width", cfg.wall.ring_width, "wall");
    read(*w, "plane_clearance", cfg.wall.plane_clearance, "wall");
    read(*w, "fixture_interval", cfg.wall.fixture_interval, "wall");
    read(*w, "tower_size", cfg.wall.tower_size, "wall");
  }
  read(doc, "seed", cfg.seed, "");
  if (const json* out = section(doc, "output")) {
    for (auto [key, target] : {std::pair{"world", &cfg.out_world}, std::pair{"report", &cfg.out_report},
                               std::pair{"trace", &cfg.out_trace}}) {
      if (out->contains(key)) {
        std::string path;
        read(*out, key, path, "output");
        *target = path;
      }
    }
  }
  return cfg;
}

void validate(const PipelineConfig& config) {
  validate_buildlist(config.catalog, config.buildlist);
  validate(config.wall);
  if (config.heuristic.nb < 1 || config.heuristic.max_try < 1) {
    throw ConfigError("heuristic: nb and max_try must be >= 1");
  }
  if (config.evolve.pop_size < 2) throw ConfigError("evolve: pop_size must be >= 2");
  if (config.evolve.generations < 0) throw ConfigError("evolve: generations must be >= 0");
  if (config.evolve.pmut < 0.0 || config.evolve.pmut > 1.0) throw ConfigError("evolve: pmut must lie in [0, 1]");
  if (config.random.samples < 1) throw ConfigError("random: samples must be >= 1");
  if (config.lighting.k && *config.lighting.k < 0) throw ConfigError("lighting: k must be >= 0");
  if (!config.world_file) {
    const GeneratedWorld& g = config.generated;
    if (g.size < 16) throw ConfigError("world.generate: size must be at least 16");
    if (g.plain_ratio < 0.0 || g.plain_ratio > 1.0) throw ConfigError("world.generate: plain_ratio must lie in [0, 1]");
    if (g.water_fraction < 0.0 || g.water_fraction >= 1.0) {
      throw ConfigError("world.generate: water_fraction must lie in [0, 1)");
    }
    inner_city_bounds(g.size, g.size, config.wall);
  }
}

VoxelWorld load_input_world(const PipelineConfig& config) {
  if (config.world_file) return load_world(*config.world_file);
  const GeneratedWorld& g = config.generated;
  return generate_terrain(g.seed, g.size, g.plain_ratio, g.water_fraction);
}

namespace {

class StageRunner {
 public:
  StageRunner(VoxelWorld& world, PipelineReport& report) : world_(world), report_(report) {}

  template <typename Fn>
  void run(const std::string& name, Fn&& fn) {
    const std::size_t before = world_.edits().size();
    const auto start = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const std::exception& e) {
      throw PipelineError(name, e.what(), world_);
    }
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    report_.stages.push_back({name, world_.edits().size() - before, elapsed.count()});
  }

 private:
  VoxelWorld& world_;
  PipelineReport& report_;
};

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, const VoxelWorld& input) {
  validate(config);
  PipelineResult result{input, {}};
  VoxelWorld& world = result.world;
  PipelineReport& report = result.report;
  StageRunner stages(world, report);

  stages.run("wall_bounds", [&] { report.inner = inner_city_bounds(world, config.wall); });
  stages.run("vegetation_clearing", [&] { report.vegetation_removed = clear_vegetation(world); });
  stages.run("terrain_reshaping", [&] { report.reshape = reshape(world, config.reshape); });

  stages.run("building_layout", [&] {
    const LayoutProblem problem{world, config.catalog, config.model, report.inner};
    const std::uint64_t seed = mix_seed(config.seed, 1);
    switch (config.algorithm) {
      case Algorithm::Heuristic:
        report.layout = heuristic_layout(problem, config.buildlist, config.heuristic, seed);
        break;
      case Algorithm::Evolve:
        report.layout = evolve_layout(problem, config.buildlist, config.evolve, seed);
        break;
      case Algorithm::Random:
        report.layout = random_layout(problem, config.buildlist, config.random, seed);
        break;
    }
    for (const Placement& p : report.layout.layout.placements) {
      const Rect fp = config.catalog.at(p.building_id).footprint_at(p.anchor);
      const std::string block = "building:" + p.building_id;
      for (int x = fp.x; x < fp.x_end(); ++x) {
        for (int z = fp.z; z < fp.z_end(); ++z) world.apply({x, world.altitude({x, z}) - 1, z, block});
      }
    }
  });

  stages.run("route_planning", [&] {
    const Gates gates = find_gates(world);
    const auto entrances = tower_entrances(world, config.wall);
    report.roads = plan_roads(world, config.catalog, report.layout.layout, gates, entrances, config.roads);
    report.bridges = build_bridges(world, report.roads);
    for (const std::string& failure : report.roads.failures) report.warnings.push_back("road " + failure);
  });

  stages.run("streetlight_placement", [&] {
    report.lights = place_streetlights(world, config.catalog, report.layout.layout, report.roads,
                                       report.inner, config.lighting, mix_seed(config.seed, 2));
    for (const std::string& w : report.lights.warnings) report.warnings.push_back("streetlight: " + w);
  });

  stages.run("wall_construction", [&] {
    CellMask passages(world.width(), world.length());
    for (const RoadSegment& seg : report.roads.segments) {
      for (Cell c : seg.cells) {
        if (in_ring(world, config.wall, c)) passages.set(c);
      }
    }
    report.wall = build_wall(world, config.wall, &passages);
  });

  return result;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  validate(config);
  VoxelWorld input;
  try {
    input = load_input_world(config);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError("world_input", e.what(), VoxelWorld{});
  }
  return run_pipeline(config, input);
}

std::string report_to_json(const PipelineReport& report, const PipelineConfig& config) {
  json stages = json::array();
  for (const StageReport& s : report.stages) {
    stages.push_back({{"name", s.name}, {"edits", s.edits}, {"milliseconds", s.milliseconds}});
  }
  json placements = json::array();
  for (const Placement& p : report.layout.layout.placements) {
    placements.push_back({{"building", p.building_id}, {"x", p.anchor.x}, {"z", p.anchor.z}});
  }
  json segments = json::array();
  for (const RoadSegment& seg : report.roads.segments) {
    segments.push_back({{"from", seg.from}, {"to", seg.to}, {"length", seg.cells.size()}, {"cost", seg.cost}});
  }
  json lights = json::array();
  for (Cell c : report.lights.lights) lights.push_back({c.x, c.z});
  json gates = json::array();
  for (Cell c : report.roads.gates) gates.push_back({c.x, c.z});

  const json doc = {
      {"algorithm", to_string(config.algorithm)},
      {"seed", config.seed},
      {"inner_city", {{"x", report.inner.x}, {"z", report.inner.z}, {"width", report.inner.width},
                      {"length", report.inner.length}}},
      {"stages", stages},
      {"vegetation_removed", report.vegetation_removed},
      {"reshape", {{"lowered", report.reshape.lowered}, {"raised", report.reshape.raised},
                   {"passes", report.reshape.passes}, {"mean_altitude", report.reshape.mean_altitude}}},
      {"layout", {{"score", report.layout.layout.total_score}, {"evaluations", report.layout.evaluations},
                  {"placements", placements}}},
      {"roads", {{"gates", gates}, {"segments", segments}, {"failures", report.roads.failures},
                 {"road_cells", report.bridges.roads}, {"bridge_cells", report.bridges.bridges}}},
      {"streetlights", {{"k", report.lights.k}, {"cells", lights}}},
      {"wall", {{"plane_height", report.wall.plane_height}, {"torches", report.wall.torches},
                {"cannons", report.wall.cannons}, {"passages", report.wall.passages}}},
      {"warnings", report.warnings},
  };
  return doc.dump(2);
}

}  // namespace citygen
