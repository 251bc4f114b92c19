#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citygen/catalog.hpp"
#include "citygen/errors.hpp"
#include "citygen/layout_opt.hpp"
#include "citygen/lighting.hpp"
#include "citygen/routing.hpp"
#include "citygen/terrain_ops.hpp"
#include "citygen/walls.hpp"
#include "citygen/world.hpp"

namespace citygen {

enum class Algorithm { Heuristic, Evolve, Random };

std::string_view to_string(Algorithm a);
// Throws ConfigError for names other than heuristic / evolve / random.
Algorithm parse_algorithm(std::string_view name);

struct GeneratedWorld {
  std::uint64_t seed = 1;
  int size = 100;
  double plain_ratio = 0.606;
  double water_fraction = 0.05;
};

struct PipelineConfig {
  // A world file, or terrain generated from `generated` when empty.
  std::optional<std::string> world_file;
  GeneratedWorld generated;

  Catalog catalog = default_catalog();
  CostModel model;
  BuildList buildlist = {"dorm", "church", "munition_factory", "monument", "shop"};

  Algorithm algorithm = Algorithm::Heuristic;
  HeuristicParams heuristic;
  EvolveParams evolve;
  RandomParams random;

  ReshapeOptions reshape;
  RoadCostParams roads;
  LightingParams lighting;
  WallConfig wall;

  std::uint64_t seed = 0;

  std::optional<std::string> out_world;
  std::optional<std::string> out_report;
  std::optional<std::string> out_trace;
};

// Parses a config document. Missing keys keep their defaults. Throws
// ConfigError (including for malformed JSON).
PipelineConfig pipeline_config_from_json(std::string_view text);

// Checks everything that can be checked before any stage runs.
void validate(const PipelineConfig& config);

struct StageReport {
  std::string name;
  std::size_t edits = 0;
  double milliseconds = 0.0;
};

struct PipelineReport {
  std::vector<StageReport> stages;
  Rect inner;
  int vegetation_removed = 0;
  ReshapeReport reshape;
  LayoutResult layout;
  RoadPlan roads;
  BridgeReport bridges;
  LightPlan lights;
  WallReport wall;
  std::vector<std::string> warnings;
};

struct PipelineResult {
  VoxelWorld world;
  PipelineReport report;
};

// Raised when a stage fails; carries the world as it stood, edit log included.
class PipelineError : public StageError {
 public:
  PipelineError(std::string stage, const std::string& cause, VoxelWorld partial)
      : StageError(std::move(stage), cause), partial_(std::move(partial)) {}

  const VoxelWorld& partial() const noexcept { return partial_; }

 private:
  VoxelWorld partial_;
};

// Loads or generates the input world named by the config.
VoxelWorld load_input_world(const PipelineConfig& config);

// Runs, in order: inner-city bounds, vegetation clearing, reshaping, layout
// optimization (footprints written as building edits), road planning with
// bridges, streetlights, and the wall.
PipelineResult run_pipeline(const PipelineConfig& config, const VoxelWorld& input);
PipelineResult run_pipeline(const PipelineConfig& config);

// Report as JSON. Timings are included, so the text is not reproducible
// between runs; the world file is.
std::string report_to_json(const PipelineReport& report, const PipelineConfig& config);

}  // namespace citygen
