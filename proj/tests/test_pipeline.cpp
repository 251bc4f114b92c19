#include <gtest/gtest.h>

#include <filesystem>

#include "citygen/errors.hpp"
#include "citygen/pipeline.hpp"

using namespace citygen;

namespace {

PipelineConfig small_config() {
  PipelineConfig cfg;
  cfg.generated = {3, 64, 0.55, 0.05};
  cfg.seed = 42;
  return cfg;
}

}  // namespace

TEST(PipelineConfig, ParsesSections) {
  const PipelineConfig cfg = pipeline_config_from_json(R"({
    "world": {"generate": {"seed": 9, "size": 80, "plain_ratio": 0.4}},
    "buildlist": ["shop", "dorm"],
    "algorithm": "evolve",
    "evolve": {"pop_size": 20, "generations": 5},
    "lighting": {"k": 2},
    "wall": {"ring_width": 4},
    "cost_model": {"min_distance": 4},
    "seed": 17,
    "output": {"world": "out.json"}
  })");
  EXPECT_EQ(cfg.generated.seed, 9u);
  EXPECT_EQ(cfg.generated.size, 80);
  EXPECT_DOUBLE_EQ(cfg.generated.plain_ratio, 0.4);
  EXPECT_DOUBLE_EQ(cfg.generated.water_fraction, 0.05);
  EXPECT_EQ(cfg.buildlist, (BuildList{"shop", "dorm"}));
  EXPECT_EQ(cfg.algorithm, Algorithm::Evolve);
  EXPECT_EQ(cfg.evolve.pop_size, 20);
  EXPECT_EQ(cfg.evolve.generations, 5);
  EXPECT_EQ(cfg.lighting.k, 2);
  EXPECT_EQ(cfg.wall.ring_width, 4);
  EXPECT_EQ(cfg.model.min_distance, 4);
  EXPECT_EQ(cfg.seed, 17u);
  EXPECT_EQ(cfg.out_world, "out.json");
  EXPECT_FALSE(cfg.world_file);
}

TEST(PipelineConfig, Errors) {
  EXPECT_THROW(pipeline_config_from_json("{"), ConfigError);
  EXPECT_THROW(pipeline_config_from_json(R"({"algorithm": "annealing"})"), ConfigError);
  EXPECT_THROW(pipeline_config_from_json(R"({"evolve": {"pop_size": "many"}})"), ConfigError);
  EXPECT_THROW(pipeline_config_from_json(R"({"catalog": [{"id": "x"}]})"), ConfigError);
  PipelineConfig cfg = small_config();
  cfg.buildlist = {"dorm", "castle"};
  EXPECT_THROW(validate(cfg), ConfigError);
  EXPECT_THROW(run_pipeline(cfg), ConfigError);
  cfg = small_config();
  cfg.generated.size = 8;
  EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(Pipeline, RunsAllStagesInOrder) {
  const PipelineResult r = run_pipeline(small_config());
  const std::vector<std::string> expected = {"wall_bounds", "vegetation_clearing", "terrain_reshaping",
                                             "building_layout", "route_planning", "streetlight_placement",
                                             "wall_construction"};
  ASSERT_EQ(r.report.stages.size(), expected.size());
  std::size_t edits = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(r.report.stages[i].name, expected[i]);
    edits += r.report.stages[i].edits;
  }
  EXPECT_EQ(edits, r.world.edits().size());
  EXPECT_EQ(r.report.inner, (Rect{4, 4, 56, 56}));
  EXPECT_FALSE(r.report.layout.layout.placements.empty());
  EXPECT_GT(r.report.wall.plane_height, 0);
  EXPECT_NE(report_to_json(r.report, small_config()).find("\"stages\""), std::string::npos);
}

TEST(Pipeline, FlatWorldScoresAtLeastRewards) {
  PipelineConfig cfg;
  cfg.seed = 5;
  const PipelineResult r = run_pipeline(cfg, VoxelWorld(100, 100, 64));
  const auto& layout = r.report.layout.layout;
  EXPECT_EQ(layout.placements.size(), 5u);
  std::int64_t rewards = 0;
  for (const Placement& p : layout.placements) rewards += cfg.catalog.at(p.building_id).reward;
  EXPECT_GE(layout.total_score, rewards);
}

TEST(Pipeline, EditLogReplaysToFinalWorld) {
  const PipelineConfig cfg = small_config();
  const VoxelWorld input = load_input_world(cfg);
  const PipelineResult r = run_pipeline(cfg, input);
  VoxelWorld replayed = replay(input, r.world.edits());
  // Marks without edits (road cells, wall passages) are not in the log.
  for (int x = 0; x < r.world.width(); ++x)
    for (int z = 0; z < r.world.length(); ++z) {
      ASSERT_EQ(replayed.altitude({x, z}), r.world.altitude({x, z}));
      ASSERT_EQ(replayed.surface({x, z}), r.world.surface({x, z}));
    }
}

TEST(Pipeline, ByteIdenticalAcrossRuns) {
  for (Algorithm a : {Algorithm::Heuristic, Algorithm::Evolve, Algorithm::Random}) {
    PipelineConfig cfg = small_config();
    cfg.algorithm = a;
    cfg.evolve = {20, 10, 0.1};
    cfg.random.samples = 500;
    EXPECT_EQ(world_to_json(run_pipeline(cfg).world), world_to_json(run_pipeline(cfg).world)) << to_string(a);
  }
}

TEST(Pipeline, SeedChangesLayout) {
  PipelineConfig a = small_config();
  PipelineConfig b = small_config();
  b.seed = 43;
  EXPECT_NE(run_pipeline(a).report.layout.layout.placements, run_pipeline(b).report.layout.layout.placements);
}

TEST(Pipeline, StageFailureCarriesPartialWorld) {
  PipelineConfig cfg = small_config();
  const VoxelWorld flood(40, 40, 5, Surface::water());
  try {
    run_pipeline(cfg, flood);
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "route_planning");
    EXPECT_EQ(e.partial().width(), 40);
  }
}

TEST(Pipeline, LoadsWorldFile) {
  const auto path = std::filesystem::temp_directory_path() / "citygen_pipeline_in.json";
  save_world(generate_terrain(5, 48, 0.5, 0.05), path);
  PipelineConfig cfg = small_config();
  cfg.world_file = path.string();
  const PipelineResult r = run_pipeline(cfg);
  EXPECT_EQ(r.world.width(), 48);
  std::filesystem::remove(path);
  cfg.world_file = (std::filesystem::temp_directory_path() / "citygen_missing.json").string();
  try {
    run_pipeline(cfg);
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "world_input");
  }
}

TEST(Algorithm, Names) {
  EXPECT_EQ(parse_algorithm("random"), Algorithm::Random);
  EXPECT_EQ(to_string(Algorithm::Evolve), "evolve");
  EXPECT_THROW(parse_algorithm("greedy"), ConfigError);
}
