#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "citygen/catalog.hpp"
#include "citygen/layout_opt.hpp"
#include "citygen/pipeline.hpp"
#include "citygen/walls.hpp"

namespace citygen {

struct MapProfile {
  std::string name;
  int size = 100;
  int buildings = 5;
  double plain_ratio = 0.5;
};

// The four comparison maps: (100, 5, 60.6%), (100, 5, 48.2%),
// (150, 9, 53.9%), (150, 9, 25.2%).
std::vector<MapProfile> default_profiles();

struct BenchmarkSpec {
  std::vector<MapProfile> profiles = default_profiles();
  std::vector<Algorithm> algorithms = {Algorithm::Heuristic, Algorithm::Evolve, Algorithm::Random};
  int runs = 30;
  std::uint64_t first_seed = 1;
  // Layout evaluations per run; by default what the GA spends
  // (pop_size × (generations + 1)).
  std::int64_t budget = 0;
  double water_fraction = 0.05;

  EvolveParams evolve;
  int heuristic_max_try = 100;

  Catalog catalog = default_catalog();
  CostModel model;
  WallConfig wall;
  int workers = 0;  // 0: hardware concurrency
};

std::int64_t effective_budget(const BenchmarkSpec& spec);

// First `count` catalog ids, cycling when the catalog is shorter.
BuildList profile_buildlist(const Catalog& catalog, int count);

struct BenchmarkRun {
  std::string profile;
  Algorithm algorithm = Algorithm::Heuristic;
  std::uint64_t seed = 0;
  Rect inner;
  Layout layout;
  Trace trace;
  std::int64_t evaluations = 0;
};

struct SummaryRow {
  std::string profile;
  Algorithm algorithm = Algorithm::Heuristic;
  int runs = 0;
  // Score of the returned layouts.
  double mean_final = 0.0;
  double std_final = 0.0;
  // Last best-so-far value of each trace.
  double mean_best = 0.0;
  double std_best = 0.0;
};

struct BenchmarkResult {
  std::vector<BenchmarkRun> runs;
  std::vector<SummaryRow> summary;
};

// Terrain for one (profile, seed) cell: generated, cleared and reshaped.
VoxelWorld prepare_terrain(const BenchmarkSpec& spec, const MapProfile& profile, std::uint64_t seed);

// Runs every algorithm on one (profile, seed) cell.
std::vector<BenchmarkRun> run_benchmark_cell(const BenchmarkSpec& spec, const MapProfile& profile,
                                             std::uint64_t seed);

// All profiles × seeds, cells spread over worker threads. Output order is
// profile, seed, algorithm regardless of scheduling.
BenchmarkResult run_benchmark(const BenchmarkSpec& spec);

std::vector<SummaryRow> summarize(const std::vector<BenchmarkRun>& runs);

inline constexpr const char* kBenchmarkCsvHeader = "profile,algorithm,seed,evaluations,best_score";

// Trace rows; the header is written only when `with_header` is set.
void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRun>& runs, bool with_header);
// Appends to `path`, writing the header only if the file is new or empty.
void append_benchmark_csv(const std::filesystem::path& path, const std::vector<BenchmarkRun>& runs);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace citygen
