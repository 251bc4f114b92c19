#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "citygen/catalog.hpp"
#include "citygen/world.hpp"

namespace citygen {

struct Layout {
  std::vector<Placement> placements;
  std::int64_t total_score = 0;
};

// Ordered building ids to place; repeats allowed.
using BuildList = std::vector<std::string>;

// Candidate anchors for an m×n inner city: gene k maps to
// (inner.x + k / n, inner.z + k % n).
struct Genome {
  std::vector<std::uint32_t> genes;
};

struct TracePoint {
  std::int64_t evaluations = 0;
  std::int64_t best_score = 0;
};

// Best-so-far score against the number of layout evaluations spent.
struct Trace {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::vector<TracePoint> points;
};

struct LayoutResult {
  Layout layout;
  Trace trace;
  std::int64_t evaluations = 0;
};

// Everything a layout optimizer reads. The world is not modified.
struct LayoutProblem {
  const VoxelWorld& world;
  const Catalog& catalog;
  CostModel model;
  Rect inner;
};

// Reference scorer: places buildings one by one on a copy of the world,
// marking each footprint artificial before scoring the next. Throws
// IllegalPlacementError if a footprint leaves the world.
std::int64_t layout_score(const LayoutProblem& problem, std::span<const Placement> placements);

// Throws ConfigError if an id is not in the catalog.
void validate_buildlist(const Catalog& catalog, const BuildList& buildlist);

// Same scoring as layout_score, backed by a CostField. Used by the optimizers.
class LayoutScorer {
 public:
  explicit LayoutScorer(const LayoutProblem& problem);

  const LayoutProblem& problem() const { return problem_; }

  // Score of `spec` at `anchor` with `earlier` footprints treated as artificial.
  std::int64_t placement(const BuildingSpec& spec, Cell anchor, std::span<const Rect> earlier) const;
  std::int64_t total(std::span<const Placement> placements) const;

 private:
  LayoutProblem problem_;
  CostField field_;
};

Layout decode_genome(const LayoutScorer& scorer, const Genome& genome, const BuildList& buildlist);

struct HeuristicParams {
  int nb = 20;
  int max_try = 100;
  // Stop once this many candidate evaluations have been spent; 0 = no cap.
  std::int64_t max_evaluations = 0;
};

struct EvolveParams {
  int pop_size = 100;
  int generations = 100;
  double pmut = 0.1;
};

struct RandomParams {
  std::int64_t samples = 10000;
};

// Greedy restarts: each layout grows by the best of max_try random
// (building, anchor) candidates until no candidate scores above zero.
// Each candidate counts as one evaluation.
LayoutResult heuristic_layout(const LayoutProblem& problem, const BuildList& buildlist,
                              const HeuristicParams& params, std::uint64_t seed);

// Generational GA over anchor genomes: roulette selection on shifted
// fitness, single-point crossover, single-gene mutation, no elitism. Each
// genome decode counts as one evaluation, including the final population.
LayoutResult evolve_layout(const LayoutProblem& problem, const BuildList& buildlist,
                           const EvolveParams& params, std::uint64_t seed);

// Best of `samples` uniform genomes.
LayoutResult random_layout(const LayoutProblem& problem, const BuildList& buildlist,
                           const RandomParams& params, std::uint64_t seed);

// Writes "algorithm,seed,evaluations,best_score" rows (no header).
void write_trace_rows(std::ostream& out, const Trace& trace);

}  // namespace citygen
