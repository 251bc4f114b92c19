#include "citygen/layout_opt.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "citygen/errors.hpp"
#include "citygen/rng.hpp"

namespace citygen {

namespace {

std::vector<const BuildingSpec*> resolve(const Catalog& catalog, const BuildList& buildlist) {
  std::vector<const BuildingSpec*> specs;
  specs.reserve(buildlist.size());
  for (const std::string& id : buildlist) specs.push_back(&catalog.at(id));
  return specs;
}

// Footprint rectangles of kept placements, in placement order.
struct Overlay {
  std::vector<Placement> placements;
  std::vector<Rect> rects;

  bool clear_of(const Rect& fp, int min_distance) const {
    return std::all_of(rects.begin(), rects.end(),
                       [&](const Rect& r) { return rect_gap(fp, r) >= min_distance; });
  }
};

void record(Trace& trace, std::int64_t evaluations, std::int64_t best) {
  if (!trace.points.empty() && trace.points.back().evaluations == evaluations) {
    trace.points.back().best_score = best;
    return;
  }
  trace.points.push_back({evaluations, best});
}

}  // namespace

void validate_buildlist(const Catalog& catalog, const BuildList& buildlist) {
  for (const std::string& id : buildlist) {
    if (catalog.find(id) == nullptr) throw ConfigError("buildlist: unknown building id '" + id + "'");
  }
}

std::int64_t layout_score(const LayoutProblem& problem, std::span<const Placement> placements) {
  VoxelWorld scratch = problem.world;
  std::int64_t total = 0;
  for (const Placement& p : placements) {
    const BuildingSpec& spec = problem.catalog.at(p.building_id);
    total += placement_score(scratch, spec, p.anchor, problem.model, problem.inner);
    const Rect fp = spec.footprint_at(p.anchor);
    for (int x = fp.x; x < fp.x_end(); ++x) {
      for (int z = fp.z; z < fp.z_end(); ++z) scratch.mark_artificial({x, z});
    }
  }
  return total;
}

LayoutScorer::LayoutScorer(const LayoutProblem& problem)
    : problem_(problem), field_(problem.world, problem.model.terrain) {}

std::int64_t LayoutScorer::placement(const BuildingSpec& spec, Cell anchor,
                                     std::span<const Rect> earlier) const {
  const Rect fp = spec.footprint_at(anchor);
  if (!problem_.world.bounds().contains(fp)) {
    throw IllegalPlacementError("footprint of '" + spec.id + "' leaves the world");
  }
  return spec.reward + monument_bonus(problem_.inner, spec, anchor, problem_.model) -
         field_.cost(fp, earlier);
}

std::int64_t LayoutScorer::total(std::span<const Placement> placements) const {
  std::vector<Rect> earlier;
  std::int64_t sum = 0;
  for (const Placement& p : placements) {
    const BuildingSpec& spec = problem_.catalog.at(p.building_id);
    sum += placement(spec, p.anchor, earlier);
    earlier.push_back(spec.footprint_at(p.anchor));
  }
  return sum;
}

Layout decode_genome(const LayoutScorer& scorer, const Genome& genome, const BuildList& buildlist) {
  if (genome.genes.size() != buildlist.size()) {
    throw ConfigError("genome length does not match the build list");
  }
  const LayoutProblem& problem = scorer.problem();
  const Rect& inner = problem.inner;
  const auto positions = static_cast<std::uint64_t>(inner.width) * inner.length;

  Overlay kept;
  Layout layout;
  for (std::size_t i = 0; i < buildlist.size(); ++i) {
    const std::uint32_t gene = genome.genes[i];
    if (gene >= positions) continue;
    const BuildingSpec& spec = problem.catalog.at(buildlist[i]);
    const Cell anchor{inner.x + static_cast<int>(gene / inner.length),
                      inner.z + static_cast<int>(gene % inner.length)};
    const Rect fp = spec.footprint_at(anchor);
    if (!inner.contains(fp) || !kept.clear_of(fp, problem.model.min_distance)) continue;
    layout.total_score += scorer.placement(spec, anchor, kept.rects);
    kept.rects.push_back(fp);
    layout.placements.push_back({spec.id, anchor});
  }
  return layout;
}

LayoutResult heuristic_layout(const LayoutProblem& problem, const BuildList& buildlist,
                              const HeuristicParams& params, std::uint64_t seed) {
  if (params.nb < 1 || params.max_try < 1) throw ConfigError("heuristic: nb and max_try must be >= 1");
  const auto specs = resolve(problem.catalog, buildlist);
  const LayoutScorer scorer(problem);
  const Rect& inner = problem.inner;
  Rng rng(seed);

  LayoutResult result;
  result.trace = {"heuristic", seed, {}};
  std::int64_t best_so_far = 0;
  record(result.trace, 0, best_so_far);

  auto budget_left = [&] {
    return params.max_evaluations <= 0 || result.evaluations < params.max_evaluations;
  };

  for (int restart = 0; restart < params.nb && budget_left(); ++restart) {
    Overlay layout;
    std::vector<const BuildingSpec*> remaining = specs;
    std::int64_t temp_reward = 0;

    while (!remaining.empty()) {
      std::int64_t max_score = std::numeric_limits<std::int64_t>::min();
      std::size_t best_index = 0;
      Cell best_anchor;
      for (int attempt = 0; attempt < params.max_try && budget_left(); ++attempt) {
        const std::size_t index = rng.below(remaining.size());
        const BuildingSpec& spec = *remaining[index];
        ++result.evaluations;
        if (spec.footprint_width > inner.width || spec.footprint_length > inner.length) continue;
        const Cell anchor{
            inner.x + static_cast<int>(rng.below(static_cast<std::uint64_t>(inner.width - spec.footprint_width) + 1)),
            inner.z + static_cast<int>(rng.below(static_cast<std::uint64_t>(inner.length - spec.footprint_length) + 1))};
        if (!layout.clear_of(spec.footprint_at(anchor), problem.model.min_distance)) continue;
        const std::int64_t score = scorer.placement(spec, anchor, layout.rects);
        if (score > max_score) {
          max_score = score;
          best_index = index;
          best_anchor = anchor;
        }
      }
      if (max_score <= 0) break;
      const BuildingSpec& chosen = *remaining[best_index];
      layout.rects.push_back(chosen.footprint_at(best_anchor));
      layout.placements.push_back({chosen.id, best_anchor});
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_index));
      temp_reward += max_score;
      best_so_far = std::max(best_so_far, temp_reward);
      record(result.trace, result.evaluations, best_so_far);
      if (!budget_left()) break;
    }

    if (restart == 0 || temp_reward > result.layout.total_score) {
      result.layout.placements = layout.placements;
      result.layout.total_score = temp_reward;
    }
  }
  record(result.trace, result.evaluations, best_so_far);
  return result;
}

namespace {

Genome random_genome(Rng& rng, std::size_t num, std::uint64_t positions) {
  Genome g;
  g.genes.resize(num);
  for (auto& gene : g.genes) gene = static_cast<std::uint32_t>(rng.below(positions));
  return g;
}

std::uint64_t position_count(const Rect& inner) {
  if (inner.empty()) throw ConfigError("inner city is empty");
  return static_cast<std::uint64_t>(inner.width) * inner.length;
}

}  // namespace

LayoutResult evolve_layout(const LayoutProblem& problem, const BuildList& buildlist,
                           const EvolveParams& params, std::uint64_t seed) {
  if (params.pop_size < 2) throw ConfigError("evolve: pop_size must be >= 2");
  if (params.generations < 0) throw ConfigError("evolve: generations must be >= 0");
  if (params.pmut < 0.0 || params.pmut > 1.0) throw ConfigError("evolve: pmut must lie in [0, 1]");
  validate_buildlist(problem.catalog, buildlist);
  const LayoutScorer scorer(problem);
  const std::uint64_t positions = position_count(problem.inner);
  const std::size_t num = buildlist.size();
  const auto pop_size = static_cast<std::size_t>(params.pop_size);
  Rng rng(seed);

  LayoutResult result;
  result.trace = {"evolve", seed, {}};

  std::vector<Genome> pop(pop_size);
  for (auto& g : pop) g = random_genome(rng, num, positions);
  std::vector<std::int64_t> fitness(pop_size);
  std::int64_t best_so_far = std::numeric_limits<std::int64_t>::min();

  auto evaluate = [&] {
    for (std::size_t i = 0; i < pop_size; ++i) {
      fitness[i] = decode_genome(scorer, pop[i], buildlist).total_score;
      best_so_far = std::max(best_so_far, fitness[i]);
    }
    result.evaluations += static_cast<std::int64_t>(pop_size);
    record(result.trace, result.evaluations, best_so_far);
  };

  std::vector<double> cumulative(pop_size);
  std::vector<const Genome*> parents(pop_size);
  std::vector<Genome> next(pop_size);
  for (int generation = 0; generation < params.generations; ++generation) {
    evaluate();

    // Roulette wheel on fitness shifted so the worst genome weighs 1.
    const std::int64_t min_fitness = *std::min_element(fitness.begin(), fitness.end());
    double total = 0.0;
    for (std::size_t i = 0; i < pop_size; ++i) {
      total += static_cast<double>(fitness[i] - min_fitness + 1);
      cumulative[i] = total;
    }
    for (auto& parent : parents) {
      const double spin = rng.uniform01() * total;
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), spin);
      parent = &pop[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), pop_size - 1)];
    }

    for (auto& child : next) {
      const Genome& x = *parents[rng.below(pop_size)];
      const Genome& y = *parents[rng.below(pop_size)];
      child.genes = x.genes;
      if (num >= 2) {
        const std::size_t cut = 1 + rng.below(num - 1);
        std::copy(y.genes.begin() + static_cast<std::ptrdiff_t>(cut), y.genes.end(),
                  child.genes.begin() + static_cast<std::ptrdiff_t>(cut));
      }
      if (num > 0 && rng.uniform01() < params.pmut) {
        child.genes[rng.below(num)] = static_cast<std::uint32_t>(rng.below(positions));
      }
    }
    pop.swap(next);
  }

  evaluate();
  const auto best = static_cast<std::size_t>(std::max_element(fitness.begin(), fitness.end()) - fitness.begin());
  result.layout = decode_genome(scorer, pop[best], buildlist);
  return result;
}

LayoutResult random_layout(const LayoutProblem& problem, const BuildList& buildlist,
                           const RandomParams& params, std::uint64_t seed) {
  if (params.samples < 1) throw ConfigError("random: samples must be >= 1");
  validate_buildlist(problem.catalog, buildlist);
  const LayoutScorer scorer(problem);
  const std::uint64_t positions = position_count(problem.inner);
  Rng rng(seed);

  LayoutResult result;
  result.trace = {"random", seed, {}};
  for (std::int64_t s = 0; s < params.samples; ++s) {
    Layout candidate = decode_genome(scorer, random_genome(rng, buildlist.size(), positions), buildlist);
    ++result.evaluations;
    if (s == 0 || candidate.total_score > result.layout.total_score) {
      result.layout = std::move(candidate);
      record(result.trace, result.evaluations, result.layout.total_score);
    }
  }
  record(result.trace, result.evaluations, result.layout.total_score);
  return result;
}

void write_trace_rows(std::ostream& out, const Trace& trace) {
  for (const TracePoint& p : trace.points) {
    out << trace.algorithm << ',' << trace.seed << ',' << p.evaluations << ',' << p.best_score << '\n';
  }
}

}  // namespace citygen
