#include "citygen/benchmark.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "citygen/rng.hpp"
#include "citygen/terrain_ops.hpp"

namespace citygen {

std::vector<MapProfile> default_profiles() {
  return {
      {"a", 100, 5, 0.606},
      {"b", 100, 5, 0.482},
      {"c", 150, 9, 0.539},
      {"d", 150, 9, 0.252},
  };
}

std::int64_t effective_budget(const BenchmarkSpec& spec) {
  if (spec.budget > 0) return spec.budget;
  return static_cast<std::int64_t>(spec.evolve.pop_size) * (spec.evolve.generations + 1);
}

BuildList profile_buildlist(const Catalog& catalog, int count) {
  if (catalog.specs().empty()) throw ConfigError("benchmark: empty catalog");
  BuildList list;
  for (int i = 0; i < count; ++i) list.push_back(catalog.specs()[i % catalog.specs().size()].id);
  return list;
}

VoxelWorld prepare_terrain(const BenchmarkSpec& spec, const MapProfile& profile, std::uint64_t seed) {
  VoxelWorld world = generate_terrain(seed, profile.size, profile.plain_ratio, spec.water_fraction);
  clear_vegetation(world);
  reshape(world);
  return world;
}

std::vector<BenchmarkRun> run_benchmark_cell(const BenchmarkSpec& spec, const MapProfile& profile,
                                             std::uint64_t seed) {
  const VoxelWorld world = prepare_terrain(spec, profile, seed);
  const Rect inner = inner_city_bounds(world, spec.wall);
  const LayoutProblem problem{world, spec.catalog, spec.model, inner};
  const BuildList buildlist = profile_buildlist(spec.catalog, profile.buildings);
  const std::int64_t budget = effective_budget(spec);

  std::vector<BenchmarkRun> runs;
  for (Algorithm algorithm : spec.algorithms) {
    const std::uint64_t run_seed = mix_seed(seed, static_cast<std::uint64_t>(algorithm) + 1);
    LayoutResult r;
    switch (algorithm) {
      case Algorithm::Heuristic:
        r = heuristic_layout(problem, buildlist,
                             {std::numeric_limits<int>::max(), spec.heuristic_max_try, budget}, run_seed);
        break;
      case Algorithm::Evolve: {
        EvolveParams params = spec.evolve;
        params.generations = static_cast<int>(budget / params.pop_size) - 1;
        r = evolve_layout(problem, buildlist, params, run_seed);
        break;
      }
      case Algorithm::Random:
        r = random_layout(problem, buildlist, {budget}, run_seed);
        break;
    }
    r.trace.seed = seed;
    runs.push_back({profile.name, algorithm, seed, inner, std::move(r.layout), std::move(r.trace), r.evaluations});
  }
  return runs;
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec) {
  if (spec.runs < 1) throw ConfigError("benchmark: runs must be >= 1");
  if (effective_budget(spec) < spec.evolve.pop_size) {
    throw ConfigError("benchmark: budget must cover at least one GA population");
  }
  struct Job {
    std::size_t profile;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < spec.profiles.size(); ++p) {
    for (int r = 0; r < spec.runs; ++r) jobs.push_back({p, spec.first_seed + static_cast<std::uint64_t>(r)});
  }

  std::vector<std::vector<BenchmarkRun>> cells(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        cells[j] = run_benchmark_cell(spec, spec.profiles[jobs[j].profile], jobs[j].seed);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  unsigned count = spec.workers > 0 ? static_cast<unsigned>(spec.workers) : std::thread::hardware_concurrency();
  count = std::max(1u, std::min<unsigned>(count, static_cast<unsigned>(jobs.size())));
  std::vector<std::jthread> threads;
  for (unsigned t = 1; t < count; ++t) threads.emplace_back(worker);
  worker();
  threads.clear();
  if (error) std::rethrow_exception(error);

  BenchmarkResult result;
  for (auto& cell : cells) {
    for (auto& run : cell) result.runs.push_back(std::move(run));
  }
  result.summary = summarize(result.runs);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<BenchmarkRun>& runs) {
  struct Acc {
    std::vector<double> finals;
    std::vector<double> bests;
  };
  std::vector<std::pair<std::string, Algorithm>> order;
  std::map<std::pair<std::string, Algorithm>, Acc> groups;
  for (const BenchmarkRun& r : runs) {
    const auto key = std::pair(r.profile, r.algorithm);
    if (!groups.contains(key)) order.push_back(key);
    Acc& acc = groups[key];
    acc.finals.push_back(static_cast<double>(r.layout.total_score));
    acc.bests.push_back(r.trace.points.empty() ? 0.0 : static_cast<double>(r.trace.points.back().best_score));
  }
  auto stats = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    return std::pair(mean, sd);
  };
  std::vector<SummaryRow> rows;
  for (const auto& key : order) {
    const Acc& acc = groups[key];
    const auto [mf, sf] = stats(acc.finals);
    const auto [mb, sb] = stats(acc.bests);
    rows.push_back({key.first, key.second, static_cast<int>(acc.finals.size()), mf, sf, mb, sb});
  }
  return rows;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRun>& runs, bool with_header) {
  if (with_header) out << kBenchmarkCsvHeader << '\n';
  for (const BenchmarkRun& r : runs) {
    for (const TracePoint& p : r.trace.points) {
      out << r.profile << ',' << to_string(r.algorithm) << ',' << r.seed << ',' << p.evaluations << ','
          << p.best_score << '\n';
    }
  }
}

void append_benchmark_csv(const std::filesystem::path& path, const std::vector<BenchmarkRun>& runs) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot open '" + path.string() + "' for appending");
  write_benchmark_csv(out, runs, fresh);
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "profile,algorithm,runs,mean_final,std_final,mean_best,std_best\n";
  for (const SummaryRow& r : rows) {
    out << r.profile << ',' << to_string(r.algorithm) << ',' << r.runs << ',' << r.mean_final << ','
        << r.std_final << ',' << r.mean_best << ',' << r.std_best << '\n';
  }
}

}  // namespace citygen
