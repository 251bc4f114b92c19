// citygen: settlement generator command line.
//
//   citygen --config city.json --seed 7 --out world.json
//   citygen --benchmark results.csv --runs 30
//   citygen --config city.json --export-url http://localhost:9000

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "citygen/benchmark.hpp"
#include "citygen/errors.hpp"
#include "citygen/export.hpp"
#include "citygen/pipeline.hpp"

using namespace citygen;

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kStageFailure = 2, kExportFailure = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

int run_benchmark_mode(const PipelineConfig& cfg, const std::string& csv, int runs, int workers,
                       std::int64_t budget, const std::string& summary_path) {
  BenchmarkSpec spec;
  spec.catalog = cfg.catalog;
  spec.model = cfg.model;
  spec.wall = cfg.wall;
  spec.evolve = cfg.evolve;
  spec.heuristic_max_try = cfg.heuristic.max_try;
  spec.runs = runs;
  spec.workers = workers;
  spec.budget = budget;
  spec.first_seed = cfg.seed == 0 ? 1 : cfg.seed;
  const BenchmarkResult result = run_benchmark(spec);
  append_benchmark_csv(csv, result.runs);
  std::ostringstream summary;
  write_summary_csv(summary, result.summary);
  if (!summary_path.empty()) write_text(summary_path, summary.str());
  std::cout << summary.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generates a walled settlement on a voxel heightmap."};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string algorithm;
  std::string out_path;
  std::string benchmark_csv;
  std::string export_url;
  std::string report_path;
  std::string trace_path;
  std::string summary_path;
  int runs = 30;
  int workers = 0;
  std::int64_t budget = 0;

  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Global seed (overrides the config)");
  app.add_option("--algorithm", algorithm, "Layout optimizer")
      ->check(CLI::IsMember({"heuristic", "evolve", "random"}));
  app.add_option("--out", out_path, "Output world file");
  app.add_option("--report", report_path, "Output report file (JSON)");
  app.add_option("--trace", trace_path, "Output layout trace (CSV)");
  app.add_option("--benchmark", benchmark_csv, "Run the layout benchmark, appending traces to this CSV");
  app.add_option("--runs", runs, "Benchmark runs per profile")->check(CLI::PositiveNumber);
  app.add_option("--workers", workers, "Benchmark worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--budget", budget, "Benchmark evaluations per run (0: GA default)")->check(CLI::NonNegativeNumber);
  app.add_option("--summary", summary_path, "Benchmark summary CSV");
  app.add_option("--export-url", export_url, "Block-placement endpoint to stream edits to");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  PipelineConfig cfg;
  try {
    if (!config_path.empty()) cfg = pipeline_config_from_json(read_file(config_path));
    if (seed) cfg.seed = *seed;
    if (!algorithm.empty()) cfg.algorithm = parse_algorithm(algorithm);
    if (!out_path.empty()) cfg.out_world = out_path;
    if (!report_path.empty()) cfg.out_report = report_path;
    if (!trace_path.empty()) cfg.out_trace = trace_path;
    if (!benchmark_csv.empty()) return run_benchmark_mode(cfg, benchmark_csv, runs, workers, budget, summary_path);
    validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  PipelineResult result;
  try {
    result = run_pipeline(cfg);
  } catch (const PipelineError& e) {
    std::cerr << "stage '" << e.stage() << "' failed: " << e.what() << '\n';
    if (cfg.out_world && e.partial().width() > 0) {
      try {
        save_world(e.partial(), *cfg.out_world);
        std::cerr << "partial world written to " << *cfg.out_world << '\n';
      } catch (const std::exception& w) {
        std::cerr << w.what() << '\n';
      }
    }
    return kStageFailure;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (cfg.out_world) save_world(result.world, *cfg.out_world);
    if (cfg.out_report) write_text(*cfg.out_report, report_to_json(result.report, cfg));
    if (cfg.out_trace) {
      std::ostringstream trace;
      trace << "algorithm,seed,evaluations,best_score\n";
      write_trace_rows(trace, result.report.layout.trace);
      write_text(*cfg.out_trace, trace.str());
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kStageFailure;
  }

  const PipelineReport& r = result.report;
  std::cout << "layout score " << r.layout.layout.total_score << " with " << r.layout.layout.placements.size()
            << " buildings, " << result.world.edits().size() << " edits\n";
  for (const StageReport& s : r.stages) {
    std::cout << "  " << s.name << ": " << s.edits << " edits, " << s.milliseconds << " ms\n";
  }
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';

  if (!export_url.empty()) {
    try {
      const ExportReport ex = export_http(result.world, export_url);
      std::cout << "exported " << ex.placed << " edits in " << ex.batches << " batches (" << ex.retries
                << " retries, " << ex.failed << " failed)\n";
      if (ex.failed > 0) return kExportFailure;
    } catch (const std::exception& e) {
      std::cerr << "export failed: " << e.what() << '\n';
      return kExportFailure;
    }
  }
  return kOk;
}
