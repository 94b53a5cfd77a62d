// Copyright 2026 The CES Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run a scenario, benchmark random mazes, or redraw
// the plot of a finished run.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ces/pipeline.h"
#include "ces/report.h"
#include "ces/scenarios.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInfeasible = 2;
constexpr char kOutputEnv[] = "CES_OUTPUT_DIR";

struct Overrides {
  std::optional<double> r_l;
  std::optional<double> r_u;
  std::optional<int> max_iterations;
  std::optional<double> timeout_s;
  std::optional<bool> constant_speed;
  std::optional<double> constant_speed_value;
  std::optional<double> time_tolerance;
  std::optional<double> v_start;
  std::optional<double> v_end;
  std::optional<double> mass_kg;
  std::optional<double> mu;
  std::optional<double> g;
  std::optional<double> u_long_max_n;
  std::optional<double> r_min_m;

  void Register(CLI::App* app) {
    app->add_option("--ces.r-l", r_l, "Bubble lower radius [m]");
    app->add_option("--ces.r-u", r_u, "Bubble upper radius [m]");
    app->add_option("--ces.max-iterations", max_iterations, "Iteration cap");
    app->add_option("--ces.timeout-s", timeout_s, "Run timeout [s]");
    app->add_option("--ces.constant-speed", constant_speed,
                    "Skip speed optimization (true/false)");
    app->add_option("--ces.constant-speed-value", constant_speed_value,
                    "Speed in constant-speed mode [m/s]");
    app->add_option("--ces.time-tolerance", time_tolerance,
                    "Relative traversal-time improvement for acceptance");
    app->add_option("--ces.v-start", v_start, "Start speed [m/s]");
    app->add_option("--ces.v-end", v_end, "End speed [m/s]");
    app->add_option("--vehicle.mass-kg", mass_kg, "Vehicle mass [kg]");
    app->add_option("--vehicle.mu", mu, "Friction coefficient");
    app->add_option("--vehicle.g", g, "Gravity [m/s^2]");
    app->add_option("--vehicle.u-long-max-n", u_long_max_n,
                    "Traction force limit [N]");
    app->add_option("--vehicle.r-min-m", r_min_m, "Minimum turning radius [m]");
  }

  void Apply(ces::CesConfig* c) const {
    if (r_l) c->bubbles.lower_radius = *r_l;
    if (r_u) c->bubbles.upper_radius = *r_u;
    if (max_iterations) c->max_iterations = *max_iterations;
    if (timeout_s) c->timeout_s = *timeout_s;
    if (constant_speed) c->constant_speed_mode = *constant_speed;
    if (constant_speed_value) c->constant_speed = *constant_speed_value;
    if (time_tolerance) c->time_tolerance = *time_tolerance;
    if (v_start) c->boundary.start = *v_start;
    if (v_end) c->boundary.end = *v_end;
    if (mass_kg) c->vehicle.mass_kg = *mass_kg;
    if (mu) c->vehicle.mu = *mu;
    if (g) c->vehicle.g = *g;
    if (u_long_max_n) c->vehicle.u_long_max_n = *u_long_max_n;
    if (r_min_m) c->vehicle.r_min_m = *r_min_m;
  }
};

std::string DefaultOutputDir() {
  const char* env = std::getenv(kOutputEnv);
  return env != nullptr && *env != '\0' ? env : "ces_output";
}

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kResourceExhausted:
      return kExitInfeasible;
    default:
      return kExitInputError;
  }
}

struct RunOutcome {
  ces::RunReport report;
  int exit_code = kExitOk;
};

// Runs one scenario; writes artifacts when `dir` is non-empty.
RunOutcome Execute(const ces::GeneratedScenario& scenario,
                   const std::string& dir) {
  RunOutcome out;
  absl::StatusOr<ces::CesResult> result =
      ces::RunCes(scenario.reference, scenario.workspace, scenario.config);
  if (!result.ok()) {
    out.exit_code = ExitCodeFor(result.status());
    out.report = ces::MakeFailureReport(
        scenario.id, scenario.seed,
        out.exit_code == kExitInfeasible ? ces::RunStatus::kInfeasible
                                         : ces::RunStatus::kError,
        std::string(result.status().message()));
    return out;
  }
  out.report = ces::MakeRunReport(scenario, *result, scenario.config);
  if (out.report.status != ces::RunStatus::kOk) out.exit_code = kExitInfeasible;
  if (!dir.empty()) {
    if (absl::Status s =
            ces::WriteRunArtifacts(dir, scenario, *result, out.report);
        !s.ok()) {
      std::cerr << "error: " << s.message() << "\n";
      out.exit_code = kExitInputError;
    }
  }
  return out;
}

int CmdRun(const std::string& file, const std::string& dir,
           const Overrides& overrides) {
  absl::StatusOr<ces::GeneratedScenario> scenario = ces::LoadScenario(file);
  if (!scenario.ok()) {
    std::cerr << "error: " << scenario.status().message() << "\n";
    return ExitCodeFor(scenario.status());
  }
  overrides.Apply(&scenario->config);
  if (absl::Status s = ces::ValidateCesConfig(scenario->config); !s.ok()) {
    std::cerr << "error: " << s.message() << "\n";
    return kExitInputError;
  }
  const RunOutcome outcome = Execute(*scenario, dir);
  const ces::RunReport& r = outcome.report;
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << "\n";
  if (!r.error.empty()) std::cerr << "error: " << r.error << "\n";
  if (outcome.exit_code != kExitInputError) {
    std::cout << absl::StrFormat(
        "%s: %s, time %.4f -> %.4f s (%.2f%%), length %.3f -> %.3f m, "
        "%d iterations (%d accepted), audit %s\n",
        r.scenario_id, std::string(ces::ToString(r.status)), r.initial_time, r.final_time,
        r.time_reduction_pct, r.initial_length, r.final_length, r.iterations,
        r.accepted_iterations, r.audit.ok ? "ok" : "FAILED");
  }
  return outcome.exit_code;
}

int CmdBench(int count, uint64_t seed_base, int jobs, double coverage,
             int num_points, const std::string& dir,
             const Overrides& overrides) {
  if (count < 1 || jobs < 1 || num_points < 4) {
    std::cerr << "error: count and jobs must be positive, num-points >= 4\n";
    return kExitInputError;
  }
  ces::MazeSpec spec;
  spec.coverage = coverage;
  if (absl::Status s = ces::ValidateMazeSpec(spec); !s.ok()) {
    std::cerr << "error: " << s.message() << "\n";
    return kExitInputError;
  }
  {
    ces::CesConfig probe;
    overrides.Apply(&probe);
    if (absl::Status s = ces::ValidateCesConfig(probe); !s.ok()) {
      std::cerr << "error: " << s.message() << "\n";
      return kExitInputError;
    }
  }
  std::vector<ces::RunReport> reports(count);
  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (int i = next++; i < count; i = next++) {
      const uint64_t seed = seed_base + static_cast<uint64_t>(i);
      absl::StatusOr<ces::GeneratedScenario> scenario =
          ces::MazeScenario(spec, seed, num_points);
      if (!scenario.ok()) {
        reports[i] = ces::MakeFailureReport(
            absl::StrFormat("maze-%d", seed), seed, ces::RunStatus::kError,
            std::string(scenario.status().message()));
        continue;
      }
      overrides.Apply(&scenario->config);
      reports[i] = Execute(*scenario, "").report;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(jobs, count); ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  std::sort(reports.begin(), reports.end(),
            [](const ces::RunReport& a, const ces::RunReport& b) {
              return a.scenario_id < b.scenario_id;
            });
  std::cout << absl::StrFormat("%-12s %-10s %10s %10s %8s %6s %8s\n", "scenario",
                               "status", "t0 [s]", "tf [s]", "red [%]",
                               "iters", "wall [s]");
  for (const ces::RunReport& r : reports) {
    std::cout << absl::StrFormat("%-12s %-10s %10.4f %10.4f %8.2f %6d %8.3f\n",
                                 r.scenario_id, std::string(ces::ToString(r.status)),
                                 r.initial_time, r.final_time,
                                 r.time_reduction_pct, r.iterations,
                                 r.wall_time_s);
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::filesystem::path root(dir);
  std::ofstream(root / "bench.json") << ces::BenchJson(reports, false);
  std::ofstream(root / "bench_timing.json") << ces::BenchJson(reports, true);
  if (ec || !std::filesystem::exists(root / "bench.json")) {
    std::cerr << "error: cannot write to " << dir << "\n";
    return kExitInputError;
  }
  std::cout << "aggregate written to " << (root / "bench.json").string() << "\n";
  return kExitOk;
}

int CmdPlot(const std::string& dir) {
  std::vector<std::string> warnings;
  absl::StatusOr<ces::PlotData> data = ces::LoadPlotData(dir, &warnings);
  if (!data.ok()) {
    std::cerr << "error: " << data.status().message() << "\n";
    return kExitInputError;
  }
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  const std::filesystem::path out = std::filesystem::path(dir) / "plot.svg";
  std::ofstream file(out, std::ios::binary);
  file << ces::RenderSvg(*data);
  if (!file) {
    std::cerr << "error: cannot write " << out.string() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex elastic smoothing of vehicle trajectories"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string output_dir = DefaultOutputDir();
  Overrides run_overrides;
  CLI::App* run = app.add_subcommand("run", "Smooth one scenario file");
  run->add_option("scenario", scenario_file, "Scenario JSON file")->required();
  run->add_option("-o,--output", output_dir,
                  absl::StrFormat("Output directory (default: $%s or ces_output)",
                                  kOutputEnv));
  run_overrides.Register(run);

  int count = 24;
  uint64_t seed_base = 1000;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  double coverage = 0.5;
  int num_points = 257;
  std::string bench_dir = DefaultOutputDir();
  Overrides bench_overrides;
  CLI::App* bench = app.add_subcommand("bench", "Run the random-maze batch");
  bench->add_option("--count", count, "Number of mazes");
  bench->add_option("--seed-base", seed_base, "Seed of the first maze");
  bench->add_option("--jobs", jobs, "Parallel runs");
  bench->add_option("--coverage", coverage, "Obstacle coverage target");
  bench->add_option("--num-points", num_points, "Waypoints per reference");
  bench->add_option("-o,--output", bench_dir, "Output directory");
  bench_overrides.Register(bench);

  std::string plot_dir;
  CLI::App* plot = app.add_subcommand("plot", "Redraw plot.svg of a run");
  plot->add_option("dir", plot_dir, "Run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }
  if (*run) return CmdRun(scenario_file, output_dir, run_overrides);
  if (*bench) {
    return CmdBench(count, seed_base, jobs, coverage, num_points, bench_dir,
                    bench_overrides);
  }
  return CmdPlot(plot_dir);
}
