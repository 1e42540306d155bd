// Command-line front end: criteria reports, solver experiment runs, color
// bound tables, and a quick benchmark mode.
//
// Exit codes: 0 success; 1 requested criterion fails or sits on the
// boundary; 2 solver trials exhausted (some trial failed or did not
// verify); 3 unusable input (bad flags, bad config, unreadable files).
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lll/experiment.hpp"
#include "lll/io.hpp"

namespace {

// Relative output paths land in $LLL_OUT_DIR when it is set.
std::string with_out_dir(const std::string& out) {
  if (out.empty()) return out;
  const char* dir = std::getenv("LLL_OUT_DIR");
  std::filesystem::path p(out);
  if (dir && *dir && p.is_relative())
    return (std::filesystem::path(dir) / p).string();
  return out;
}

std::string serialize_solution(const lll::Configuration& c) {
  std::string out = "# atom value\n";
  char buf[64];
  for (int a = 0; a < c.size(); ++a) {
    std::snprintf(buf, sizeof buf, "%d %d\n", a, c[a]);
    out += buf;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resampling solvers and convergence criteria for coloring-style constraint families"};
  app.require_subcommand(1);

  std::string config_path;
  std::string criterion = "auto";
  std::string solver;
  std::string out_path;
  std::uint64_t seed = 0;
  int trials = 0;
  std::int64_t step_cap = -1;
  int threads = -1;
  int delta = 0;
  int beta = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")
        ->required();
    cmd->add_option("--seed", seed, "master seed override");
    cmd->add_option("--trials", trials, "trial count override");
    cmd->add_option("--solver", solver, "solver override: forest | mt | ec");
    cmd->add_option("--step-cap", step_cap, "step cap override (0 = auto)");
    cmd->add_option("--out", out_path, "output path prefix override");
    cmd->add_option("--threads", threads, "worker count override (0 = auto)");
  };

  CLI::App* cmd_criteria =
      app.add_subcommand("criteria", "Evaluate every applicable criterion");
  add_common(cmd_criteria);
  cmd_criteria->add_option(
      "--criterion", criterion,
      "entry deciding the exit code (default: series min-ratio when "
      "available, else family min-ratio)");

  CLI::App* cmd_solve =
      app.add_subcommand("solve", "Run solver trials and emit CSV results");
  add_common(cmd_solve);

  CLI::App* cmd_bounds =
      app.add_subcommand("bounds", "Print color bounds for a degree");
  cmd_bounds->add_option("--delta", delta, "maximum degree")->required();
  cmd_bounds->add_option("--beta", beta, "frugality parameter");

  CLI::App* cmd_bench =
      app.add_subcommand("bench", "Time solver trials without writing files");
  add_common(cmd_bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (cmd_bounds->parsed()) {
      std::fputs(lll::bounds_table(delta, cmd_bounds->count("--beta")
                                              ? std::optional<int>(beta)
                                              : std::nullopt)
                     .c_str(),
                 stdout);
      return 0;
    }

    lll::ExperimentConfig cfg =
        lll::parse_experiment_config(lll::read_file(config_path));
    CLI::App* active = cmd_criteria->parsed()
                           ? cmd_criteria
                           : (cmd_solve->parsed() ? cmd_solve : cmd_bench);
    if (active->count("--seed")) cfg.seed = seed;
    if (active->count("--trials")) cfg.trials = trials;
    if (active->count("--solver")) cfg.solver = solver;
    if (active->count("--step-cap")) cfg.step_cap = step_cap;
    if (active->count("--out")) cfg.out = out_path;
    if (active->count("--threads")) cfg.threads = threads;
    if (cfg.trials < 1 || cfg.step_cap < 0 || cfg.threads < 0)
      throw std::invalid_argument("overrides must keep trials >= 1, step-cap >= 0, threads >= 0");
    cfg.out = with_out_dir(cfg.out);

    lll::Problem problem = lll::build_problem(cfg);

    if (cmd_criteria->parsed()) {
      const lll::CriterionReport rep = lll::run_criteria(problem);
      std::fputs(rep.to_text().c_str(), stdout);
      if (!cfg.out.empty()) {
        lll::write_file(cfg.out + ".criteria.txt", rep.to_text());
        lll::write_file(cfg.out + ".criteria.csv", rep.to_csv());
      }
      std::string want = criterion;
      if (want == "auto") {
        want = "min-ratio (family)";
        for (const auto& e : rep.entries)
          if (e.name == "min-ratio (series)") want = e.name;
      }
      for (const auto& e : rep.entries)
        if (e.name == want)
          return e.verdict == lll::Verdict::holds ? 0 : 1;
      std::fprintf(stderr, "error: no criterion named '%s' in this report\n",
                   want.c_str());
      return 3;
    }

    const lll::SolveOutcome res = lll::run_solve(problem, cfg);
    std::printf(
        "%d trials, %d succeeded, %d verified; step cap %lld; "
        "mean steps %.2f; solver wall %.1f ms\n",
        cfg.trials, res.success_count, res.verified_count,
        static_cast<long long>(res.step_cap_used),
        [&] {
          double s = 0;
          for (const auto& r : res.rows) s += static_cast<double>(r.steps);
          return s / cfg.trials;
        }(),
        res.total_wall_ms);
    if (cmd_solve->parsed() && !cfg.out.empty()) {
      lll::write_file(cfg.out + ".csv", res.csv);
      lll::write_file(cfg.out + ".meta.json", res.sidecar_json);
      if (res.solution)
        lll::write_file(cfg.out + ".solution.txt",
                        serialize_solution(*res.solution));
    }
    if (cmd_bench->parsed()) return 0;
    if (res.success_count < cfg.trials ||
        res.verified_count < res.success_count)
      return 2;
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
