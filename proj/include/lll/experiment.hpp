// Experiment orchestration: JSON run configs, problem assembly from spec
// files, parallel solver trials with deterministic CSV output, criterion
// reports, and the color-bound tables.
//
// Determinism contract: for a fixed config (including the master seed) the
// CSV and the metadata sidecar are byte-identical across runs and thread
// counts; trial i always draws from Rng::stream(seed, i). Timing is
// reported separately and never serialized.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lll/apps.hpp"
#include "lll/core.hpp"
#include "lll/criteria.hpp"
#include "lll/solvers.hpp"

namespace lll {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentConfig {
  std::string application;  // nonrepetitive | facial-thue | frugal | instance
  std::string graph_path;
  std::string faces_path;
  std::string lists_path;
  std::string instance_path;
  int k = 0;
  int beta = 1;
  int l_max = 1;
  std::string solver = "forest";  // forest | mt | ec
  int trials = 1;
  std::uint64_t seed = 0;
  std::int64_t step_cap = 0;  // 0: derived from the step threshold
  std::string out;            // output path prefix; empty: no files
  int threads = 0;            // 0: hardware concurrency
};

// Throws std::invalid_argument on malformed JSON or invalid fields.
ExperimentConfig parse_experiment_config(const std::string& json_text);

struct Problem {
  Instance instance;
  std::string application;
  int delta = 0;  // graph max degree (zero for raw instances)
  int k = 0;
  int beta = 1;
  int l_max = 1;
  std::function<bool(const Configuration&)> verify;  // independent oracle
};
// Reads the files the config references. Throws std::invalid_argument on
// unusable configs and propagates parse errors.
Problem build_problem(const ExperimentConfig& cfg);

struct ResultRow {
  int trial = 0;
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  int phases = 0;  // backtracks for the entropy-compression solver
  bool success = false;
  double wall_ms = 0;  // in-memory only, never serialized
  bool verified = false;
};

struct SolveOutcome {
  std::vector<ResultRow> rows;
  std::string csv;           // header + one row per trial
  std::string sidecar_json;  // version, seeds, tolerances, aggregates
  std::optional<Configuration> solution;  // first successful trial
  std::int64_t step_cap_used = 0;
  double total_wall_ms = 0;
  int success_count = 0;
  int verified_count = 0;
};
SolveOutcome run_solve(const Problem& p, const ExperimentConfig& cfg);

// Every applicable criterion on the instance: exact-family and full-series
// minimum ratio, entropy form, global condition (with q-form), independent-
// set / product / exponential weighted conditions, and the step threshold.
CriterionReport run_criteria(const Problem& p);

// Text table of the degree-based color bounds; frugal rows when beta given.
std::string bounds_table(int delta, std::optional<int> beta);

}  // namespace lll
