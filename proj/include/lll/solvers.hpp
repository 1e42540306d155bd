// Randomized solvers.
//
// moser_tardos_resampling: sample everything, then repeatedly resample the
// whole support of the smallest occurring event.
//
// forest_algorithm: seed-aware variant. A step hit at atom x on event e
// resamples only supp(e) \ S_x(e), then recursively clears bad atoms inside
// that resampled set before returning; top-level calls are phases. The step
// record is the input the witness module builds its forests from.
//
// entropy_compression: colors atoms one at a time with the next entry of a
// random (or supplied) value sequence; when a flaw appears it uncolors the
// flaw's support minus the seed avoiding the just-colored atom. Uniform
// instances only.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lll/core.hpp"
#include "lll/rng.hpp"

namespace lll {

struct Record {
  std::vector<std::pair<AtomId, EventId>> steps;
  std::vector<int> phase_starts;  // indices into steps; first is 0
  std::uint64_t rng_seed = 0;
  bool terminated = false;  // false when the step cap cut the run short

  int phases() const { return static_cast<int>(phase_starts.size()); }
};

std::string serialize_record(const Record& rec);
Record parse_record(const std::string& text);

struct RunStats {
  std::int64_t steps = 0;
  int phases = 0;
  double wall_ms = 0;
  bool success = false;
};

struct MtResult {
  Configuration config;
  RunStats stats;
};
MtResult moser_tardos_resampling(const Instance& inst, Rng& rng,
                                 std::int64_t step_cap);

// Test instrumentation: called with the pair and the configuration right
// before its resample (on_call) and right after its recursion finished
// (on_return).
struct ForestHooks {
  std::function<void(AtomId, EventId, const Configuration&)> on_call;
  std::function<void(AtomId, EventId, const Configuration&)> on_return;
};

struct ForestResult {
  Configuration config;
  Record record;
  RunStats stats;
};
ForestResult forest_algorithm(const Instance& inst, Rng& rng,
                              std::int64_t step_cap,
                              const ForestHooks* hooks = nullptr);

struct EcStep {
  AtomId colored = -1;
  int color = -1;
  EventId flaw = -1;                // -1: kept
  std::vector<AtomId> uncolored;    // flaw support minus its seed
};
struct EcResult {
  bool success = false;
  Configuration config;
  std::vector<EcStep> trace;
  std::int64_t steps_used = 0;
  int backtracks = 0;
};
// Random value sequence of length t, drawn from rng as consumed.
EcResult entropy_compression(const Instance& inst, Rng& rng, std::int64_t t);
// Deterministic variant: the value sequence is supplied (t = entries size).
EcResult entropy_compression_fixed(const Instance& inst,
                                   std::span<const int> entries);

// Atoms lying in the support of at least one occurring event.
std::vector<AtomId> bad_atoms(const Instance& inst, const Configuration& c);

// One draw from a domain (uniform or weighted).
int sample_value(const Domain& d, Rng& rng);

}  // namespace lll
