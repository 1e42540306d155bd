// Core model: atoms, domains, configurations, events, instances.
//
// An instance is a finite set of atoms (variables) 0..m-1, one finite value
// domain per atom (uniform or explicitly weighted), and an ordered list of
// events. An event occurs on a configuration when the values of its support
// atoms satisfy its predicate. Events carry an optional seed rule: for each
// support atom x, a subset S_x of the support (never containing x) that a
// resampling step may keep fixed. Events with a full seed rule of constant
// seed size kappa are called tidy; their resampling power is
// |support| - kappa, otherwise it is |support|.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lll {

using AtomId = int;
using EventId = int;

constexpr int kUnassigned = -1;

// Value domain of one atom. Empty weights = uniform over {0..size-1}.
struct Domain {
  int size = 0;
  std::vector<double> weights;

  bool uniform() const { return weights.empty(); }
  double weight(int value) const {
    return weights.empty() ? 1.0 / size : weights[value];
  }
};

// Assignment of values to atoms; kUnassigned marks uncolored atoms.
// Total configurations have every atom assigned; partial ones are used by
// the entropy-compression solver.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(int atom_count, int fill = kUnassigned)
      : values_(atom_count, fill) {}

  int size() const { return static_cast<int>(values_.size()); }
  int operator[](AtomId a) const { return values_[a]; }
  int& operator[](AtomId a) { return values_[a]; }
  bool assigned(AtomId a) const { return values_[a] != kUnassigned; }
  bool total() const {
    for (int v : values_)
      if (v == kUnassigned) return false;
    return true;
  }
  const std::vector<int>& values() const { return values_; }
  bool operator==(const Configuration&) const = default;

 private:
  std::vector<int> values_;
};

enum class EventKind { elementary, extension, monochromatic, repetitive, predicate };

// One event. Construct through the static factories; each validates its
// shape and fixes the seed rule. Supports are stored sorted by atom id.
class Event {
 public:
  using Predicate = std::function<bool(const Configuration&)>;

  // Exactly one configuration of the support (atoms/values given in
  // parallel, any order).
  static Event elementary(EventId id, std::vector<AtomId> atoms,
                          std::vector<int> values);

  // Explicit list of occurring configurations, each aligned with `atoms`.
  // Under uniform common-size domains the seed rule is derived canonically
  // (lexicographically smallest valid seed per atom); otherwise the event
  // is left non-tidy.
  static Event extension(EventId id, std::vector<AtomId> atoms,
                         std::vector<std::vector<int>> configs,
                         const std::vector<Domain>& domains);

  // All support atoms take equal values. Seed per atom: the smallest other
  // support atom (kappa = 1).
  static Event monochromatic(EventId id, std::vector<AtomId> atoms);

  // Sequence a_1..a_2n of distinct atoms; occurs when value(a_i) ==
  // value(a_{i+n}) for all i. Seed per atom: the half not containing it.
  static Event repetitive(EventId id, std::vector<AtomId> sequence);

  // Arbitrary predicate with an encoder-declared seed rule. `seeds` maps
  // each support atom to its seed (pass an empty map for a non-tidy
  // event); `probability` is the exact occurrence probability if known in
  // closed form.
  static Event predicate(EventId id, std::vector<AtomId> atoms, Predicate fn,
                         std::vector<std::pair<AtomId, std::vector<AtomId>>> seeds,
                         int kappa, std::optional<double> probability);

  EventId id() const { return id_; }
  EventKind kind() const { return kind_; }
  const std::vector<AtomId>& support() const { return support_; }
  int support_size() const { return static_cast<int>(support_.size()); }

  bool tidy() const { return tidy_; }
  int kappa() const { return kappa_; }
  // Resampling power: |support| - kappa (kappa = 0 for elementary and
  // non-tidy events, so power = |support| there).
  int power() const { return static_cast<int>(support_.size()) - kappa_; }

  // Seed S_x for a support atom x; empty for elementary/non-tidy events.
  // Throws std::invalid_argument if x is not in the support.
  std::span<const AtomId> seed_for(AtomId x) const;

  // Complement support \ S_x: the atoms a resampling step touches when the
  // event is hit at x. Always has exactly power() elements.
  std::span<const AtomId> resample_set(AtomId x) const;

  // Occurrence on a configuration assigning every support atom. Throws
  // std::invalid_argument if some support atom is unassigned.
  bool occurs(const Configuration& c) const;

  // Non-throwing variant for partial configurations: false unless the
  // whole support is assigned and the predicate holds.
  bool occurs_if_assigned(const Configuration& c) const;

  std::optional<double> closed_form_probability() const { return prob_; }

  // Kind-specific accessors used by serialization.
  const std::vector<int>& elementary_values() const { return values_; }
  const std::vector<std::vector<int>>& extension_configs() const { return configs_; }
  const std::vector<AtomId>& sequence() const { return sequence_; }

 private:
  Event() = default;
  int support_index(AtomId x) const;  // -1 if absent
  bool eval(const Configuration& c) const;
  void set_seeds(std::vector<std::vector<AtomId>> seeds_by_index, int kappa);
  void finalize();  // builds resample sets, checks seed invariants

  EventId id_ = -1;
  EventKind kind_ = EventKind::predicate;
  std::vector<AtomId> support_;  // sorted
  bool tidy_ = false;
  int kappa_ = 0;
  std::vector<std::vector<AtomId>> seeds_;     // per support index, sorted
  std::vector<std::vector<AtomId>> resample_;  // support \ seed, per index
  std::optional<double> prob_;

  std::vector<int> values_;                 // elementary
  std::vector<std::vector<int>> configs_;   // extension, sorted lexicographically
  std::vector<AtomId> sequence_;            // repetitive
  Predicate fn_;                            // predicate
};

// Event-intersection graph: vertices are event ids, edges join events whose
// supports intersect (each event is implicitly adjacent to itself; adj
// lists exclude the self loop).
struct DependencyGraph {
  std::vector<std::vector<EventId>> adj;
  int size() const { return static_cast<int>(adj.size()); }
};

class Instance {
 public:
  // Validates domains, event ids (dense, equal to position), supports and
  // explicit values; builds the atom -> events index.
  Instance(std::vector<Domain> domains, std::vector<Event> events);

  int atom_count() const { return static_cast<int>(domains_.size()); }
  int event_count() const { return static_cast<int>(events_.size()); }
  const Domain& domain(AtomId a) const { return domains_[a]; }
  const std::vector<Domain>& domains() const { return domains_; }
  const Event& event(EventId e) const { return events_[e]; }
  const std::vector<Event>& events() const { return events_; }

  // Events whose support contains the atom, ascending by id.
  const std::vector<EventId>& events_containing(AtomId a) const {
    return by_atom_[a];
  }

  // Uniform setting: every domain is uniform and all share one size.
  bool uniform() const { return uniform_; }
  int k() const { return k_; }  // common domain size; 0 when not uniform

 private:
  std::vector<Domain> domains_;
  std::vector<Event> events_;
  std::vector<std::vector<EventId>> by_atom_;
  bool uniform_ = false;
  int k_ = 0;
};

// Exact occurrence probability of one event under the instance's product
// measure. Uses the closed form when the event carries one, exact kind
// formulas otherwise, and falls back to support enumeration for raw
// predicate events (throws std::runtime_error when the product of domain
// sizes exceeds `enumeration_cap`).
double event_probability(const Event& ev, const Instance& inst,
                         std::int64_t enumeration_cap = 1 << 20);

// Natural dependency graph: events are adjacent iff supports intersect.
DependencyGraph natural_dependency_graph(const Instance& inst);

}  // namespace lll
