// Witness forests: the canonical labeled forest recording one solver run.
//
// A run record maps to a forest of exactly m plane trees, one per atom,
// ordered by root atom. Each phase of the run becomes one tree: step i
// attaches below the deepest ancestor of the previous vertex whose resample
// set contains atom x_i. Unused atoms become isolated (atom, -) vertices, and
// every internal vertex (x, e) is padded with (y, -) leaves until it has
// exactly power(e) children, padding atoms in increasing order after the real
// children. Reading internal labels back in depth-first order, tree by tree,
// reproduces the record, which makes record -> forest an injection; the
// q-sequence below counts label-stripped forests and bounds the run-length
// distribution through rho from min_ratio.
#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lll/core.hpp"
#include "lll/criteria.hpp"
#include "lll/rng.hpp"
#include "lll/solvers.hpp"

namespace lll {

struct ForestNode {
  AtomId atom = -1;
  EventId event = -1;  // -1: unlabeled vertex (isolated root or padding leaf)
  std::vector<int> children;

  bool internal() const { return event >= 0; }
};

struct WitnessForest {
  std::vector<ForestNode> nodes;
  std::vector<int> roots;  // one per atom, in atom order
  int internal_count = 0;

  std::string to_text() const;  // indented labeled dump
};

// Builds the forest of a record. Throws std::invalid_argument when the record
// cannot have come from this instance (atom outside the chosen event's
// support, phase root atoms not strictly increasing, or a step whose atom lies
// in no ancestor's resample set).
WitnessForest build_forest(const Record& rec, const Instance& inst);

// Inverse direction: depth-first read-back of internal labels, one phase per
// internally-rooted tree. Only steps and phase starts are reconstructed.
Record record_from_forest(const WitnessForest& f);

// Structural properties every built forest must satisfy.
struct PropertyReport {
  bool one_tree_per_atom = false;      // m trees, roots in atom order
  bool child_in_parent_support = false;
  bool label_shapes = false;           // internal: atom in own support; leaf: no event
  bool sibling_atoms_distinct = false;
  bool child_count_is_power = false;   // internal degree == power; leaves childless

  bool all() const {
    return one_tree_per_atom && child_in_parent_support && label_shapes &&
           sibling_atoms_distinct && child_count_is_power;
  }
  std::vector<int> violated() const;  // 1-based property numbers
};
PropertyReport check_properties(const WitnessForest& f, const Instance& inst);

// Forest with all labels removed: plane trees, vertices numbered in
// depth-first order per tree, so equal shapes compare equal.
struct UnlabeledForest {
  struct Node {
    std::vector<int> children;
  };
  std::vector<Node> nodes;
  std::vector<int> roots;

  bool operator==(const UnlabeledForest& o) const {
    if (roots != o.roots || nodes.size() != o.nodes.size()) return false;
    for (size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].children != o.nodes[i].children) return false;
    return true;
  }
  std::string to_text() const;  // one parenthesized shape per tree, per line
};
UnlabeledForest strip_labels(const WitnessForest& f);

// True when distinct records map to distinct forests (and every record
// round-trips through its forest).
bool injectivity_probe(std::span<const Record> records, const Instance& inst);

// Steps an admissible sequence against a fresh sample: at step i the event
// must occur, and then supp minus the seed at its atom is resampled. Returns
// true when every step saw its event occur. Throws std::invalid_argument on
// an inadmissible sequence (atom outside its event's support).
using AdmissibleSequence = std::vector<std::pair<AtomId, EventId>>;
bool s_check(const AdmissibleSequence& seq, const Instance& inst, Rng& rng);

// Weighted count of label-stripped trees with n internal vertices:
//   Q_0 = 1,   Q_n = sum_s w_s * sum_{n_1+...+n_s = n-1} prod_i Q_{n_i},
// over a finite list of (power s >= 1, weight w_s). Num needs Num(int),
// +=, and *.
template <class Num>
std::vector<Num> q_sequence(const std::vector<std::pair<int, Num>>& weights,
                            int n_max) {
  int smax = 0;
  for (const auto& [s, w] : weights) {
    if (s < 1) throw std::invalid_argument("powers must be at least 1");
    smax = std::max(smax, s);
  }
  std::vector<Num> q(n_max + 1, Num(0));
  q[0] = Num(1);
  if (n_max == 0 || weights.empty()) return q;
  // pw[j][i]: coefficient of z^i in (sum q_n z^n)^j, filled column by column;
  // column n-1 only ever uses q_0..q_{n-1}.
  std::vector<std::vector<Num>> pw(smax + 1, std::vector<Num>(n_max, Num(0)));
  for (int n = 1; n <= n_max; ++n) {
    const int col = n - 1;
    pw[1][col] = q[col];
    for (int j = 2; j <= smax; ++j) {
      Num acc(0);
      for (int l = 0; l <= col; ++l) acc += pw[j - 1][l] * q[col - l];
      pw[j][col] = acc;
    }
    Num total(0);
    for (const auto& [s, w] : weights) total += w * pw[s][col];
    q[n] = total;
  }
  return q;
}

// log Q_n for positive weights; stays finite where the plain sequence would
// leave double range. Zero-weight entries are dropped.
std::vector<double> q_log_sequence(
    const std::vector<std::pair<int, double>>& weights, int n_max);

// Q_0..Q_n as doubles; switches to the log-space evaluation beyond n = 200.
std::vector<double> q_values(const std::vector<std::pair<int, double>>& weights,
                             int n_max);

// Finite (s, p_s * d_s) weight list of a spectrum; throws on a tail.
std::vector<std::pair<int, double>> spectrum_weights(const PowerSpectrum& spec);

// Checks Q_n <= rho^n (1 + 1e-9) for n = 0..n_max, rho from min_ratio.
struct QBoundReport {
  double rho = 0;
  std::vector<double> log_q;
  double max_excess = 0;  // max over n of log Q_n - n log rho
  bool ok = false;
};
QBoundReport rho_bound_check(const PowerSpectrum& spec, int n_max);

}  // namespace lll
