#include "lll/witness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace lll {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool contains(std::span<const AtomId> sorted, AtomId a) {
  return std::binary_search(sorted.begin(), sorted.end(), a);
}

void check_step(const std::pair<AtomId, EventId>& step, const Instance& inst) {
  auto [x, e] = step;
  if (e < 0 || e >= inst.event_count())
    throw std::invalid_argument("record step names an unknown event");
  if (!contains(inst.event(e).support(), x))
    throw std::invalid_argument("record step atom outside its event's support");
}

}  // namespace

WitnessForest build_forest(const Record& rec, const Instance& inst) {
  const int m = inst.atom_count();
  const int n = static_cast<int>(rec.steps.size());
  const auto& ps = rec.phase_starts;
  if (n == 0) {
    if (!ps.empty())
      throw std::invalid_argument("empty record cannot have phases");
  } else {
    if (ps.empty() || ps.front() != 0)
      throw std::invalid_argument("first phase must start at step 0");
    for (size_t p = 0; p + 1 < ps.size(); ++p)
      if (ps[p] >= ps[p + 1])
        throw std::invalid_argument("phases must be nonempty and ordered");
    if (ps.back() >= n)
      throw std::invalid_argument("phases must be nonempty and ordered");
  }

  WitnessForest f;
  f.internal_count = n;
  f.nodes.reserve(n + m);
  std::vector<int> root_of_atom(m, -1);
  AtomId prev_root = -1;

  for (size_t p = 0; p < ps.size(); ++p) {
    const int begin = ps[p];
    const int end = (p + 1 < ps.size()) ? ps[p + 1] : n;
    check_step(rec.steps[begin], inst);
    const auto [x0, e0] = rec.steps[begin];
    if (x0 <= prev_root)
      throw std::invalid_argument("phase root atoms must be strictly increasing");
    prev_root = x0;
    const int root = static_cast<int>(f.nodes.size());
    f.nodes.push_back({x0, e0, {}});
    root_of_atom[x0] = root;
    std::vector<int> path{root};
    for (int i = begin + 1; i < end; ++i) {
      check_step(rec.steps[i], inst);
      const auto [x, e] = rec.steps[i];
      int j = static_cast<int>(path.size()) - 1;
      while (j >= 0) {
        const ForestNode& anc = f.nodes[path[j]];
        if (contains(inst.event(anc.event).resample_set(anc.atom), x)) break;
        --j;
      }
      if (j < 0)
        throw std::invalid_argument(
            "record step attaches to no ancestor in its phase");
      const int v = static_cast<int>(f.nodes.size());
      f.nodes.push_back({x, e, {}});
      f.nodes[path[j]].children.push_back(v);
      path.resize(j + 1);
      path.push_back(v);
    }
  }

  // Pad every internal vertex with unlabeled leaves up to its event's power.
  for (int v = 0; v < n; ++v) {
    std::vector<AtomId> used;
    for (int c : f.nodes[v].children) used.push_back(f.nodes[c].atom);
    std::sort(used.begin(), used.end());
    const Event& ev = inst.event(f.nodes[v].event);
    for (AtomId y : ev.resample_set(f.nodes[v].atom)) {
      if (std::binary_search(used.begin(), used.end(), y)) continue;
      const int leaf = static_cast<int>(f.nodes.size());
      f.nodes.push_back({y, -1, {}});
      f.nodes[v].children.push_back(leaf);
    }
  }

  for (AtomId a = 0; a < m; ++a) {
    if (root_of_atom[a] < 0) {
      root_of_atom[a] = static_cast<int>(f.nodes.size());
      f.nodes.push_back({a, -1, {}});
    }
    f.roots.push_back(root_of_atom[a]);
  }
  return f;
}

Record record_from_forest(const WitnessForest& f) {
  Record rec;
  std::vector<int> stack;
  for (int r : f.roots) {
    if (!f.nodes[r].internal()) continue;
    rec.phase_starts.push_back(static_cast<int>(rec.steps.size()));
    stack.assign(1, r);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      const ForestNode& nd = f.nodes[v];
      if (!nd.internal()) continue;
      rec.steps.emplace_back(nd.atom, nd.event);
      for (auto it = nd.children.rbegin(); it != nd.children.rend(); ++it)
        stack.push_back(*it);
    }
  }
  return rec;
}

std::string WitnessForest::to_text() const {
  std::string out;
  char buf[96];
  std::vector<std::pair<int, int>> stack;  // node, depth
  for (size_t t = 0; t < roots.size(); ++t) {
    std::snprintf(buf, sizeof buf, "tree %zu\n", t);
    out += buf;
    stack.assign(1, {roots[t], 1});
    while (!stack.empty()) {
      const auto [v, depth] = stack.back();
      stack.pop_back();
      const ForestNode& nd = nodes[v];
      out.append(2 * depth, ' ');
      if (nd.internal())
        std::snprintf(buf, sizeof buf, "%d e%d\n", nd.atom, nd.event);
      else
        std::snprintf(buf, sizeof buf, "%d -\n", nd.atom);
      out += buf;
      for (auto it = nd.children.rbegin(); it != nd.children.rend(); ++it)
        stack.push_back({*it, depth + 1});
    }
  }
  return out;
}

std::vector<int> PropertyReport::violated() const {
  std::vector<int> out;
  if (!one_tree_per_atom) out.push_back(1);
  if (!child_in_parent_support) out.push_back(2);
  if (!label_shapes) out.push_back(3);
  if (!sibling_atoms_distinct) out.push_back(4);
  if (!child_count_is_power) out.push_back(5);
  return out;
}

PropertyReport check_properties(const WitnessForest& f, const Instance& inst) {
  PropertyReport rep;
  rep.one_tree_per_atom = static_cast<int>(f.roots.size()) == inst.atom_count();
  if (rep.one_tree_per_atom)
    for (AtomId a = 0; a < inst.atom_count(); ++a)
      if (f.nodes[f.roots[a]].atom != a) rep.one_tree_per_atom = false;

  rep.child_in_parent_support = true;
  rep.label_shapes = true;
  rep.sibling_atoms_distinct = true;
  rep.child_count_is_power = true;
  std::vector<AtomId> sib;
  for (const ForestNode& nd : f.nodes) {
    if (!nd.internal()) {
      if (!nd.children.empty()) rep.child_count_is_power = false;
      continue;
    }
    if (nd.event >= inst.event_count()) {
      rep.label_shapes = false;
      continue;
    }
    const Event& ev = inst.event(nd.event);
    if (!contains(ev.support(), nd.atom)) rep.label_shapes = false;
    if (static_cast<int>(nd.children.size()) != ev.power())
      rep.child_count_is_power = false;
    sib.clear();
    for (int c : nd.children) {
      sib.push_back(f.nodes[c].atom);
      if (!contains(ev.support(), f.nodes[c].atom))
        rep.child_in_parent_support = false;
    }
    std::sort(sib.begin(), sib.end());
    if (std::adjacent_find(sib.begin(), sib.end()) != sib.end())
      rep.sibling_atoms_distinct = false;
  }
  return rep;
}

UnlabeledForest strip_labels(const WitnessForest& f) {
  UnlabeledForest u;
  u.nodes.reserve(f.nodes.size());
  std::vector<std::pair<int, int>> stack;  // old node, new parent (-1: root)
  for (int r : f.roots) {
    stack.assign(1, {r, -1});
    while (!stack.empty()) {
      const auto [v, parent] = stack.back();
      stack.pop_back();
      const int id = static_cast<int>(u.nodes.size());
      u.nodes.push_back({});
      if (parent < 0)
        u.roots.push_back(id);
      else
        u.nodes[parent].children.push_back(id);
      const auto& kids = f.nodes[v].children;
      for (auto it = kids.rbegin(); it != kids.rend(); ++it)
        stack.push_back({*it, id});
    }
  }
  return u;
}

std::string UnlabeledForest::to_text() const {
  std::string out;
  std::vector<std::pair<int, size_t>> stack;  // node, next child slot
  for (int r : roots) {
    stack.assign(1, {r, 0});
    out += '(';
    while (!stack.empty()) {
      auto& [v, ci] = stack.back();
      if (ci < nodes[v].children.size()) {
        const int c = nodes[v].children[ci++];
        out += '(';
        stack.push_back({c, 0});
      } else {
        out += ')';
        stack.pop_back();
      }
    }
    out += '\n';
  }
  return out;
}

bool injectivity_probe(std::span<const Record> records, const Instance& inst) {
  std::unordered_map<std::string, size_t> seen;
  for (size_t i = 0; i < records.size(); ++i) {
    const WitnessForest f = build_forest(records[i], inst);
    const Record back = record_from_forest(f);
    if (back.steps != records[i].steps ||
        back.phase_starts != records[i].phase_starts)
      return false;
    auto [it, fresh] = seen.emplace(f.to_text(), i);
    if (!fresh && (records[it->second].steps != records[i].steps ||
                   records[it->second].phase_starts != records[i].phase_starts))
      return false;
  }
  return true;
}

bool s_check(const AdmissibleSequence& seq, const Instance& inst, Rng& rng) {
  for (const auto& step : seq) check_step(step, inst);
  Configuration cfg(inst.atom_count());
  for (AtomId a = 0; a < inst.atom_count(); ++a)
    cfg[a] = sample_value(inst.domain(a), rng);
  for (const auto& [x, e] : seq) {
    const Event& ev = inst.event(e);
    if (!ev.occurs(cfg)) return false;
    for (AtomId a : ev.resample_set(x))
      cfg[a] = sample_value(inst.domain(a), rng);
  }
  return true;
}

std::vector<double> q_log_sequence(
    const std::vector<std::pair<int, double>>& weights, int n_max) {
  int smax = 0;
  std::vector<std::pair<int, double>> lw;
  for (const auto& [s, w] : weights) {
    if (s < 1) throw std::invalid_argument("powers must be at least 1");
    if (w < 0) throw std::invalid_argument("weights must be nonnegative");
    if (w == 0) continue;
    lw.emplace_back(s, std::log(w));
    smax = std::max(smax, s);
  }
  std::vector<double> lq(n_max + 1, kNegInf);
  lq[0] = 0;
  if (n_max == 0 || lw.empty()) return lq;

  auto lse = [](double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
  };
  std::vector<std::vector<double>> pw(smax + 1,
                                      std::vector<double>(n_max, kNegInf));
  for (int n = 1; n <= n_max; ++n) {
    const int col = n - 1;
    pw[1][col] = lq[col];
    for (int j = 2; j <= smax; ++j) {
      double acc = kNegInf;
      for (int l = 0; l <= col; ++l) acc = lse(acc, pw[j - 1][l] + lq[col - l]);
      pw[j][col] = acc;
    }
    double total = kNegInf;
    for (const auto& [s, lwv] : lw) total = lse(total, lwv + pw[s][col]);
    lq[n] = total;
  }
  return lq;
}

std::vector<double> q_values(const std::vector<std::pair<int, double>>& weights,
                             int n_max) {
  if (n_max <= 200) return q_sequence<double>(weights, n_max);
  std::vector<double> lq = q_log_sequence(weights, n_max);
  for (double& v : lq) v = std::exp(v);
  return lq;
}

std::vector<std::pair<int, double>> spectrum_weights(const PowerSpectrum& spec) {
  if (spec.tail)
    throw std::invalid_argument("tree counting needs a finite power spectrum");
  std::vector<std::pair<int, double>> out;
  for (const auto& [s, t] : spec.terms) out.emplace_back(s, t.p * t.d);
  return out;
}

QBoundReport rho_bound_check(const PowerSpectrum& spec, int n_max) {
  QBoundReport rep;
  rep.max_excess = kNegInf;
  const bool empty = spec.terms.empty() && !spec.tail;
  rep.rho = empty ? 0.0 : min_ratio(spec).rho;
  rep.log_q =
      q_log_sequence(empty ? std::vector<std::pair<int, double>>{}
                           : spectrum_weights(spec),
                     n_max);
  const double tol = std::log1p(1e-9);
  rep.ok = true;
  for (int n = 0; n <= n_max; ++n) {
    if (rep.log_q[n] == kNegInf) continue;  // Q_n = 0 satisfies any bound
    const double bound = (n == 0) ? 0.0 : n * std::log(rep.rho);
    rep.max_excess = std::max(rep.max_excess, rep.log_q[n] - bound);
    if (!(rep.log_q[n] <= bound + tol)) rep.ok = false;
  }
  return rep;
}

}  // namespace lll
