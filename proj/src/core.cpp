#include "lll/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace lll {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::vector<AtomId> sorted_unique(std::vector<AtomId> atoms) {
  std::sort(atoms.begin(), atoms.end());
  require(std::adjacent_find(atoms.begin(), atoms.end()) == atoms.end(),
          "event support contains a repeated atom");
  return atoms;
}

// Common uniform domain size over the given atoms; 0 if mixed or weighted.
int uniform_support_k(const std::vector<AtomId>& atoms,
                      const std::vector<Domain>& domains) {
  int k = 0;
  for (AtomId a : atoms) {
    if (a < 0 || a >= static_cast<int>(domains.size())) return 0;
    const Domain& d = domains[a];
    if (!d.uniform()) return 0;
    if (k == 0) k = d.size;
    if (d.size != k) return 0;
  }
  return k;
}

}  // namespace

int Event::support_index(AtomId x) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), x);
  if (it == support_.end() || *it != x) return -1;
  return static_cast<int>(it - support_.begin());
}

std::span<const AtomId> Event::seed_for(AtomId x) const {
  int i = support_index(x);
  require(i >= 0, "seed_for: atom not in event support");
  return seeds_[i];
}

std::span<const AtomId> Event::resample_set(AtomId x) const {
  int i = support_index(x);
  require(i >= 0, "resample_set: atom not in event support");
  return resample_[i];
}

bool Event::eval(const Configuration& c) const {
  switch (kind_) {
    case EventKind::elementary:
      for (size_t i = 0; i < support_.size(); ++i)
        if (c[support_[i]] != values_[i]) return false;
      return true;
    case EventKind::extension: {
      std::vector<int> key(support_.size());
      for (size_t i = 0; i < support_.size(); ++i) key[i] = c[support_[i]];
      return std::binary_search(configs_.begin(), configs_.end(), key);
    }
    case EventKind::monochromatic: {
      int v = c[support_[0]];
      for (size_t i = 1; i < support_.size(); ++i)
        if (c[support_[i]] != v) return false;
      return true;
    }
    case EventKind::repetitive: {
      size_t n = sequence_.size() / 2;
      for (size_t i = 0; i < n; ++i)
        if (c[sequence_[i]] != c[sequence_[i + n]]) return false;
      return true;
    }
    case EventKind::predicate:
      return fn_(c);
  }
  return false;
}

bool Event::occurs(const Configuration& c) const {
  for (AtomId a : support_)
    require(c.assigned(a), "occurs: partial configuration on event support");
  return eval(c);
}

bool Event::occurs_if_assigned(const Configuration& c) const {
  for (AtomId a : support_)
    if (!c.assigned(a)) return false;
  return eval(c);
}

void Event::set_seeds(std::vector<std::vector<AtomId>> seeds_by_index,
                      int kappa) {
  seeds_ = std::move(seeds_by_index);
  kappa_ = kappa;
  tidy_ = true;
}

void Event::finalize() {
  require(!support_.empty(), "event support is empty");
  if (seeds_.empty()) seeds_.assign(support_.size(), {});
  require(seeds_.size() == support_.size(), "seed rule size mismatch");
  resample_.assign(support_.size(), {});
  for (size_t i = 0; i < support_.size(); ++i) {
    std::vector<AtomId>& s = seeds_[i];
    std::sort(s.begin(), s.end());
    int expect = tidy_ ? kappa_ : 0;
    require(static_cast<int>(s.size()) == expect,
            "seed size differs from declared kappa");
    for (AtomId y : s) {
      require(y != support_[i], "seed contains its own atom");
      require(support_index(y) >= 0, "seed atom outside event support");
    }
    // resample set = support \ seed; power3: its size equals power()
    std::set_difference(support_.begin(), support_.end(), s.begin(), s.end(),
                        std::back_inserter(resample_[i]));
  }
  require(kappa_ >= 0 && kappa_ < static_cast<int>(support_.size()),
          "kappa out of range");
}

Event Event::elementary(EventId id, std::vector<AtomId> atoms,
                        std::vector<int> values) {
  require(atoms.size() == values.size(), "elementary: atom/value mismatch");
  std::vector<size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return atoms[a] < atoms[b]; });
  Event ev;
  ev.id_ = id;
  ev.kind_ = EventKind::elementary;
  for (size_t i : order) {
    ev.support_.push_back(atoms[i]);
    ev.values_.push_back(values[i]);
  }
  require(std::adjacent_find(ev.support_.begin(), ev.support_.end()) ==
              ev.support_.end(),
          "event support contains a repeated atom");
  ev.tidy_ = true;  // kappa = 0 by definition
  ev.kappa_ = 0;
  ev.finalize();
  return ev;
}

Event Event::extension(EventId id, std::vector<AtomId> atoms,
                       std::vector<std::vector<int>> configs,
                       const std::vector<Domain>& domains) {
  std::vector<size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return atoms[a] < atoms[b]; });
  Event ev;
  ev.id_ = id;
  ev.kind_ = EventKind::extension;
  for (size_t i : order) ev.support_.push_back(atoms[i]);
  require(std::adjacent_find(ev.support_.begin(), ev.support_.end()) ==
              ev.support_.end(),
          "event support contains a repeated atom");
  for (const auto& cfg : configs) {
    require(cfg.size() == atoms.size(), "extension: config width mismatch");
    std::vector<int> row(cfg.size());
    for (size_t i = 0; i < order.size(); ++i) row[i] = cfg[order[i]];
    ev.configs_.push_back(std::move(row));
  }
  std::sort(ev.configs_.begin(), ev.configs_.end());
  ev.configs_.erase(std::unique(ev.configs_.begin(), ev.configs_.end()),
                    ev.configs_.end());

  // Canonical seed rule, available in the uniform common-size setting:
  // a subset X of the support is a seed iff the restriction of the
  // configuration list to X is a bijection onto [k]^X; per support atom we
  // pick the lexicographically smallest seed avoiding it.
  const int d = static_cast<int>(ev.support_.size());
  const int k = uniform_support_k(ev.support_, domains);
  const std::int64_t n = static_cast<std::int64_t>(ev.configs_.size());
  if (k > 0 && n >= 1) {
    if (n == 1) {
      ev.tidy_ = true;
      ev.kappa_ = 0;
    } else {
      int kappa = -1;
      std::int64_t pw = 1;
      for (int c = 1; c < d; ++c) {
        pw *= k;
        if (pw == n) {
          kappa = c;
          break;
        }
        if (pw > n) break;
      }
      if (kappa > 0) {
        auto projection_onto = [&](const std::vector<int>& idx) {
          std::vector<std::int64_t> keys;
          keys.reserve(ev.configs_.size());
          for (const auto& cfg : ev.configs_) {
            std::int64_t key = 0;
            for (int j : idx) key = key * k + cfg[j];
            keys.push_back(key);
          }
          std::sort(keys.begin(), keys.end());
          keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
          return static_cast<std::int64_t>(keys.size());
        };
        std::vector<std::vector<AtomId>> seeds(d);
        bool all_found = true;
        for (int i = 0; i < d && all_found; ++i) {
          // indices != i, chosen kappa at a time in lexicographic order
          std::vector<int> pool;
          for (int j = 0; j < d; ++j)
            if (j != i) pool.push_back(j);
          std::vector<int> pick(kappa);
          std::iota(pick.begin(), pick.end(), 0);
          bool found = false;
          while (true) {
            std::vector<int> idx;
            for (int p : pick) idx.push_back(pool[p]);
            if (projection_onto(idx) == n) {
              for (int j : idx) seeds[i].push_back(ev.support_[j]);
              found = true;
              break;
            }
            // next combination
            int pos = kappa - 1;
            while (pos >= 0 &&
                   pick[pos] == static_cast<int>(pool.size()) - kappa + pos)
              --pos;
            if (pos < 0) break;
            ++pick[pos];
            for (int j = pos + 1; j < kappa; ++j) pick[j] = pick[j - 1] + 1;
          }
          all_found = found;
        }
        if (all_found) ev.set_seeds(std::move(seeds), kappa);
      }
    }
  }
  ev.finalize();
  return ev;
}

Event Event::monochromatic(EventId id, std::vector<AtomId> atoms) {
  require(atoms.size() >= 2, "monochromatic event needs at least two atoms");
  Event ev;
  ev.id_ = id;
  ev.kind_ = EventKind::monochromatic;
  ev.support_ = sorted_unique(std::move(atoms));
  std::vector<std::vector<AtomId>> seeds(ev.support_.size());
  for (size_t i = 0; i < ev.support_.size(); ++i)
    seeds[i] = {i == 0 ? ev.support_[1] : ev.support_[0]};
  ev.set_seeds(std::move(seeds), 1);
  ev.finalize();
  return ev;
}

Event Event::repetitive(EventId id, std::vector<AtomId> sequence) {
  require(sequence.size() >= 2 && sequence.size() % 2 == 0,
          "repetitive event needs an even sequence of at least two atoms");
  Event ev;
  ev.id_ = id;
  ev.kind_ = EventKind::repetitive;
  ev.sequence_ = sequence;
  ev.support_ = sorted_unique(std::move(sequence));
  const size_t n = ev.sequence_.size() / 2;
  std::vector<AtomId> first(ev.sequence_.begin(), ev.sequence_.begin() + n);
  std::vector<AtomId> second(ev.sequence_.begin() + n, ev.sequence_.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  std::vector<std::vector<AtomId>> seeds(ev.support_.size());
  for (size_t i = 0; i < ev.support_.size(); ++i) {
    bool in_first = std::binary_search(first.begin(), first.end(), ev.support_[i]);
    seeds[i] = in_first ? second : first;
  }
  ev.set_seeds(std::move(seeds), static_cast<int>(n));
  ev.finalize();
  return ev;
}

Event Event::predicate(EventId id, std::vector<AtomId> atoms, Predicate fn,
                       std::vector<std::pair<AtomId, std::vector<AtomId>>> seeds,
                       int kappa, std::optional<double> probability) {
  Event ev;
  ev.id_ = id;
  ev.kind_ = EventKind::predicate;
  ev.support_ = sorted_unique(std::move(atoms));
  ev.fn_ = std::move(fn);
  ev.prob_ = probability;
  if (!seeds.empty()) {
    require(seeds.size() == ev.support_.size(),
            "predicate: seed rule must cover every support atom");
    std::vector<std::vector<AtomId>> by_index(ev.support_.size());
    for (auto& [atom, seed] : seeds) {
      int i = ev.support_index(atom);
      require(i >= 0, "predicate: seed rule names atom outside support");
      by_index[i] = std::move(seed);
    }
    ev.set_seeds(std::move(by_index), kappa);
  } else {
    require(kappa == 0, "predicate: nonzero kappa without a seed rule");
  }
  ev.finalize();
  return ev;
}

Instance::Instance(std::vector<Domain> domains, std::vector<Event> events)
    : domains_(std::move(domains)), events_(std::move(events)) {
  require(!domains_.empty(), "instance needs at least one atom");
  for (const Domain& d : domains_) {
    require(d.size >= 1, "domain size must be positive");
    if (!d.weights.empty()) {
      require(static_cast<int>(d.weights.size()) == d.size,
              "domain weights length differs from size");
      double sum = 0;
      for (double w : d.weights) {
        require(w >= 0, "domain weight negative");
        sum += w;
      }
      require(std::abs(sum - 1.0) <= 1e-12, "domain weights must sum to 1");
    }
  }
  uniform_ = true;
  k_ = domains_[0].size;
  for (const Domain& d : domains_)
    if (!d.uniform() || d.size != k_) {
      uniform_ = false;
      k_ = 0;
      break;
    }
  const int m = atom_count();
  by_atom_.assign(m, {});
  for (int e = 0; e < event_count(); ++e) {
    const Event& ev = events_[e];
    require(ev.id() == e, "event ids must be dense and match their position");
    for (AtomId a : ev.support()) {
      require(a >= 0 && a < m, "event support atom out of range");
      by_atom_[a].push_back(e);
    }
    if (ev.kind() == EventKind::elementary) {
      for (size_t i = 0; i < ev.support().size(); ++i) {
        int v = ev.elementary_values()[i];
        require(v >= 0 && v < domains_[ev.support()[i]].size,
                "elementary value outside domain");
      }
    }
    if (ev.kind() == EventKind::extension) {
      for (const auto& cfg : ev.extension_configs())
        for (size_t i = 0; i < ev.support().size(); ++i)
          require(cfg[i] >= 0 && cfg[i] < domains_[ev.support()[i]].size,
                  "extension value outside domain");
    }
  }
}

double event_probability(const Event& ev, const Instance& inst,
                         std::int64_t enumeration_cap) {
  if (ev.closed_form_probability()) return *ev.closed_form_probability();
  const auto& supp = ev.support();
  switch (ev.kind()) {
    case EventKind::elementary: {
      double p = 1;
      for (size_t i = 0; i < supp.size(); ++i)
        p *= inst.domain(supp[i]).weight(ev.elementary_values()[i]);
      return p;
    }
    case EventKind::extension: {
      double p = 0;
      for (const auto& cfg : ev.extension_configs()) {
        double q = 1;
        for (size_t i = 0; i < supp.size(); ++i)
          q *= inst.domain(supp[i]).weight(cfg[i]);
        p += q;
      }
      return p;
    }
    case EventKind::monochromatic: {
      int vmax = inst.domain(supp[0]).size;
      for (AtomId a : supp) vmax = std::min(vmax, inst.domain(a).size);
      double p = 0;
      for (int v = 0; v < vmax; ++v) {
        double q = 1;
        for (AtomId a : supp) q *= inst.domain(a).weight(v);
        p += q;
      }
      return p;
    }
    case EventKind::repetitive: {
      const auto& seq = ev.sequence();
      const size_t n = seq.size() / 2;
      double p = 1;
      for (size_t i = 0; i < n; ++i) {
        const Domain& da = inst.domain(seq[i]);
        const Domain& db = inst.domain(seq[i + n]);
        int vmax = std::min(da.size, db.size);
        double q = 0;
        for (int v = 0; v < vmax; ++v) q += da.weight(v) * db.weight(v);
        p *= q;
      }
      return p;
    }
    case EventKind::predicate: {
      if (ev.tidy() && inst.uniform())
        return std::pow(static_cast<double>(inst.k()), -ev.power());
      std::int64_t total = 1;
      for (AtomId a : supp) {
        total *= inst.domain(a).size;
        if (total > enumeration_cap)
          throw std::runtime_error(
              "event_probability: support too large to enumerate");
      }
      Configuration scratch(inst.atom_count());
      double p = 0;
      std::vector<int> odo(supp.size(), 0);
      for (AtomId a : supp) scratch[a] = 0;
      while (true) {
        if (ev.occurs_if_assigned(scratch)) {
          double q = 1;
          for (size_t i = 0; i < supp.size(); ++i)
            q *= inst.domain(supp[i]).weight(odo[i]);
          p += q;
        }
        size_t pos = 0;
        while (pos < supp.size()) {
          if (++odo[pos] < inst.domain(supp[pos]).size) {
            scratch[supp[pos]] = odo[pos];
            break;
          }
          odo[pos] = 0;
          scratch[supp[pos]] = 0;
          ++pos;
        }
        if (pos == supp.size()) break;
      }
      return p;
    }
  }
  return 0;
}

DependencyGraph natural_dependency_graph(const Instance& inst) {
  DependencyGraph g;
  g.adj.assign(inst.event_count(), {});
  std::vector<int> stamp(inst.event_count(), -1);
  for (int e = 0; e < inst.event_count(); ++e) {
    for (AtomId a : inst.event(e).support())
      for (EventId f : inst.events_containing(a))
        if (f != e && stamp[f] != e) {
          stamp[f] = e;
          g.adj[e].push_back(f);
        }
    std::sort(g.adj[e].begin(), g.adj[e].end());
  }
  return g;
}

}  // namespace lll
