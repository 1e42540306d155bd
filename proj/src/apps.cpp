#include "lll/apps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>

namespace lll {

namespace {

// Dedup key of a matched even sequence: sorted atom set, then the matched
// pairs {a_i, a_{i+n}} canonicalized and sorted.
std::vector<long long> matching_key(const std::vector<int>& seq) {
  const int n = static_cast<int>(seq.size()) / 2;
  std::vector<long long> key(seq.begin(), seq.end());
  std::sort(key.begin(), key.end());
  key.push_back(-1);
  std::vector<long long> pairs;
  for (int i = 0; i < n; ++i) {
    const long long a = std::min(seq[i], seq[i + n]);
    const long long b = std::max(seq[i], seq[i + n]);
    pairs.push_back((a << 32) | b);
  }
  std::sort(pairs.begin(), pairs.end());
  key.insert(key.end(), pairs.begin(), pairs.end());
  return key;
}

double g_defining(double b) {
  const double t = 8 * b + 9;
  return (std::sqrt(t * t * t) + 8 * b * b + 36 * b + 27) / (8 * b * b * b);
}

// Everything in nonrepetitive_bounds, with a real-valued degree so the
// crossover can be located continuously.
NonrepetitiveBounds bounds_at(double delta) {
  NonrepetitiveBounds out;
  double lo = 1e-12, hi = 1;
  while (g_defining(hi) > delta) hi *= 2;
  for (int it = 0; it < 300 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g_defining(mid) > delta ? lo : hi) = mid;
  }
  out.b0 = 0.5 * (lo + hi);
  out.residual = std::abs(g_defining(out.b0) - delta);
  out.xi0 = nonrepetitive_xi0(out.b0);
  out.pi_bound = (1 + out.b0) * delta * delta;
  if (delta > 2) {
    const double cr2 = std::cbrt(4.0);  // 2^(2/3)
    out.comparison_bound =
        delta * delta +
        std::pow(delta, 1.5) *
            (3 / cr2 + cr2 / (std::cbrt(delta) - std::cbrt(2.0)));
  }
  return out;
}

}  // namespace

Instance build_nonrepetitive_instance(const NonrepetitiveSpec& spec) {
  if (spec.k < 1) throw std::invalid_argument("color count must be positive");
  if (spec.L_max < 1)
    throw std::invalid_argument("path length bound must be positive");
  std::vector<Domain> domains(spec.graph.size(), Domain{spec.k, {}});
  std::vector<Event> events;
  std::set<std::vector<long long>> seen;
  for (int n = 1; n <= spec.L_max; ++n)
    for (const auto& path : even_paths(spec.graph, n)) {
      if (!seen.insert(matching_key(path)).second) continue;
      events.push_back(
          Event::repetitive(static_cast<EventId>(events.size()), path));
    }
  return Instance(std::move(domains), std::move(events));
}

Instance build_facial_thue_instance(const FacialThueSpec& spec) {
  if (spec.k < 1) throw std::invalid_argument("list size must be positive");
  if (spec.L_max < 1)
    throw std::invalid_argument("path length bound must be positive");
  const auto edge_list = spec.graph.edges();
  if (spec.lists.size() != edge_list.size())
    throw std::invalid_argument("need exactly one color list per edge");
  for (const auto& l : spec.lists)
    if (static_cast<int>(l.size()) != spec.k)
      throw std::invalid_argument("every color list must have the common size");

  auto edge_id = [&edge_list](int u, int v) {
    const auto e = std::minmax(u, v);
    const auto it = std::lower_bound(edge_list.begin(), edge_list.end(),
                                     std::pair<int, int>(e.first, e.second));
    return static_cast<int>(it - edge_list.begin());
  };
  // Sorted copies for intersection counting; the instance keeps the given
  // order because a domain value is an index into the given list.
  std::vector<std::vector<int>> sorted = spec.lists;
  for (auto& l : sorted) std::sort(l.begin(), l.end());
  auto shared_colors = [&sorted](int e1, int e2) {
    const auto& a = sorted[e1];
    const auto& b = sorted[e2];
    size_t i = 0, j = 0, count = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j])
        ++i;
      else if (a[i] > b[j])
        ++j;
      else
        ++count, ++i, ++j;
    }
    return static_cast<int>(count);
  };

  auto lists = std::make_shared<const std::vector<std::vector<int>>>(spec.lists);
  std::vector<Domain> domains(edge_list.size(), Domain{spec.k, {}});
  std::vector<Event> events;
  std::set<std::vector<long long>> seen;
  for (int n = 1; n <= spec.L_max; ++n)
    for (const auto& walk : facial_paths(spec.graph, spec.faces, n)) {
      std::vector<int> eids(2 * n);
      for (int j = 0; j < 2 * n; ++j) eids[j] = edge_id(walk[j], walk[j + 1]);
      double prob = 1;
      for (int i = 0; i < n; ++i)
        prob *= shared_colors(eids[i], eids[i + n]) /
                (static_cast<double>(spec.k) * spec.k);
      if (prob == 0) continue;
      if (!seen.insert(matching_key(eids)).second) continue;
      std::vector<std::pair<AtomId, std::vector<AtomId>>> seeds;
      for (int j = 0; j < 2 * n; ++j) {
        const auto half = (j < n) ? std::vector<AtomId>(eids.begin() + n, eids.end())
                                  : std::vector<AtomId>(eids.begin(), eids.begin() + n);
        seeds.emplace_back(eids[j], half);
      }
      auto fn = [eids, lists, n](const Configuration& c) {
        for (int i = 0; i < n; ++i)
          if ((*lists)[eids[i]][c[eids[i]]] !=
              (*lists)[eids[i + n]][c[eids[i + n]]])
            return false;
        return true;
      };
      events.push_back(Event::predicate(static_cast<EventId>(events.size()),
                                        eids, std::move(fn), std::move(seeds),
                                        n, prob));
    }
  return Instance(std::move(domains), std::move(events));
}

Instance build_frugal_instance(const FrugalSpec& spec) {
  if (spec.k < 1) throw std::invalid_argument("color count must be positive");
  if (spec.beta < 1) throw std::invalid_argument("beta must be positive");
  std::vector<Domain> domains(spec.graph.size(), Domain{spec.k, {}});
  std::vector<Event> events;
  std::set<std::vector<AtomId>> supports;
  for (const auto& [u, v] : spec.graph.edges()) {
    std::vector<AtomId> sup{u, v};
    if (!supports.insert(sup).second) continue;
    events.push_back(
        Event::monochromatic(static_cast<EventId>(events.size()), sup));
  }
  for (const auto& star : all_stars(spec.graph, spec.beta)) {
    if (!supports.insert(star).second) continue;
    events.push_back(
        Event::monochromatic(static_cast<EventId>(events.size()), star));
  }
  return Instance(std::move(domains), std::move(events));
}

PowerSpectrum nonrepetitive_spectrum(int delta, double k) {
  if (delta < 1) throw std::invalid_argument("degree must be positive");
  if (!(k > static_cast<double>(delta) * delta))
    throw std::invalid_argument("series diverges: need k > delta^2");
  PowerSpectrum spec;
  spec.tail = SpectrumTail{delta * delta / k, {0.0, 1.0 / delta}, 1};
  return spec;
}

PowerSpectrum facial_thue_spectrum(double k) {
  if (!(k > 1)) throw std::invalid_argument("series diverges: need k > 1");
  PowerSpectrum spec;
  spec.tail = SpectrumTail{1.0 / k, {0.0, 4.0}, 1};
  return spec;
}

PowerSpectrum frugal_spectrum(int delta, int beta, double k) {
  if (delta < 1) throw std::invalid_argument("degree must be positive");
  if (beta < 1) throw std::invalid_argument("beta must be positive");
  if (!(k >= 1)) throw std::invalid_argument("need k >= 1");
  const double d1 = delta;
  const double db =
      std::pow(delta, 1.0 + beta) / std::tgamma(static_cast<double>(beta) + 1);
  PowerSpectrum spec;
  if (beta == 1) {
    spec.terms[1] = {1.0 / k, std::max(1.0, d1 + db)};
  } else {
    spec.terms[1] = {1.0 / k, std::max(1.0, d1)};
    spec.terms[beta] = {std::pow(k, -beta), std::max(1.0, db)};
  }
  return spec;
}

double nonrepetitive_xi0(double b) { return (std::sqrt(9 + 8 * b) - 3) / 4; }

NonrepetitiveBounds nonrepetitive_bounds(int delta) {
  if (delta < 2) throw std::invalid_argument("degree must be at least 2");
  return bounds_at(delta);
}

double nonrepetitive_crossover() {
  // pi_bound - comparison_bound rises from negative near delta = 2 (the
  // comparison bound blows up there) and is positive for large degrees.
  auto diff = [](double delta) {
    const NonrepetitiveBounds b = bounds_at(delta);
    return b.pi_bound - *b.comparison_bound;
  };
  double lo = 2.0001, hi = 4;
  while (diff(hi) < 0) hi *= 1.5;
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    (diff(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

FrugalBound frugal_bound(int delta, int beta) {
  if (delta < 1) throw std::invalid_argument("degree must be positive");
  if (beta < 1) throw std::invalid_argument("beta must be positive");
  FrugalBound out;
  if (beta >= 2) {
    const double fact = std::tgamma(static_cast<double>(beta) + 1);
    out.closed_form = std::pow(delta, 1.0 + 1.0 / beta) /
                          std::pow(fact, 1.0 / beta) * beta *
                          std::pow(beta - 1.0, 1.0 / beta - 1.0) +
                      delta;
  }
  auto ok = [&](int k) {
    return min_ratio(frugal_spectrum(delta, beta, k)).verdict() ==
           Verdict::holds;
  };
  int lo = 1, hi = 2;
  if (ok(1)) {
    out.generic_k = 1;
    return out;
  }
  while (!ok(hi)) {
    lo = hi;
    if (hi > (1 << 28)) throw std::runtime_error("no finite color bound found");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  out.generic_k = hi;
  return out;
}

bool verify_nonrepetitive(const NonrepetitiveSpec& spec,
                          const Configuration& c) {
  if (c.size() != spec.graph.size() || !c.total())
    throw std::invalid_argument("configuration must assign every vertex");
  for (int n = 1; n <= spec.L_max; ++n)
    for (const auto& path : even_paths(spec.graph, n)) {
      bool repeated = true;
      for (int i = 0; i < n && repeated; ++i)
        repeated = c[path[i]] == c[path[i + n]];
      if (repeated) return false;
    }
  return true;
}

bool verify_facial(const FacialThueSpec& spec, const Configuration& c) {
  const auto edge_list = spec.graph.edges();
  if (c.size() != static_cast<int>(edge_list.size()) || !c.total())
    throw std::invalid_argument("configuration must assign every edge");
  std::map<std::pair<int, int>, int> ids;
  for (size_t i = 0; i < edge_list.size(); ++i)
    ids[edge_list[i]] = static_cast<int>(i);
  auto color = [&](int u, int v) {
    const auto e = std::minmax(u, v);
    const int id = ids.at({e.first, e.second});
    return spec.lists[id][c[id]];
  };
  for (int n = 1; n <= spec.L_max; ++n)
    for (const auto& walk : facial_paths(spec.graph, spec.faces, n)) {
      bool repeated = true;
      for (int i = 0; i < n && repeated; ++i)
        repeated = color(walk[i], walk[i + 1]) ==
                   color(walk[i + n], walk[i + n + 1]);
      if (repeated) return false;
    }
  return true;
}

bool verify_frugal(const FrugalSpec& spec, const Configuration& c) {
  if (c.size() != spec.graph.size() || !c.total())
    throw std::invalid_argument("configuration must assign every vertex");
  for (const auto& [u, v] : spec.graph.edges())
    if (c[u] == c[v]) return false;
  std::map<int, int> count;
  for (int v = 0; v < spec.graph.size(); ++v) {
    count.clear();
    for (int u : spec.graph.neighbors(v))
      if (++count[c[u]] > spec.beta) return false;
  }
  return true;
}

}  // namespace lll
