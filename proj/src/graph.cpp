#include "lll/graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace lll {

SimpleGraph::SimpleGraph(int vertex_count) {
  if (vertex_count < 0)
    throw std::invalid_argument("graph vertex count must be nonnegative");
  adj_.assign(vertex_count, {});
}

void SimpleGraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= size() || v >= size())
    throw std::invalid_argument("edge endpoint out of range");
  if (u == v) throw std::invalid_argument("self loops are not allowed");
  if (adjacent(u, v)) return;
  adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
  adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
}

bool SimpleGraph::adjacent(int u, int v) const {
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

int SimpleGraph::max_degree() const {
  int d = 0;
  for (const auto& ns : adj_) d = std::max(d, static_cast<int>(ns.size()));
  return d;
}

std::vector<std::pair<int, int>> SimpleGraph::edges() const {
  std::vector<std::pair<int, int>> es;
  for (int u = 0; u < size(); ++u)
    for (int v : adj_[u])
      if (u < v) es.emplace_back(u, v);
  return es;  // already lexicographic by construction
}

SimpleGraph SimpleGraph::from_edges(
    int vertex_count, const std::vector<std::pair<int, int>>& edges) {
  SimpleGraph g(vertex_count);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

SimpleGraph SimpleGraph::path_graph(int n) {
  SimpleGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

SimpleGraph SimpleGraph::cycle_graph(int n) {
  SimpleGraph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

SimpleGraph SimpleGraph::grid_graph(int rows, int cols) {
  SimpleGraph g(rows * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int v = r * cols + c;
      if (c + 1 < cols) g.add_edge(v, v + 1);
      if (r + 1 < rows) g.add_edge(v, v + cols);
    }
  return g;
}

SimpleGraph SimpleGraph::complete_graph(int n) {
  SimpleGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

FaceSet make_face_set(const SimpleGraph& g, std::vector<std::vector<int>> faces) {
  for (const auto& f : faces) {
    if (f.size() < 3)
      throw std::invalid_argument("face needs at least three vertices");
    for (size_t i = 0; i < f.size(); ++i) {
      int u = f[i], v = f[(i + 1) % f.size()];
      if (u < 0 || v < 0 || u >= g.size() || v >= g.size() || !g.adjacent(u, v))
        throw std::invalid_argument(
            "face lists consecutive vertices that are not adjacent");
    }
  }
  return FaceSet{std::move(faces)};
}

std::vector<std::vector<int>> even_paths(const SimpleGraph& g, int n) {
  if (n < 1) throw std::invalid_argument("even_paths: n must be >= 1");
  const int len = 2 * n;
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  std::vector<char> used(g.size(), 0);
  auto dfs = [&](auto&& self, int v) -> void {
    path.push_back(v);
    used[v] = 1;
    if (static_cast<int>(path.size()) == len) {
      if (path.front() < path.back()) out.push_back(path);
    } else {
      for (int w : g.neighbors(v))
        if (!used[w]) self(self, w);
    }
    used[v] = 0;
    path.pop_back();
  };
  for (int s = 0; s < g.size(); ++s) dfs(dfs, s);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> even_paths_through(const SimpleGraph& g, int v,
                                                 int n) {
  if (v < 0 || v >= g.size())
    throw std::invalid_argument("even_paths_through: vertex out of range");
  std::vector<std::vector<int>> out;
  for (auto& p : even_paths(g, n))
    if (std::find(p.begin(), p.end(), v) != p.end()) out.push_back(std::move(p));
  return out;
}

std::vector<std::vector<int>> facial_paths(const SimpleGraph& g,
                                           const FaceSet& faces, int n) {
  if (n < 1) throw std::invalid_argument("facial_paths: n must be >= 1");
  (void)g;
  const int len = 2 * n;
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> out;
  for (const auto& f : faces.faces) {
    const int fl = static_cast<int>(f.size());
    if (len > fl) continue;  // a longer run would repeat boundary edges
    for (int start = 0; start < fl; ++start) {
      std::vector<int> walk(len + 1);
      for (int i = 0; i <= len; ++i) walk[i] = f[(start + i) % fl];
      // all edges along the run must be distinct
      std::set<std::pair<int, int>> es;
      bool ok = true;
      for (int i = 0; i < len && ok; ++i) {
        int u = walk[i], v = walk[i + 1];
        ok = es.insert({std::min(u, v), std::max(u, v)}).second;
      }
      if (!ok) continue;
      std::vector<int> rev(walk.rbegin(), walk.rend());
      const std::vector<int>& canon = std::min(walk, rev);
      if (seen.insert(canon).second) out.push_back(canon);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> all_stars(const SimpleGraph& g, int beta) {
  if (beta < 1) throw std::invalid_argument("stars: beta must be >= 1");
  std::set<std::vector<int>> seen;
  const int take = beta + 1;
  for (int c = 0; c < g.size(); ++c) {
    const auto& ns = g.neighbors(c);
    const int d = static_cast<int>(ns.size());
    if (d < take) continue;
    std::vector<int> pick(take);
    for (int i = 0; i < take; ++i) pick[i] = i;
    while (true) {
      std::vector<int> sigma(take);
      for (int i = 0; i < take; ++i) sigma[i] = ns[pick[i]];
      seen.insert(std::move(sigma));  // neighbor lists are sorted already
      int pos = take - 1;
      while (pos >= 0 && pick[pos] == d - take + pos) --pos;
      if (pos < 0) break;
      ++pick[pos];
      for (int i = pos + 1; i < take; ++i) pick[i] = pick[i - 1] + 1;
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<std::vector<int>> stars(const SimpleGraph& g, int v, int beta) {
  if (v < 0 || v >= g.size())
    throw std::invalid_argument("stars: vertex out of range");
  std::vector<std::vector<int>> out;
  for (auto& sigma : all_stars(g, beta))
    if (std::binary_search(sigma.begin(), sigma.end(), v))
      out.push_back(std::move(sigma));
  return out;
}

int d_s_exact(const Instance& inst, int s) {
  int best = 0;
  for (int a = 0; a < inst.atom_count(); ++a) {
    int count = 0;
    for (EventId e : inst.events_containing(a))
      if (inst.event(e).power() == s) ++count;
    best = std::max(best, count);
  }
  return best;
}

}  // namespace lll
