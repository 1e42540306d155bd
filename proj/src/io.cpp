#include "lll/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lll {

namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Strips comments and blank lines, returns remaining lines.
std::vector<std::string> clean_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream probe(line);
    std::string tok;
    if (probe >> tok) out.push_back(line);
  }
  return out;
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int to_int(const std::string& s) {
  size_t pos = 0;
  int v = std::stoi(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad integer: " + s);
  return v;
}

}  // namespace

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "[atoms]\n";
  out << "count " << inst.atom_count() << "\n";
  out << "[domains]\n";
  if (inst.uniform()) {
    out << "uniform " << inst.k() << "\n";
  } else {
    for (int a = 0; a < inst.atom_count(); ++a) {
      const Domain& d = inst.domain(a);
      out << "atom " << a << " : " << d.size;
      for (double w : d.weights) out << " " << fmt_double(w);
      out << "\n";
    }
  }
  out << "[events]\n";
  for (const Event& ev : inst.events()) {
    switch (ev.kind()) {
      case EventKind::monochromatic: {
        out << "mono";
        for (AtomId a : ev.support()) out << " " << a;
        out << "\n";
        break;
      }
      case EventKind::repetitive: {
        out << "repetitive";
        for (AtomId a : ev.sequence()) out << " " << a;
        out << "\n";
        break;
      }
      case EventKind::elementary: {
        out << "elementary";
        for (AtomId a : ev.support()) out << " " << a;
        out << " :";
        for (int v : ev.elementary_values()) out << " " << v;
        out << "\n";
        break;
      }
      case EventKind::extension: {
        out << "extension";
        for (AtomId a : ev.support()) out << " " << a;
        out << " :";
        bool first = true;
        for (const auto& cfg : ev.extension_configs()) {
          if (!first) out << " ;";
          first = false;
          for (int v : cfg) out << " " << v;
        }
        out << "\n";
        break;
      }
      case EventKind::predicate:
        throw std::runtime_error(
            "serialize_instance: predicate events have no text form");
    }
  }
  return out.str();
}

Instance parse_instance(const std::string& text) {
  auto lines = clean_lines(text);
  size_t i = 0;
  auto expect_section = [&](const char* name) {
    if (i >= lines.size() || tokens(lines[i])[0] != name)
      throw std::invalid_argument(std::string("instance file: expected ") + name);
    ++i;
  };

  expect_section("[atoms]");
  auto atoms_toks = tokens(lines[i++]);
  if (atoms_toks.size() != 2 || atoms_toks[0] != "count")
    throw std::invalid_argument("instance file: expected 'count <m>'");
  const int m = to_int(atoms_toks[1]);

  expect_section("[domains]");
  std::vector<Domain> domains;
  if (i < lines.size() && tokens(lines[i])[0] == "uniform") {
    auto t = tokens(lines[i++]);
    if (t.size() != 2) throw std::invalid_argument("bad uniform domain line");
    domains.assign(m, Domain{to_int(t[1]), {}});
  } else {
    domains.assign(m, Domain{});
    int seen = 0;
    while (i < lines.size() && tokens(lines[i])[0] == "atom") {
      auto t = tokens(lines[i++]);
      if (t.size() < 4 || t[2] != ":")
        throw std::invalid_argument("bad domain line");
      int a = to_int(t[1]);
      if (a < 0 || a >= m) throw std::invalid_argument("domain atom out of range");
      Domain d;
      d.size = to_int(t[3]);
      for (size_t j = 4; j < t.size(); ++j) d.weights.push_back(std::stod(t[j]));
      domains[a] = std::move(d);
      ++seen;
    }
    if (seen != m)
      throw std::invalid_argument("instance file: missing domain lines");
  }

  expect_section("[events]");
  std::vector<Event> events;
  for (; i < lines.size(); ++i) {
    auto t = tokens(lines[i]);
    const std::string& kind = t[0];
    EventId id = static_cast<EventId>(events.size());
    if (kind == "mono") {
      std::vector<AtomId> atoms;
      for (size_t j = 1; j < t.size(); ++j) atoms.push_back(to_int(t[j]));
      events.push_back(Event::monochromatic(id, std::move(atoms)));
    } else if (kind == "repetitive") {
      std::vector<AtomId> seq;
      for (size_t j = 1; j < t.size(); ++j) seq.push_back(to_int(t[j]));
      events.push_back(Event::repetitive(id, std::move(seq)));
    } else if (kind == "elementary") {
      std::vector<AtomId> atoms;
      std::vector<int> values;
      size_t j = 1;
      for (; j < t.size() && t[j] != ":"; ++j) atoms.push_back(to_int(t[j]));
      if (j == t.size()) throw std::invalid_argument("elementary: missing ':'");
      for (++j; j < t.size(); ++j) values.push_back(to_int(t[j]));
      events.push_back(Event::elementary(id, std::move(atoms), std::move(values)));
    } else if (kind == "extension") {
      std::vector<AtomId> atoms;
      size_t j = 1;
      for (; j < t.size() && t[j] != ":"; ++j) atoms.push_back(to_int(t[j]));
      if (j == t.size()) throw std::invalid_argument("extension: missing ':'");
      std::vector<std::vector<int>> configs;
      std::vector<int> cur;
      for (++j; j < t.size(); ++j) {
        if (t[j] == ";") {
          configs.push_back(std::move(cur));
          cur = {};
        } else {
          cur.push_back(to_int(t[j]));
        }
      }
      if (!cur.empty()) configs.push_back(std::move(cur));
      events.push_back(
          Event::extension(id, std::move(atoms), std::move(configs), domains));
    } else {
      throw std::invalid_argument("unknown event kind: " + kind);
    }
  }
  return Instance(std::move(domains), std::move(events));
}

std::string serialize_graph(const SimpleGraph& g) {
  std::ostringstream out;
  out << "vertices " << g.size() << "\n";
  for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
  return out.str();
}

SimpleGraph parse_graph(const std::string& text) {
  auto lines = clean_lines(text);
  if (lines.empty()) throw std::invalid_argument("graph file is empty");
  auto head = tokens(lines[0]);
  if (head.size() != 2 || head[0] != "vertices")
    throw std::invalid_argument("graph file must start with 'vertices <n>'");
  SimpleGraph g(to_int(head[1]));
  for (size_t i = 1; i < lines.size(); ++i) {
    auto t = tokens(lines[i]);
    if (t.size() != 2) throw std::invalid_argument("bad edge line");
    g.add_edge(to_int(t[0]), to_int(t[1]));
  }
  return g;
}

FaceSet parse_faces(const SimpleGraph& g, const std::string& text) {
  std::vector<std::vector<int>> faces;
  for (const auto& line : clean_lines(text)) {
    std::vector<int> face;
    for (const auto& t : tokens(line)) face.push_back(to_int(t));
    faces.push_back(std::move(face));
  }
  return make_face_set(g, std::move(faces));
}

std::vector<std::vector<int>> parse_color_lists(const SimpleGraph& g, int k,
                                                const std::string& text) {
  auto es = g.edges();
  std::map<std::pair<int, int>, int> index;
  for (size_t i = 0; i < es.size(); ++i) index[es[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> lists(es.size());
  for (const auto& line : clean_lines(text)) {
    auto t = tokens(line);
    if (t.size() < 4 || t[2] != ":")
      throw std::invalid_argument("bad color list line (want 'u v : c1 ... ck')");
    int u = to_int(t[0]), v = to_int(t[1]);
    auto it = index.find({std::min(u, v), std::max(u, v)});
    if (it == index.end())
      throw std::invalid_argument("color list names a non-edge");
    std::vector<int> list;
    for (size_t j = 3; j < t.size(); ++j) list.push_back(to_int(t[j]));
    if (static_cast<int>(list.size()) != k)
      throw std::invalid_argument("color list has wrong length");
    if (!lists[it->second].empty())
      throw std::invalid_argument("duplicate color list for an edge");
    lists[it->second] = std::move(list);
  }
  for (size_t i = 0; i < lists.size(); ++i)
    if (lists[i].empty())
      throw std::invalid_argument("missing color list for some edge");
  return lists;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace lll
