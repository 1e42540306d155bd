#include "lll/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lll {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Incremental occurrence state over a total configuration: which events
// occur, and for each atom how many occurring events contain it.
class OccurrenceTracker {
 public:
  OccurrenceTracker(const Instance& inst, const Configuration& cfg)
      : inst_(inst),
        cfg_(cfg),
        occ_(inst.event_count(), 0),
        bad_degree_(inst.atom_count(), 0),
        stamp_(inst.event_count(), -1) {
    for (int e = 0; e < inst_.event_count(); ++e)
      if (inst_.event(e).occurs(cfg_)) flip_on(e);
  }

  bool clean() const { return occurring_.empty(); }
  EventId smallest_occurring() const { return *occurring_.begin(); }
  AtomId smallest_bad() const { return *bad_.begin(); }
  bool is_bad(AtomId a) const { return bad_degree_[a] > 0; }

  // First bad atom of a sorted list; -1 if none.
  AtomId smallest_bad_in(std::span<const AtomId> sorted) const {
    for (AtomId a : sorted)
      if (bad_degree_[a] > 0) return a;
    return -1;
  }

  // Smallest occurring event containing the atom.
  EventId smallest_occurring_containing(AtomId x) const {
    for (EventId e : inst_.events_containing(x))
      if (occ_[e]) return e;
    throw std::logic_error("no occurring event contains the bad atom");
  }

  // Re-evaluate every event touching one of the changed atoms.
  void after_change(std::span<const AtomId> atoms) {
    ++token_;
    for (AtomId a : atoms)
      for (EventId e : inst_.events_containing(a)) {
        if (stamp_[e] == token_) continue;
        stamp_[e] = token_;
        bool now = inst_.event(e).occurs(cfg_);
        if (now && !occ_[e]) flip_on(e);
        if (!now && occ_[e]) flip_off(e);
      }
  }

 private:
  void flip_on(EventId e) {
    occ_[e] = 1;
    occurring_.insert(e);
    for (AtomId a : inst_.event(e).support())
      if (bad_degree_[a]++ == 0) bad_.insert(a);
  }
  void flip_off(EventId e) {
    occ_[e] = 0;
    occurring_.erase(e);
    for (AtomId a : inst_.event(e).support())
      if (--bad_degree_[a] == 0) bad_.erase(a);
  }

  const Instance& inst_;
  const Configuration& cfg_;
  std::vector<char> occ_;
  std::set<EventId> occurring_;
  std::vector<int> bad_degree_;
  std::set<AtomId> bad_;
  std::vector<int> stamp_;
  int token_ = 0;
};

void sample_all(const Instance& inst, Configuration& cfg, Rng& rng) {
  for (int a = 0; a < inst.atom_count(); ++a)
    cfg[a] = sample_value(inst.domain(a), rng);
}

}  // namespace

int sample_value(const Domain& d, Rng& rng) {
  if (d.uniform()) return rng.bounded(d.size);
  double u = rng.real01();
  double acc = 0;
  for (int v = 0; v < d.size; ++v) {
    acc += d.weights[v];
    if (u < acc) return v;
  }
  return d.size - 1;
}

MtResult moser_tardos_resampling(const Instance& inst, Rng& rng,
                                 std::int64_t step_cap) {
  auto start = Clock::now();
  MtResult out{Configuration(inst.atom_count()), {}};
  sample_all(inst, out.config, rng);
  OccurrenceTracker tracker(inst, out.config);
  while (!tracker.clean()) {
    if (out.stats.steps >= step_cap) {
      out.stats.wall_ms = ms_since(start);
      return out;  // success stays false
    }
    ++out.stats.steps;
    const Event& ev = inst.event(tracker.smallest_occurring());
    for (AtomId a : ev.support())
      out.config[a] = sample_value(inst.domain(a), rng);
    tracker.after_change(ev.support());
  }
  out.stats.success = true;
  out.stats.wall_ms = ms_since(start);
  return out;
}

ForestResult forest_algorithm(const Instance& inst, Rng& rng,
                              std::int64_t step_cap,
                              const ForestHooks* hooks) {
  auto start = Clock::now();
  ForestResult out{Configuration(inst.atom_count()), {}, {}};
  out.record.rng_seed = rng.seed();
  sample_all(inst, out.config, rng);
  OccurrenceTracker tracker(inst, out.config);

  struct Frame {
    AtomId x;
    EventId e;
  };
  std::vector<Frame> stack;

  auto push_step = [&](AtomId x, EventId e) -> bool {
    if (static_cast<std::int64_t>(out.record.steps.size()) >= step_cap)
      return false;
    out.record.steps.emplace_back(x, e);
    if (hooks && hooks->on_call) hooks->on_call(x, e, out.config);
    const Event& ev = inst.event(e);
    for (AtomId a : ev.resample_set(x))
      out.config[a] = sample_value(inst.domain(a), rng);
    tracker.after_change(ev.resample_set(x));
    stack.push_back({x, e});
    return true;
  };

  bool capped = false;
  while (!capped) {
    if (stack.empty()) {
      if (tracker.clean()) break;
      AtomId x = tracker.smallest_bad();
      EventId e = tracker.smallest_occurring_containing(x);
      out.record.phase_starts.push_back(
          static_cast<int>(out.record.steps.size()));
      capped = !push_step(x, e);
    } else {
      const Frame& top = stack.back();
      AtomId x =
          tracker.smallest_bad_in(inst.event(top.e).resample_set(top.x));
      if (x < 0) {
        if (hooks && hooks->on_return)
          hooks->on_return(top.x, top.e, out.config);
        stack.pop_back();
      } else {
        EventId e = tracker.smallest_occurring_containing(x);
        capped = !push_step(x, e);
      }
    }
  }
  if (capped) {
    // the phase that could not start its step stays recorded as begun
    if (!out.record.phase_starts.empty() &&
        out.record.phase_starts.back() ==
            static_cast<int>(out.record.steps.size()))
      out.record.phase_starts.pop_back();
  }
  out.record.terminated = !capped;
  out.stats.success = !capped;
  out.stats.steps = static_cast<std::int64_t>(out.record.steps.size());
  out.stats.phases = out.record.phases();
  out.stats.wall_ms = ms_since(start);
  return out;
}

namespace {

EcResult entropy_compression_impl(const Instance& inst, std::int64_t t,
                                  const std::function<int(AtomId)>& draw) {
  if (!inst.uniform())
    throw std::invalid_argument("entropy compression needs a uniform instance");
  EcResult out;
  out.config = Configuration(inst.atom_count());
  std::set<AtomId> uncolored;
  for (int a = 0; a < inst.atom_count(); ++a) uncolored.insert(a);

  for (std::int64_t i = 0; i < t; ++i) {
    if (uncolored.empty()) break;
    ++out.steps_used;
    AtomId y = *uncolored.begin();
    int c = draw(y);
    out.config[y] = c;
    uncolored.erase(y);
    EventId flaw = -1;
    for (EventId e : inst.events_containing(y))
      if (inst.event(e).occurs_if_assigned(out.config)) {
        flaw = e;
        break;
      }
    EcStep step{y, c, flaw, {}};
    if (flaw >= 0) {
      const Event& ev = inst.event(flaw);
      auto rs = ev.resample_set(y);
      step.uncolored.assign(rs.begin(), rs.end());
      for (AtomId a : rs) {
        out.config[a] = kUnassigned;
        uncolored.insert(a);
      }
      ++out.backtracks;
    }
    out.trace.push_back(std::move(step));
  }
  out.success = uncolored.empty();
  return out;
}

}  // namespace

EcResult entropy_compression(const Instance& inst, Rng& rng, std::int64_t t) {
  return entropy_compression_impl(
      inst, t, [&](AtomId) { return rng.bounded(inst.k()); });
}

EcResult entropy_compression_fixed(const Instance& inst,
                                   std::span<const int> entries) {
  size_t next = 0;
  auto draw = [&](AtomId) -> int {
    int v = entries[next++];
    if (v < 0 || v >= inst.k())
      throw std::invalid_argument("value sequence entry outside domain");
    return v;
  };
  return entropy_compression_impl(inst, static_cast<std::int64_t>(entries.size()),
                                  draw);
}

std::vector<AtomId> bad_atoms(const Instance& inst, const Configuration& c) {
  std::vector<char> bad(inst.atom_count(), 0);
  for (const Event& ev : inst.events())
    if (ev.occurs(c))
      for (AtomId a : ev.support()) bad[a] = 1;
  std::vector<AtomId> out;
  for (int a = 0; a < inst.atom_count(); ++a)
    if (bad[a]) out.push_back(a);
  return out;
}

std::string serialize_record(const Record& rec) {
  std::ostringstream out;
  out << "record seed=" << rec.rng_seed << " terminated=" << (rec.terminated ? 1 : 0)
      << " steps=" << rec.steps.size() << "\n";
  for (size_t i = 0; i < rec.steps.size(); ++i) {
    int phase = 0;
    for (size_t p = 0; p < rec.phase_starts.size(); ++p)
      if (rec.phase_starts[p] <= static_cast<int>(i)) phase = static_cast<int>(p);
    out << phase << " " << i << " " << rec.steps[i].first << " "
        << rec.steps[i].second << "\n";
  }
  return out.str();
}

Record parse_record(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Record rec;
  if (!std::getline(in, line) || line.rfind("record ", 0) != 0)
    throw std::invalid_argument("record text must start with a header line");
  size_t declared_steps = 0;
  {
    std::istringstream head(line);
    std::string tok;
    head >> tok;  // "record"
    while (head >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("bad record header token: " + tok);
      std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "seed")
        rec.rng_seed = std::stoull(val);
      else if (key == "terminated")
        rec.terminated = val == "1";
      else if (key == "steps")
        declared_steps = std::stoull(val);
      else
        throw std::invalid_argument("unknown record header key: " + key);
    }
  }
  int prev_phase = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    int phase, idx, atom, event;
    if (!(row >> phase >> idx >> atom >> event))
      throw std::invalid_argument("bad record step line: " + line);
    if (idx != static_cast<int>(rec.steps.size()))
      throw std::invalid_argument("record step indices must be consecutive");
    if (phase != prev_phase && phase != prev_phase + 1)
      throw std::invalid_argument("record phases must be consecutive");
    if (phase == prev_phase + 1) {
      rec.phase_starts.push_back(static_cast<int>(rec.steps.size()));
      prev_phase = phase;
    }
    rec.steps.emplace_back(atom, event);
  }
  if (rec.steps.size() != declared_steps)
    throw std::invalid_argument("record step count differs from its header");
  return rec;
}

}  // namespace lll
