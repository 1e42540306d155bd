#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lll/core.hpp"
#include "lll/criteria.hpp"
#include "lll/graph.hpp"
#include "lll/rng.hpp"
#include "lll/solvers.hpp"
#include "lll/witness.hpp"

using namespace lll;

namespace {

std::vector<Domain> uniform_domains(int atoms, int k) {
  return std::vector<Domain>(atoms, Domain{k, {}});
}

// Monochromatic-edge instance over a cycle.
Instance cycle_instance(int n, int k) {
  std::vector<Event> events;
  SimpleGraph g = SimpleGraph::cycle_graph(n);
  for (auto [u, v] : g.edges())
    events.push_back(
        Event::monochromatic(static_cast<EventId>(events.size()), {u, v}));
  return Instance(uniform_domains(n, k), events);
}

// Monochromatic events on consecutive atom triples; power 2 each.
Instance triple_instance(int n, int k) {
  std::vector<Event> events;
  for (int i = 0; i + 2 < n; ++i)
    events.push_back(Event::monochromatic(static_cast<EventId>(events.size()),
                                          {i, i + 1, i + 2}));
  return Instance(uniform_domains(n, k), events);
}

// Star of monochromatic triples used by the golden fixtures:
//   e0 on {0,1,2}, e1 on {2,3,4}. Resample sets (support minus the seed,
//   the seed being the smallest other support atom):
//   e0: 0 -> {0,2}, 1 -> {1,2}, 2 -> {1,2}
//   e1: 2 -> {2,4}, 3 -> {3,4}, 4 -> {3,4}
Instance two_triples() {
  std::vector<Event> events;
  events.push_back(Event::monochromatic(0, {0, 1, 2}));
  events.push_back(Event::monochromatic(1, {2, 3, 4}));
  return Instance(uniform_domains(5, 2), events);
}

Record make_record(std::vector<std::pair<AtomId, EventId>> steps,
                   std::vector<int> phase_starts) {
  Record rec;
  rec.steps = std::move(steps);
  rec.phase_starts = std::move(phase_starts);
  return rec;
}

bool same_record(const Record& a, const Record& b) {
  return a.steps == b.steps && a.phase_starts == b.phase_starts;
}

}  // namespace

TEST_CASE("single resampling step yields one labeled root with padded leaves") {
  std::vector<Event> events;
  events.push_back(Event::monochromatic(0, {0, 1, 2}));
  Instance inst(uniform_domains(4, 2), events);

  Record rec = make_record({{0, 0}}, {0});
  WitnessForest f = build_forest(rec, inst);

  CHECK(f.internal_count == 1);
  CHECK(f.roots.size() == 4);
  CHECK(f.nodes.size() == 6);  // root + two padding leaves + three isolated

  // Padding follows the resample set {0,2} of atom 0 in increasing order.
  std::string golden =
      "tree 0\n"
      "  0 e0\n"
      "    0 -\n"
      "    2 -\n"
      "tree 1\n"
      "  1 -\n"
      "tree 2\n"
      "  2 -\n"
      "tree 3\n"
      "  3 -\n";
  CHECK(f.to_text() == golden);

  CHECK(check_properties(f, inst).all());
  CHECK(same_record(record_from_forest(f), rec));
}

TEST_CASE("hand-traced two-phase forest matches its golden rendering") {
  Instance inst = two_triples();
  // Phase 1 rooted at atom 0: (0,e0) -> (2,e1) below it -> (4,e1) below that,
  // then (0,e0) climbs back to the root. Phase 2 is the single step (3,e1).
  Record rec = make_record({{0, 0}, {2, 1}, {4, 1}, {0, 0}, {3, 1}}, {0, 4});
  WitnessForest f = build_forest(rec, inst);

  CHECK(f.internal_count == 5);
  CHECK(f.roots.size() == 5);

  std::string golden =
      "tree 0\n"
      "  0 e0\n"
      "    2 e1\n"
      "      4 e1\n"
      "        3 -\n"
      "        4 -\n"
      "      2 -\n"
      "    0 e0\n"
      "      0 -\n"
      "      2 -\n"
      "tree 1\n"
      "  1 -\n"
      "tree 2\n"
      "  2 -\n"
      "tree 3\n"
      "  3 e1\n"
      "    3 -\n"
      "    4 -\n"
      "tree 4\n"
      "  4 -\n";
  CHECK(f.to_text() == golden);

  PropertyReport rep = check_properties(f, inst);
  CHECK(rep.all());
  CHECK(rep.violated().empty());
  CHECK(same_record(record_from_forest(f), rec));

  UnlabeledForest u = strip_labels(f);
  CHECK(u.roots.size() == 5);
  CHECK(u.to_text() ==
        "(((()())())(()()))\n"
        "()\n"
        "()\n"
        "(()())\n"
        "()\n");

  // Labels do not affect the stripped shape.
  WitnessForest relabeled = f;
  for (ForestNode& nd : relabeled.nodes) {
    nd.atom += 7;
    if (nd.internal()) nd.event = 3 * nd.event + 1;
  }
  CHECK(strip_labels(relabeled) == u);

  // A different record gives a different shape.
  WitnessForest g = build_forest(make_record({{0, 0}}, {0}), inst);
  CHECK_FALSE(strip_labels(g) == u);
}

TEST_CASE("empty record maps to isolated leaf roots") {
  std::vector<Event> events;
  events.push_back(Event::monochromatic(0, {0, 1}));
  Instance inst(uniform_domains(3, 2), events);

  WitnessForest f = build_forest(Record{}, inst);
  CHECK(f.internal_count == 0);
  CHECK(f.nodes.size() == 3);
  CHECK(f.roots == std::vector<int>{0, 1, 2});
  for (AtomId a = 0; a < 3; ++a) {
    CHECK(f.nodes[f.roots[a]].atom == a);
    CHECK_FALSE(f.nodes[f.roots[a]].internal());
    CHECK(f.nodes[f.roots[a]].children.empty());
  }
  CHECK(check_properties(f, inst).all());

  Record back = record_from_forest(f);
  CHECK(back.steps.empty());
  CHECK(back.phase_starts.empty());
}

TEST_CASE("malformed records are rejected") {
  Instance inst = two_triples();
  auto rejects = [&](Record rec) {
    CHECK_THROWS_AS(build_forest(rec, inst), std::invalid_argument);
  };

  // Phase bookkeeping.
  rejects(make_record({{0, 0}}, {}));        // missing first phase
  rejects(make_record({{0, 0}}, {1}));       // first phase not at step 0
  rejects(make_record({{0, 0}, {2, 1}}, {0, 0}));  // empty phase
  rejects(make_record({{0, 0}}, {0, 1}));    // phase start beyond the steps
  rejects(make_record({}, {0}));             // phases without steps

  // Root atoms must strictly increase across phases.
  rejects(make_record({{0, 0}, {0, 0}}, {0, 1}));
  rejects(make_record({{2, 1}, {0, 0}}, {0, 1}));

  // Steps must name a real event and an atom in its support.
  rejects(make_record({{4, 0}}, {0}));
  rejects(make_record({{0, 9}}, {0}));
  rejects(make_record({{0, -1}}, {0}));

  // A step must land in some ancestor's resample set.
  rejects(make_record({{0, 0}, {3, 1}}, {0}));  // 3 outside {0,2}
}

TEST_CASE("hand-built forests expose each property violation") {
  std::vector<Event> events;
  events.push_back(Event::monochromatic(0, {0, 1, 2}));  // power 2
  Instance inst(uniform_domains(4, 2), events);

  auto leaf = [](AtomId a) { return ForestNode{a, -1, {}}; };

  SUBCASE("duplicated sibling atom") {
    WitnessForest f;
    f.nodes = {ForestNode{0, 0, {1, 2}}, leaf(2), leaf(2),
               leaf(1), leaf(2), leaf(3)};
    f.roots = {0, 3, 4, 5};
    f.internal_count = 1;
    PropertyReport rep = check_properties(f, inst);
    CHECK_FALSE(rep.all());
    CHECK(rep.violated() == std::vector<int>{4});
  }

  SUBCASE("missing child") {
    WitnessForest f;
    f.nodes = {ForestNode{0, 0, {1}}, leaf(2), leaf(1), leaf(2), leaf(3)};
    f.roots = {0, 2, 3, 4};
    f.internal_count = 1;
    PropertyReport rep = check_properties(f, inst);
    CHECK(rep.violated() == std::vector<int>{5});
  }

  SUBCASE("child outside the parent's support") {
    WitnessForest f;
    f.nodes = {ForestNode{0, 0, {1, 2}}, leaf(3), leaf(2),
               leaf(1), leaf(2), leaf(3)};
    f.roots = {0, 3, 4, 5};
    f.internal_count = 1;
    PropertyReport rep = check_properties(f, inst);
    CHECK(rep.violated() == std::vector<int>{2});
  }

  SUBCASE("internal label outside its own support") {
    WitnessForest f;
    f.nodes = {leaf(0), leaf(1), leaf(2), ForestNode{3, 0, {4, 5}},
               leaf(0), leaf(1)};
    f.roots = {0, 1, 2, 3};
    f.internal_count = 1;
    PropertyReport rep = check_properties(f, inst);
    CHECK(rep.violated() == std::vector<int>{3});
  }

  SUBCASE("unknown event id") {
    WitnessForest f;
    f.nodes = {ForestNode{0, 9, {}}, leaf(1), leaf(2), leaf(3)};
    f.roots = {0, 1, 2, 3};
    f.internal_count = 1;
    PropertyReport rep = check_properties(f, inst);
    CHECK(rep.violated() == std::vector<int>{3});
  }

  SUBCASE("roots out of atom order") {
    Instance plain(uniform_domains(2, 2), {});
    WitnessForest f;
    f.nodes = {leaf(1), leaf(0)};
    f.roots = {0, 1};
    PropertyReport rep = check_properties(f, plain);
    CHECK(rep.violated() == std::vector<int>{1});
  }

  SUBCASE("padding leaf with children") {
    WitnessForest f;
    f.nodes = {leaf(0), leaf(1), leaf(2), leaf(3)};
    f.nodes[0].children = {1};
    f.roots = {0, 1, 2, 3};
    PropertyReport rep = check_properties(f, inst);
    CHECK(rep.violated() == std::vector<int>{5});
  }
}

TEST_CASE("structural properties hold on algorithm runs") {
  const struct {
    Instance inst;
    int runs;
    std::uint64_t master;
  } cases[] = {
      {cycle_instance(6, 3), 300, 2026},
      {triple_instance(6, 3), 200, 4096},
  };
  for (const auto& tc : cases) {
    std::vector<Record> records;
    for (int t = 0; t < tc.runs; ++t) {
      Rng rng = Rng::stream(tc.master, t);
      ForestResult r = forest_algorithm(tc.inst, rng, 1000000);
      REQUIRE(r.stats.success);
      REQUIRE(r.record.terminated);

      WitnessForest f = build_forest(r.record, tc.inst);
      CHECK(f.internal_count == static_cast<int>(r.record.steps.size()));
      PropertyReport rep = check_properties(f, tc.inst);
      CHECK(rep.all());
      CHECK(same_record(record_from_forest(f), r.record));
      records.push_back(r.record);
    }
    CHECK(injectivity_probe(records, tc.inst));
  }
}

TEST_CASE("record-to-forest map is injective on an exhaustive toy family") {
  // Atoms {0,1,2}; e0 monochromatic on {0,1}, e1 on {1,2}. Admissible pairs
  // and every phase partition of every step tuple up to length 3.
  std::vector<Event> events;
  events.push_back(Event::monochromatic(0, {0, 1}));
  events.push_back(Event::monochromatic(1, {1, 2}));
  Instance inst(uniform_domains(3, 2), events);

  const std::vector<std::pair<AtomId, EventId>> pairs = {
      {0, 0}, {1, 0}, {1, 1}, {2, 1}};

  std::vector<Record> valid;
  valid.push_back(Record{});
  for (int n = 1; n <= 3; ++n) {
    std::vector<int> idx(n, 0);
    while (true) {
      for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        Record rec;
        for (int i = 0; i < n; ++i) rec.steps.push_back(pairs[idx[i]]);
        rec.phase_starts.push_back(0);
        for (int i = 1; i < n; ++i)
          if (mask & (1u << (i - 1))) rec.phase_starts.push_back(i);
        try {
          build_forest(rec, inst);
          valid.push_back(rec);
        } catch (const std::invalid_argument&) {
        }
      }
      int i = n - 1;
      while (i >= 0 && idx[i] == 3) idx[i--] = 0;
      if (i < 0) break;
      ++idx[i];
    }
  }

  // Counted by hand over chains (resample sets here are single atoms) and
  // strictly increasing phase roots: 1 empty + 4 + 11 + 26.
  CHECK(valid.size() == 42);
  CHECK(injectivity_probe(valid, inst));

  // Duplicates of one record are not an injectivity failure.
  std::vector<Record> dup = {valid[5], valid[5]};
  CHECK(injectivity_probe(dup, inst));
}

TEST_CASE("admissible sequence stepping matches exact product probabilities") {
  std::vector<Event> events;
  events.push_back(Event::monochromatic(0, {0, 1}));
  events.push_back(Event::monochromatic(1, {1, 2}));
  Instance inst(uniform_domains(3, 2), events);

  SUBCASE("empty sequence always passes") {
    Rng rng(3);
    CHECK(s_check({}, inst, rng));
  }

  SUBCASE("inadmissible steps throw") {
    Rng rng(3);
    CHECK_THROWS_AS(s_check({{2, 0}}, inst, rng), std::invalid_argument);
    CHECK_THROWS_AS(s_check({{0, 5}}, inst, rng), std::invalid_argument);
  }

  SUBCASE("same seed, same outcome") {
    Rng a(5), b(5);
    for (int i = 0; i < 50; ++i)
      CHECK(s_check({{0, 0}, {2, 1}}, inst, a) ==
            s_check({{0, 0}, {2, 1}}, inst, b));
  }

  SUBCASE("pass rates sit on the product of event probabilities") {
    // Each event has probability 1/2; resampling support minus the seed
    // makes consecutive occurrences independent, so a sequence of j steps
    // passes with probability exactly 2^-j.
    const struct {
      AdmissibleSequence seq;
      double exact;
    } cases[] = {
        {{{0, 0}}, 0.5},
        {{{0, 0}, {2, 1}}, 0.25},          // disjoint resamples
        {{{1, 0}, {1, 1}}, 0.25},          // chained through atom 1
        {{{1, 0}, {0, 0}}, 0.25},          // same event twice
        {{{0, 0}, {0, 0}, {2, 1}}, 0.125},
    };
    const int trials = 100000;
    int ci = 0;
    for (const auto& tc : cases) {
      Rng rng = Rng::stream(77, ci++);
      int passes = 0;
      for (int t = 0; t < trials; ++t)
        if (s_check(tc.seq, inst, rng)) ++passes;
      double rate = static_cast<double>(passes) / trials;
      double sigma = std::sqrt(tc.exact * (1 - tc.exact) / trials);
      CHECK(std::abs(rate - tc.exact) <= 4 * sigma);
    }
  }

  SUBCASE("single elementary event occurs at its own probability") {
    std::vector<Event> evs;
    evs.push_back(Event::elementary(0, {0}, {0}));
    Instance single(uniform_domains(1, 2), evs);
    Rng rng(11);
    const int trials = 100000;
    int passes = 0;
    for (int t = 0; t < trials; ++t)
      if (s_check({{0, 0}}, single, rng)) ++passes;
    double rate = static_cast<double>(passes) / trials;
    CHECK(std::abs(rate - 0.5) <= 4 * std::sqrt(0.25 / trials));
  }
}

TEST_CASE("tree counting recurrence on closed forms") {
  SUBCASE("single power 1: geometric") {
    std::vector<std::pair<int, double>> w{{1, 0.3}};
    std::vector<double> q = q_sequence<double>(w, 12);
    for (int n = 0; n <= 12; ++n)
      CHECK(q[n] == doctest::Approx(std::pow(0.3, n)).epsilon(1e-12));
  }

  SUBCASE("single power 2 with unit weight: Catalan numbers") {
    std::vector<std::pair<int, double>> w{{2, 1.0}};
    std::vector<double> q = q_sequence<double>(w, 12);
    const double catalan[] = {1,    1,    2,    5,     14,    42,   132,
                              429,  1430, 4862, 16796, 58786, 208012};
    for (int n = 0; n <= 12; ++n) CHECK(q[n] == catalan[n]);
  }

  SUBCASE("integer instantiation stays exact") {
    std::vector<std::pair<int, long long>> w{{2, 1}};
    std::vector<long long> q = q_sequence<long long>(w, 15);
    CHECK(q[10] == 16796);
    CHECK(q[15] == 9694845);
  }

  SUBCASE("mixed powers against hand-expanded terms") {
    // Q_1 = a + b, Q_2 = (a+b)(a+2b), Q_3 = (a+b)(a^2 + 5ab + 5b^2).
    const double a = 0.5, b = 0.25;
    std::vector<std::pair<int, double>> w{{1, a}, {2, b}};
    std::vector<double> q = q_sequence<double>(w, 3);
    CHECK(q[0] == 1.0);
    CHECK(q[1] == doctest::Approx(a + b).epsilon(1e-15));
    CHECK(q[2] == doctest::Approx((a + b) * (a + 2 * b)).epsilon(1e-15));
    CHECK(q[3] ==
          doctest::Approx((a + b) * (a * a + 5 * a * b + 5 * b * b))
              .epsilon(1e-15));
  }

  SUBCASE("powers below one are rejected") {
    std::vector<std::pair<int, double>> w{{0, 1.0}};
    CHECK_THROWS_AS(q_sequence<double>(w, 3), std::invalid_argument);
    CHECK_THROWS_AS(q_log_sequence(w, 3), std::invalid_argument);
  }
}

TEST_CASE("log-space tree counts agree with direct evaluation") {
  std::vector<std::pair<int, double>> w{{1, 0.5}, {3, 0.125}};
  std::vector<double> direct = q_sequence<double>(w, 30);
  std::vector<double> lq = q_log_sequence(w, 30);
  for (int n = 0; n <= 30; ++n)
    CHECK(std::exp(lq[n]) == doctest::Approx(direct[n]).epsilon(1e-9));

  SUBCASE("zero-weight entries are dropped") {
    std::vector<std::pair<int, double>> wz{{1, 0.5}, {2, 0.0}};
    std::vector<std::pair<int, double>> w1{{1, 0.5}};
    CHECK(q_log_sequence(wz, 10) == q_log_sequence(w1, 10));
  }

  SUBCASE("negative weights are rejected") {
    std::vector<std::pair<int, double>> wn{{1, -0.5}};
    CHECK_THROWS_AS(q_log_sequence(wn, 3), std::invalid_argument);
  }

  SUBCASE("plain values switch to the log path for long prefixes") {
    std::vector<std::pair<int, double>> wg{{1, 0.5}};
    std::vector<double> small = q_values(wg, 20);
    std::vector<double> ds = q_sequence<double>(wg, 20);
    CHECK(small == ds);

    std::vector<double> big = q_values(wg, 250);
    std::vector<double> lg = q_log_sequence(wg, 250);
    CHECK(big[250] == doctest::Approx(std::exp(lg[250])).epsilon(1e-12));
    CHECK(big[0] == 1.0);
  }
}

TEST_CASE("spectrum weights extraction") {
  PowerSpectrum spec;
  spec.terms[1] = {0.1, 2.0};
  spec.terms[3] = {0.01, 5.0};
  std::vector<std::pair<int, double>> w = spectrum_weights(spec);
  REQUIRE(w.size() == 2);
  CHECK(w[0].first == 1);
  CHECK(w[0].second == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(w[1].first == 3);
  CHECK(w[1].second == doctest::Approx(0.05).epsilon(1e-15));

  PowerSpectrum tailed = spec;
  tailed.tail = SpectrumTail{0.5, {1.0}, 4};
  CHECK_THROWS_AS(spectrum_weights(tailed), std::invalid_argument);
}

TEST_CASE("tree counts stay under the convergence-rate power bound") {
  SUBCASE("binary trees at weight 1/8 against rate one half") {
    PowerSpectrum spec;
    spec.terms[2] = {0.125, 1.0};
    QBoundReport rep = rho_bound_check(spec, 40);
    CHECK(rep.rho == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(rep.ok);
    CHECK(rep.max_excess == 0.0);  // tight only at n = 0
    // Q_5 = 42 / 8^5.
    CHECK(std::exp(rep.log_q[5]) ==
          doctest::Approx(42.0 / 32768.0).epsilon(1e-9));
  }

  SUBCASE("pure chains approach their weight as the rate") {
    PowerSpectrum spec;
    spec.terms[1] = {0.3, 1.0};
    QBoundReport rep = rho_bound_check(spec, 25);
    CHECK(rep.rho == doctest::Approx(0.3).epsilon(1e-5));
    CHECK(rep.ok);
  }

  SUBCASE("empty spectrum") {
    QBoundReport rep = rho_bound_check(PowerSpectrum{}, 5);
    CHECK(rep.rho == 0.0);
    CHECK(rep.ok);
    CHECK(rep.log_q[0] == 0.0);
    CHECK(std::isinf(rep.log_q[3]));
  }

  SUBCASE("assorted convergent spectra") {
    PowerSpectrum s1;
    s1.terms[1] = {0.05, 2.0};
    PowerSpectrum s2;
    s2.terms[1] = {0.02, 3.0};
    s2.terms[2] = {0.01, 4.0};
    PowerSpectrum s3;
    s3.terms[2] = {0.03, 2.0};
    s3.terms[3] = {0.005, 5.0};
    for (const PowerSpectrum& spec : {s1, s2, s3}) {
      QBoundReport rep = rho_bound_check(spec, 25);
      CHECK(min_ratio(spec).rho < 1.0);
      CHECK(rep.ok);
      CHECK(rep.max_excess <= std::log1p(1e-9));
    }
  }
}
