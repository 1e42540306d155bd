#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lll/apps.hpp"
#include "lll/core.hpp"
#include "lll/criteria.hpp"
#include "lll/graph.hpp"
#include "lll/rng.hpp"

using namespace lll;

namespace {

bool no_event_occurs(const Instance& inst, const Configuration& c) {
  for (const Event& ev : inst.events())
    if (ev.occurs_if_assigned(c)) return false;
  return true;
}

Configuration random_config(const Instance& inst, Rng& rng) {
  Configuration c(inst.atom_count());
  for (AtomId a = 0; a < inst.atom_count(); ++a)
    c[a] = static_cast<int>(rng.bounded(inst.domain(a).size));
  return c;
}

int count_events_of_power(const Instance& inst, int s) {
  int n = 0;
  for (const Event& ev : inst.events())
    if (ev.power() == s) ++n;
  return n;
}

}  // namespace

TEST_CASE("repetition instance events, dedup, and probabilities") {
  SUBCASE("single edge gives one half-matching event") {
    NonrepetitiveSpec spec{SimpleGraph::path_graph(2), 3, 1};
    Instance inst = build_nonrepetitive_instance(spec);
    CHECK(inst.atom_count() == 2);
    REQUIRE(inst.event_count() == 1);
    CHECK(inst.event(0).power() == 1);
    CHECK(event_probability(inst.event(0), inst) ==
          doctest::Approx(1.0 / 3).epsilon(1e-12));
  }

  SUBCASE("four-cycle merges the four long paths into one event") {
    // The four paths on all four vertices induce the same pair matching
    // {0,2},{1,3}, so they are one event; the edges stay separate.
    NonrepetitiveSpec spec{SimpleGraph::cycle_graph(4), 3, 2};
    Instance inst = build_nonrepetitive_instance(spec);
    CHECK(inst.event_count() == 5);
    CHECK(count_events_of_power(inst, 1) == 4);
    CHECK(count_events_of_power(inst, 2) == 1);
    for (const Event& ev : inst.events()) {
      const double expected = std::pow(3.0, -ev.power());
      CHECK(event_probability(ev, inst) ==
            doctest::Approx(expected).epsilon(1e-12));
      CHECK(static_cast<int>(ev.support().size()) == 2 * ev.power());
    }
  }

  SUBCASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(
        build_nonrepetitive_instance({SimpleGraph::path_graph(2), 0, 1}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        build_nonrepetitive_instance({SimpleGraph::path_graph(2), 3, 0}),
        std::invalid_argument);
  }
}

TEST_CASE("repetition verifier distinguishes repetition from properness") {
  NonrepetitiveSpec spec{SimpleGraph::cycle_graph(4), 3, 2};

  // Proper two-coloring of the cycle, but the color word repeats around it.
  Configuration repetitive(4);
  repetitive[0] = 0;
  repetitive[1] = 1;
  repetitive[2] = 0;
  repetitive[3] = 1;
  CHECK_FALSE(verify_nonrepetitive(spec, repetitive));

  Configuration fine(4);
  fine[0] = 0;
  fine[1] = 1;
  fine[2] = 2;
  fine[3] = 1;
  CHECK(verify_nonrepetitive(spec, fine));

  Configuration wrong_size(3);
  wrong_size[0] = wrong_size[1] = wrong_size[2] = 0;
  CHECK_THROWS_AS(verify_nonrepetitive(spec, wrong_size),
                  std::invalid_argument);
  Configuration partial(4);
  partial[0] = 0;
  CHECK_THROWS_AS(verify_nonrepetitive(spec, partial), std::invalid_argument);
}

TEST_CASE("verifiers agree with the event families on random configurations") {
  SUBCASE("repetition on a cycle and a grid") {
    const NonrepetitiveSpec specs[] = {
        {SimpleGraph::cycle_graph(4), 3, 2},
        {SimpleGraph::grid_graph(3, 3), 4, 2},
    };
    Rng rng(515);
    for (const auto& spec : specs) {
      Instance inst = build_nonrepetitive_instance(spec);
      for (int t = 0; t < 40; ++t) {
        Configuration c = random_config(inst, rng);
        CHECK(verify_nonrepetitive(spec, c) == no_event_occurs(inst, c));
      }
    }
  }

  SUBCASE("frugality on a star and a cycle") {
    const FrugalSpec specs[] = {
        {SimpleGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}}), 3, 2},
        {SimpleGraph::cycle_graph(5), 3, 1},
    };
    Rng rng(616);
    for (const auto& spec : specs) {
      Instance inst = build_frugal_instance(spec);
      for (int t = 0; t < 50; ++t) {
        Configuration c = random_config(inst, rng);
        CHECK(verify_frugal(spec, c) == no_event_occurs(inst, c));
      }
    }
  }
}

TEST_CASE("color-budget root and the two color bounds") {
  SUBCASE("the defining quotient is solved to high precision") {
    double prev = 1e18;
    for (int delta : {3, 4, 10, 100}) {
      NonrepetitiveBounds nb = nonrepetitive_bounds(delta);
      CHECK(nb.residual < 1e-9);
      CHECK(nb.b0 < prev);  // strictly decreasing in the degree
      prev = nb.b0;
      CHECK(nb.pi_bound ==
            doctest::Approx((1 + nb.b0) * delta * delta).epsilon(1e-12));
      CHECK(nb.xi0 ==
            doctest::Approx(nonrepetitive_xi0(nb.b0)).epsilon(1e-12));
    }
  }

  SUBCASE("degree four solves the quotient at exactly two") {
    // (sqrt(25^3) + 8*4 + 72 + 27) / (8*8) = 256/64 = 4.
    NonrepetitiveBounds nb = nonrepetitive_bounds(4);
    CHECK(nb.b0 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(nb.xi0 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(nb.pi_bound == doctest::Approx(48.0).epsilon(1e-9));
  }

  SUBCASE("budget bound beats the comparison bound only for small degrees") {
    NonrepetitiveBounds small = nonrepetitive_bounds(3);
    REQUIRE(small.comparison_bound.has_value());
    CHECK(small.pi_bound < *small.comparison_bound);

    NonrepetitiveBounds large = nonrepetitive_bounds(100);
    REQUIRE(large.comparison_bound.has_value());
    CHECK(large.pi_bound > *large.comparison_bound);

    const double cross = nonrepetitive_crossover();
    CHECK(cross > 4.0);
    CHECK(cross < 100.0);

    // The comparison bound needs degree above two.
    CHECK_FALSE(nonrepetitive_bounds(2).comparison_bound.has_value());
    CHECK_THROWS_AS(nonrepetitive_bounds(1), std::invalid_argument);
  }
}

TEST_CASE("budget minimizer matches the spectrum minimizer") {
  SUBCASE("the ratio minimizer depends only on the budget") {
    for (double b : {0.5, 1.0, 2.0}) {
      const double xi0 = nonrepetitive_xi0(b);
      CHECK(xi0 == doctest::Approx((std::sqrt(9 + 8 * b) - 3) / 4)
                       .epsilon(1e-15));
      for (int delta : {3, 5}) {
        MinRatioResult mr =
            min_ratio(nonrepetitive_spectrum(delta, (1 + b) * delta * delta));
        CHECK(mr.xi_star == doctest::Approx(xi0).epsilon(1e-6));
      }
    }
  }

  SUBCASE("the budget root puts the spectrum exactly on the boundary") {
    for (int delta : {3, 4, 10}) {
      NonrepetitiveBounds nb = nonrepetitive_bounds(delta);
      MinRatioResult mr =
          min_ratio(nonrepetitive_spectrum(delta, nb.pi_bound));
      CHECK(mr.rho == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(mr.xi_star == doctest::Approx(nb.xi0).epsilon(1e-6));
    }
  }

  SUBCASE("budgets on either side of the root flip the verdict") {
    // b0(5) sits between 1 and 2.
    CHECK(min_ratio(nonrepetitive_spectrum(5, 75.0)).verdict() ==
          Verdict::holds);
    CHECK(min_ratio(nonrepetitive_spectrum(5, 50.0)).verdict() ==
          Verdict::fails);
    CHECK(min_ratio(nonrepetitive_spectrum(5, 37.5)).verdict() ==
          Verdict::fails);
  }

  SUBCASE("spectrum shape and validation") {
    PowerSpectrum spec = nonrepetitive_spectrum(3, 48.0);
    CHECK(spec.terms.empty());
    REQUIRE(spec.tail.has_value());
    CHECK(spec.tail->ratio == doctest::Approx(9.0 / 48).epsilon(1e-15));
    CHECK(spec.tail->poly == std::vector<double>{0.0, 1.0 / 3});
    CHECK(spec.tail->start == 1);
    CHECK_THROWS_AS(nonrepetitive_spectrum(3, 9.0), std::invalid_argument);
    CHECK_THROWS_AS(nonrepetitive_spectrum(0, 48.0), std::invalid_argument);
  }
}

TEST_CASE("facial list instance drops zero-probability events") {
  SimpleGraph tri = SimpleGraph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  FaceSet face = make_face_set(tri, {{0, 1, 2}});

  SUBCASE("identical lists keep all corner events") {
    FacialThueSpec spec{tri, face, {{0, 1}, {0, 1}, {0, 1}}, 2, 1};
    Instance inst = build_facial_thue_instance(spec);
    CHECK(inst.atom_count() == 3);  // atoms are edges
    REQUIRE(inst.event_count() == 3);
    for (const Event& ev : inst.events()) {
      CHECK(ev.power() == 1);
      CHECK(event_probability(ev, inst) ==
            doctest::Approx(0.5).epsilon(1e-12));
    }
  }

  SUBCASE("pairwise disjoint lists kill every event") {
    FacialThueSpec spec{tri, face, {{0, 1}, {2, 3}, {4, 5}}, 2, 1};
    CHECK(build_facial_thue_instance(spec).event_count() == 0);
  }

  SUBCASE("partially shared lists keep the overlapping corners") {
    // Corner at vertex 1 (edges {0,1},{1,2}) shares no color and is dropped;
    // the two corners through vertex 0 share one color each.
    FacialThueSpec spec{tri, face, {{0, 1}, {1, 2}, {2, 3}}, 2, 1};
    Instance inst = build_facial_thue_instance(spec);
    REQUIRE(inst.event_count() == 2);
    for (const Event& ev : inst.events())
      CHECK(event_probability(ev, inst) ==
            doctest::Approx(0.25).epsilon(1e-12));
  }

  SUBCASE("a quadrilateral face adds one merged whole-boundary event") {
    SimpleGraph quad = SimpleGraph::cycle_graph(4);
    FaceSet qface = make_face_set(quad, {{0, 1, 2, 3}});
    FacialThueSpec spec{quad, qface, {{0, 1}, {0, 1}, {0, 1}, {0, 1}}, 2, 2};
    Instance inst = build_facial_thue_instance(spec);
    CHECK(inst.event_count() == 5);
    CHECK(count_events_of_power(inst, 1) == 4);
    CHECK(count_events_of_power(inst, 2) == 1);
  }

  SUBCASE("list shape errors") {
    CHECK_THROWS_AS(
        build_facial_thue_instance({tri, face, {{0, 1}, {0, 1}}, 2, 1}),
        std::invalid_argument);
    CHECK_THROWS_AS(build_facial_thue_instance(
                        {tri, face, {{0, 1}, {0, 1}, {0, 1, 2}}, 2, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_facial_thue_instance(
                        {tri, face, {{0, 1}, {0, 1}, {0, 1}}, 0, 1}),
                    std::invalid_argument);
  }
}

TEST_CASE("facial verifier agrees exhaustively with the event family") {
  SUBCASE("triangle, three colors") {
    SimpleGraph tri = SimpleGraph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
    FacialThueSpec spec{tri,
                        make_face_set(tri, {{0, 1, 2}}),
                        {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}},
                        3,
                        1};
    Instance inst = build_facial_thue_instance(spec);
    int good = 0;
    for (int code = 0; code < 27; ++code) {
      Configuration c(3);
      c[0] = code % 3;
      c[1] = (code / 3) % 3;
      c[2] = code / 9;
      const bool ok = verify_facial(spec, c);
      CHECK(ok == no_event_occurs(inst, c));
      good += ok;
    }
    // Three pairwise adjacent edges: exactly the proper 3-colorings survive.
    CHECK(good == 6);
  }

  SUBCASE("quadrilateral with the whole-boundary event, two colors") {
    SimpleGraph quad = SimpleGraph::cycle_graph(4);
    FacialThueSpec spec{quad,
                        make_face_set(quad, {{0, 1, 2, 3}}),
                        {{0, 1}, {0, 1}, {0, 1}, {0, 1}},
                        2,
                        2};
    Instance inst = build_facial_thue_instance(spec);
    for (int code = 0; code < 16; ++code) {
      Configuration c(4);
      for (int i = 0; i < 4; ++i) c[i] = (code >> i) & 1;
      CHECK(verify_facial(spec, c) == no_event_occurs(inst, c));
    }
  }

  SUBCASE("wrong shapes throw") {
    SimpleGraph tri = SimpleGraph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
    FacialThueSpec spec{tri,
                        make_face_set(tri, {{0, 1, 2}}),
                        {{0, 1}, {0, 1}, {0, 1}},
                        2,
                        1};
    Configuration c(2);
    c[0] = c[1] = 0;
    CHECK_THROWS_AS(verify_facial(spec, c), std::invalid_argument);
    Configuration partial(3);
    partial[0] = 0;
    CHECK_THROWS_AS(verify_facial(spec, partial), std::invalid_argument);
  }
}

TEST_CASE("facial series thresholds") {
  PowerSpectrum spec = facial_thue_spectrum(12.0);
  CHECK(spec.terms.empty());
  REQUIRE(spec.tail.has_value());
  CHECK(spec.tail->ratio == doctest::Approx(1.0 / 12).epsilon(1e-15));
  CHECK(spec.tail->poly == std::vector<double>{0.0, 4.0});
  CHECK(spec.tail->start == 1);

  CHECK(min_ratio(facial_thue_spectrum(12.0)).verdict() == Verdict::holds);
  CHECK(min_ratio(facial_thue_spectrum(13.0)).verdict() == Verdict::holds);
  CHECK(min_ratio(facial_thue_spectrum(11.0)).verdict() == Verdict::fails);

  // The exact threshold: at list size phi^5 (phi the golden ratio) the
  // minimum ratio is exactly 1, attained at xi = phi.
  const double golden = 0.5 * (1.0 + std::sqrt(5.0));
  MinRatioResult mr = min_ratio(facial_thue_spectrum(std::pow(golden, 5)));
  CHECK(mr.rho == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mr.xi_star == doctest::Approx(golden).epsilon(1e-6));

  CHECK_THROWS_AS(facial_thue_spectrum(1.0), std::invalid_argument);
}

TEST_CASE("frugality instance drops stars that duplicate edges") {
  SUBCASE("complete graph with budget one") {
    FrugalSpec spec{SimpleGraph::complete_graph(4), 5, 1};
    Instance inst = build_frugal_instance(spec);
    CHECK(inst.event_count() == 6);  // all pair stars coincide with edges
    for (const Event& ev : inst.events())
      CHECK(ev.support().size() == 2);
  }

  SUBCASE("star graph with budget two keeps one neighborhood event") {
    FrugalSpec spec{SimpleGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}}), 3, 2};
    Instance inst = build_frugal_instance(spec);
    REQUIRE(inst.event_count() == 4);
    CHECK(count_events_of_power(inst, 1) == 3);
    CHECK(count_events_of_power(inst, 2) == 1);
    for (const Event& ev : inst.events()) {
      const double expected =
          ev.power() == 1 ? 1.0 / 3 : 1.0 / 9;  // monochromatic supports
      CHECK(event_probability(ev, inst) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(build_frugal_instance({SimpleGraph::path_graph(2), 0, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_frugal_instance({SimpleGraph::path_graph(2), 2, 0}),
                    std::invalid_argument);
  }
}

TEST_CASE("frugality verifier counts repeated colors inside neighborhoods") {
  FrugalSpec spec{SimpleGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}}), 3, 2};

  Configuration ok(4);
  ok[0] = 0;
  ok[1] = 1;
  ok[2] = 1;
  ok[3] = 2;
  CHECK(verify_frugal(spec, ok));

  Configuration crowded = ok;
  crowded[3] = 1;  // color 1 appears three times around vertex 0
  CHECK_FALSE(verify_frugal(spec, crowded));

  Configuration improper = ok;
  improper[1] = 0;  // shares the center's color
  CHECK_FALSE(verify_frugal(spec, improper));

  Configuration short_config(3);
  short_config[0] = short_config[1] = short_config[2] = 0;
  CHECK_THROWS_AS(verify_frugal(spec, short_config), std::invalid_argument);
}

TEST_CASE("frugality spectrum shape and color bounds") {
  SUBCASE("spectrum terms") {
    PowerSpectrum two = frugal_spectrum(10, 2, 55.0);
    REQUIRE(two.terms.size() == 2);
    CHECK(two.terms.at(1).p == doctest::Approx(1.0 / 55).epsilon(1e-15));
    CHECK(two.terms.at(1).d == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(two.terms.at(2).p ==
          doctest::Approx(1.0 / (55.0 * 55.0)).epsilon(1e-15));
    CHECK(two.terms.at(2).d == doctest::Approx(500.0).epsilon(1e-12));

    // Budget one merges both families into the power-one term.
    PowerSpectrum one = frugal_spectrum(3, 1, 10.0);
    REQUIRE(one.terms.size() == 1);
    CHECK(one.terms.at(1).d == doctest::Approx(12.0).epsilon(1e-12));

    // Degenerate counts clamp up to one so validation still passes.
    PowerSpectrum tiny = frugal_spectrum(1, 5, 10.0);
    CHECK(tiny.terms.at(5).d == 1.0);

    CHECK_THROWS_AS(frugal_spectrum(0, 1, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(frugal_spectrum(3, 0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(frugal_spectrum(3, 1, 0.5), std::invalid_argument);
  }

  SUBCASE("generic color count stays under the closed form") {
    const struct {
      int delta, beta;
      double closed;
    } cases[] = {
        {10, 2, 10.0 + 20.0 * std::sqrt(5.0)},  // 54.7213595...
        {20, 3, 76.46216173},
        {50, 4, 155.40925534},
    };
    for (const auto& tc : cases) {
      FrugalBound fb = frugal_bound(tc.delta, tc.beta);
      REQUIRE(fb.closed_form.has_value());
      CHECK(*fb.closed_form == doctest::Approx(tc.closed).epsilon(1e-8));
      CHECK(fb.generic_k <= static_cast<int>(std::ceil(*fb.closed_form)));
      CHECK(fb.generic_k > tc.delta);
    }
  }

  SUBCASE("budget one has no closed form but still a generic count") {
    FrugalBound fb = frugal_bound(5, 1);
    CHECK_FALSE(fb.closed_form.has_value());
    // Merged weight 30/k: the ratio infimum drops below one at k = 31.
    CHECK(fb.generic_k == 31);
  }
}

TEST_CASE("per-atom event counts stay under the analytic degrees") {
  SUBCASE("repetition on a grid") {
    NonrepetitiveSpec spec{SimpleGraph::grid_graph(3, 3), 20, 2};
    Instance inst = build_nonrepetitive_instance(spec);
    const int delta = spec.graph.max_degree();
    CHECK(d_s_exact(inst, 1) == delta);  // paths on two vertices are edges
    CHECK(d_s_exact(inst, 2) >= 1);
    CHECK(d_s_exact(inst, 2) <= 2 * delta * delta * delta);
  }

  SUBCASE("facial events on the quadrilateral") {
    SimpleGraph quad = SimpleGraph::cycle_graph(4);
    FacialThueSpec spec{quad,
                        make_face_set(quad, {{0, 1, 2, 3}}),
                        {{0, 1}, {0, 1}, {0, 1}, {0, 1}},
                        2,
                        2};
    Instance inst = build_facial_thue_instance(spec);
    CHECK(d_s_exact(inst, 1) == 2);  // two corners per edge on one face
    CHECK(d_s_exact(inst, 2) == 1);  // the merged whole-boundary event
    for (int s : {1, 2}) CHECK(d_s_exact(inst, s) <= 4 * s);
  }

  SUBCASE("frugal stars through one vertex") {
    FrugalSpec spec{
        SimpleGraph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}), 4, 2};
    Instance inst = build_frugal_instance(spec);
    const double delta = spec.graph.max_degree();
    CHECK(d_s_exact(inst, 1) == 4);  // edges at the center
    CHECK(d_s_exact(inst, 2) == 3);  // leaf triples through one leaf
    CHECK(d_s_exact(inst, 2) <=
          std::pow(delta, 1 + spec.beta) / 2.0);  // delta^(1+beta)/beta!
  }
}
