// Three coloring problems encoded as resampling instances.
//
// Nonrepetitive coloring: one repetitive event per simple path on 2n
// vertices (n <= L_max); no path may read the same color word twice in a
// row. Facial Thue list coloring: the same over boundary walks of a plane
// graph, with per-edge color lists of a common size k. Frugal coloring:
// proper coloring where no color appears more than beta times inside any
// neighborhood, via monochromatic-edge and monochromatic-star events.
//
// Each problem also carries its closed-form weight spectrum (the full,
// untruncated family), the bound formulas on the number of colors, and an
// exhaustive verifier independent of the event machinery.
#pragma once

#include <optional>
#include <vector>

#include "lll/core.hpp"
#include "lll/criteria.hpp"
#include "lll/graph.hpp"

namespace lll {

struct NonrepetitiveSpec {
  SimpleGraph graph;
  int k = 0;      // colors per vertex
  int L_max = 1;  // events cover paths of 2..2*L_max vertices
};

struct FacialThueSpec {
  SimpleGraph graph;
  FaceSet faces;
  // One color list per canonical edge id (graph.edges() order), all size k.
  std::vector<std::vector<int>> lists;
  int k = 0;
  int L_max = 1;
};

struct FrugalSpec {
  SimpleGraph graph;
  int k = 0;
  int beta = 1;
};

// Atoms are vertices; events are deduplicated by (support, half-matching).
Instance build_nonrepetitive_instance(const NonrepetitiveSpec& spec);
// Atoms are edges (domain = index into the edge's list); events with
// occurrence probability zero are dropped.
Instance build_facial_thue_instance(const FacialThueSpec& spec);
// Atoms are vertices; star events duplicating an edge event (beta = 1 on a
// triangle, say) are dropped.
Instance build_frugal_instance(const FrugalSpec& spec);

// Closed-form spectra of the untruncated families.
// w_s = s * delta^(2s-1) / k^s; needs k > delta^2.
PowerSpectrum nonrepetitive_spectrum(int delta, double k);
// w_s = 4s / k^s; needs k > 1.
PowerSpectrum facial_thue_spectrum(double k);
// w_1 = delta/k and w_beta = delta^(1+beta)/(beta! k^beta), merged at
// beta = 1; counts are clamped up to 1 so the spectrum stays valid for
// degenerate beta >= delta.
PowerSpectrum frugal_spectrum(int delta, int beta, double k);

// Color-budget parameter of the nonrepetitive bound: the root b0 of
//   (sqrt((8b+9)^3) + 8b^2 + 36b + 27) / (8b^3) = delta
// (strictly decreasing left side), the resulting bound (1+b0) delta^2, and
// the alternative bound delta^2 + delta^(3/2) (3/2^(2/3) +
// 2^(2/3)/(delta^(1/3)-2^(1/3))), which needs delta > 2.
struct NonrepetitiveBounds {
  double b0 = 0;
  double residual = 0;  // |g(b0) - delta|
  double xi0 = 0;       // ratio minimizer implied by b0
  double pi_bound = 0;  // (1 + b0) delta^2
  std::optional<double> comparison_bound;
};
NonrepetitiveBounds nonrepetitive_bounds(int delta);

// Minimizer of the induced ratio at budget b: (sqrt(9+8b) - 3) / 4.
double nonrepetitive_xi0(double b);

// Degree (as a real parameter) where pi_bound and comparison_bound cross;
// pi_bound is smaller below it.
double nonrepetitive_crossover();

struct FrugalBound {
  // delta^(1+1/beta)/(beta!)^(1/beta) * beta (beta-1)^(1/beta-1) + delta;
  // undefined at beta = 1.
  std::optional<double> closed_form;
  // Smallest k whose frugal spectrum passes min_ratio.
  int generic_k = 0;
};
FrugalBound frugal_bound(int delta, int beta);

// Exhaustive verifiers (path scan / boundary scan / neighborhood count).
// Each throws std::invalid_argument on a configuration of the wrong shape.
bool verify_nonrepetitive(const NonrepetitiveSpec& spec, const Configuration& c);
bool verify_facial(const FacialThueSpec& spec, const Configuration& c);
bool verify_frugal(const FrugalSpec& spec, const Configuration& c);

}  // namespace lll
