// Convergence criteria.
//
// Weighted criteria over a dependency graph, strongest to weakest
// denominator: independent-set sum Xi (cluster expansion), Dobrushin
// product, Kotecky-Preiss exponential; plus the per-atom clique bound that
// replaces Xi when neighborhoods are too large to enumerate.
//
// Power-based criteria over a power spectrum {(s, p_s, d_s)}: the weight
// series phi(xi) = sum_s p_s d_s (xi+1)^s, its minimum ratio
// rho = min_{xi>0} phi(xi)/xi (runs converge when rho < 1), the equivalent
// entropy form min_alpha (1 + sum_s d_s alpha^s)/alpha < k for uniform
// instances, and the support-exponent global condition with its q-th power
// refinement. step_threshold turns rho into the step count after which the
// tail bound rho^{n/2} kicks in.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lll/core.hpp"

namespace lll {

using WeightVector = std::vector<double>;  // mu per event id

// One-dimensional search bound for xi/alpha minimizations.
constexpr double kXiSearchBound = 1e6;
// Width of the indifference band around a strict threshold.
constexpr double kBoundaryTolerance = 1e-9;

enum class Verdict { holds, boundary, fails };
const char* verdict_name(Verdict v);

// Geometric-polynomial tail: weights P(s) * ratio^s for every power
// s >= start, with P(s) = sum_j poly[j] * s^j.
struct SpectrumTail {
  double ratio = 0;
  std::vector<double> poly;
  int start = 1;
};

// Finite explicit terms plus an optional closed-form tail. For explicit
// powers, p_s is the worst event probability at that power and d_s the
// largest number of power-s events through one atom; the series weight is
// w_s = p_s * d_s. The tail describes w_s directly.
struct PowerSpectrum {
  struct Term {
    double p = 0;
    double d = 0;
  };
  std::map<int, Term> terms;
  std::optional<SpectrumTail> tail;

  // Largest admissible xi (exclusive); infinite without a tail.
  double xi_radius() const;
};

// Throws std::invalid_argument unless p_s in (0,1], d_s >= 1, tail ratio in
// (0,1) applying beyond every explicit power.
void validate(const PowerSpectrum& spec);

// sum_{s >= start} P(s) u^s with P given by coefficients; requires |u| < 1.
double poly_geom_sum(const std::vector<double>& coeffs, double u, int start);

// Weight series and its derivative; throw std::domain_error("series
// divergent") at or beyond the tail radius.
double phi(const PowerSpectrum& spec, double xi);
double phi_prime(const PowerSpectrum& spec, double xi);

struct MinRatioResult {
  double rho = 0;       // phi(xi*)/xi*
  double xi_star = 0;   // minimizer (or the search bound when not attained)
  bool attained = true; // false: infimum approached at the search bound
  Verdict verdict() const;
};
MinRatioResult min_ratio(const PowerSpectrum& spec);

// Independent-set sum over the inclusive neighborhood of an event.
// Throws std::runtime_error (mentioning the clique bound) when the
// neighborhood exceeds `cap` vertices.
double xi_cell(EventId e, const WeightVector& mu, const DependencyGraph& dep,
               int cap = 25);

struct ClassicalBounds {
  double dobrushin = 0;  // prod_{f in N*(e)} (1 + mu_f)
  double kp = 0;         // exp(sum_{f in N*(e)} mu_f)
};
ClassicalBounds classical_bounds(EventId e, const WeightVector& mu,
                                 const DependencyGraph& dep);

// Per-atom clique bound: prod_{y in supp(e)} (1 + sum_{f ni y} mu_f).
double xi_clique(const Event& e, const WeightVector& mu, const Instance& inst);

struct CellReport {
  Verdict cell = Verdict::fails;  // prob * Xi <= mu for every event
  Verdict lll = Verdict::fails;   // prob * Dobrushin <= mu for every event
  int cell_violations = 0;
  int lll_violations = 0;
  bool used_clique_fallback = false;
  double mu_sum = 0;             // expected-steps bound when cell holds
  double worst_cell_margin = 0;  // max over events of prob*Xi - mu
};
CellReport check_cell(const Instance& inst, const WeightVector& mu,
                      int cap = 25);

struct EntropyResult {
  Verdict verdict = Verdict::fails;
  double alpha_star = 0;
  double lhs_min = 0;
  bool attained = true;
};
// Uniform setting only (p_s * k^s == 1 for every explicit power, tail
// weights written over p_s = k^-s); throws std::invalid_argument otherwise.
EntropyResult check_entropy_condition(const PowerSpectrum& spec, int k);

struct GlobalResult {
  bool holds = false;
  double a_star = 0;           // minimizer of the margin
  double margin = 0;           // sup_x LHS(a*) - (e^{a*} - 1)
  double expected_steps = 0;   // sum_e prob(e) e^{a* |supp(e)|} when holds
  double q = 0;                // max |supp| / power over the family
  std::optional<Verdict> q_form;  // uniform instances: (1+D(a))^q/a <= k
  std::optional<double> q_form_alpha;
  std::optional<double> q_form_min;
};
GlobalResult check_global_cell(const Instance& inst, double a_max = 50.0);

struct StepThreshold {
  std::int64_t n0 = 0;   // smallest n where the rho^{n/2} tail bound applies
  double t_bound = 0;    // n0(n0+1)/2 + sum_{n>n0} n rho^{n/2}
};
// Throws std::domain_error("criterion not satisfied") when rho >= 1.
StepThreshold step_threshold(double rho, int m);

// Exact spectrum of a finite instance: explicit powers present in the
// family, worst probability and exact per-atom counts; powers whose events
// all have probability zero are dropped.
PowerSpectrum spectrum_from_instance(const Instance& inst);

struct CriterionResult {
  std::string name;
  Verdict verdict = Verdict::fails;
  std::vector<std::pair<std::string, double>> witness;
  double tolerance = 0;
  std::string note;
};

struct CriterionReport {
  std::vector<CriterionResult> entries;
  std::string to_text() const;
  std::string to_csv() const;
};

}  // namespace lll
