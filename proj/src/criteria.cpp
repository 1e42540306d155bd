#include "lll/criteria.hpp"

#include "lll/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lll {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Eulerian numbers E(n, k), rows built on demand. A_j(u) := sum_{s>=1}
// s^j u^s = (sum_k E(j,k) u^{k+1}) / (1-u)^{j+1}, with A_0 = u/(1-u).
std::vector<std::vector<double>> eulerian_rows(int degree) {
  std::vector<std::vector<double>> rows(degree + 1);
  rows[0] = {1.0};
  for (int n = 1; n <= degree; ++n) {
    rows[n].assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
      double up =
          (k < static_cast<int>(rows[n - 1].size())) ? rows[n - 1][k] : 0.0;
      double left = (k > 0) ? rows[n - 1][k - 1] : 0.0;
      rows[n][k] = (k + 1) * up + (n - k) * left;
    }
  }
  return rows;
}

double power_sum_all(int j, double u,
                     const std::vector<std::vector<double>>& rows) {
  if (j == 0) return u / (1.0 - u);
  double num = 0;
  for (int k = j - 1; k >= 0; --k) num = num * u + rows[j][k];
  num *= u;  // sum_k E(j,k) u^{k+1}, Horner from the top
  return num / std::pow(1.0 - u, j + 1);
}

double poly_eval(const std::vector<double>& coeffs, double s) {
  double v = 0;
  for (size_t j = coeffs.size(); j-- > 0;) v = v * s + coeffs[j];
  return v;
}

// h(x) = slope * x * F'(x) - F(x) - shift is nondecreasing with
// h(0+) = -F(0+) - shift < 0; its zero is the minimizer of
// (shift + F(x))^{slope'} / x family members used below.
struct RatioMinimum {
  double x = 0;
  bool attained = true;
};

template <class F, class DF>
RatioMinimum find_ratio_minimum(F f, DF df, double slope, double shift,
                                double limit) {
  auto h = [&](double x) {
    double v = slope * x * df(x) - f(x) - shift;
    if (std::isnan(v)) return std::numeric_limits<double>::infinity();
    return v;
  };
  if (h(limit) <= 0) return {limit, false};
  double lo = 0, hi = limit;
  // shrink hi first so bisection starts near the crossing
  while (hi > 1e-300 && h(hi / 2) > 0) hi /= 2;
  lo = hi / 2;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (h(mid) > 0)
      hi = mid;
    else
      lo = mid;
  }
  return {0.5 * (lo + hi), true};
}

Verdict band_verdict(double value, double threshold) {
  double tol = kBoundaryTolerance * threshold;
  if (value < threshold - tol) return Verdict::holds;
  if (value <= threshold + tol) return Verdict::boundary;
  return Verdict::fails;
}

bool supports_intersect(const std::vector<AtomId>& a,
                        const std::vector<AtomId>& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return false;
}

double indep_sum(const std::vector<std::uint64_t>& nbr,
                 const std::vector<double>& w, std::uint64_t avail) {
  if (avail == 0) return 1.0;
  int i = std::countr_zero(avail);
  std::uint64_t rest = avail & (avail - 1);
  return indep_sum(nbr, w, rest) + w[i] * indep_sum(nbr, w, rest & ~nbr[i]);
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::boundary:
      return "boundary";
    case Verdict::fails:
      return "fails";
  }
  return "?";
}

double PowerSpectrum::xi_radius() const {
  if (!tail) return std::numeric_limits<double>::infinity();
  return 1.0 / tail->ratio - 1.0;
}

void validate(const PowerSpectrum& spec) {
  if (spec.terms.empty() && !spec.tail)
    throw std::invalid_argument("power spectrum is empty");
  int max_explicit = 0;
  for (const auto& [s, t] : spec.terms) {
    if (s < 1) throw std::invalid_argument("spectrum power must be >= 1");
    if (!(t.p > 0 && t.p <= 1))
      throw std::invalid_argument("spectrum probability must be in (0,1]");
    if (!(t.d >= 1))
      throw std::invalid_argument("spectrum count must be >= 1");
    max_explicit = std::max(max_explicit, s);
  }
  if (spec.tail) {
    if (!(spec.tail->ratio > 0 && spec.tail->ratio < 1))
      throw std::invalid_argument("tail ratio must be in (0,1)");
    if (spec.tail->poly.empty())
      throw std::invalid_argument("tail polynomial is empty");
    if (spec.tail->start <= max_explicit)
      throw std::invalid_argument("tail must start beyond explicit powers");
  }
}

double poly_geom_sum(const std::vector<double>& coeffs, double u, int start) {
  if (!(std::abs(u) < 1)) throw std::domain_error("series divergent");
  int degree = static_cast<int>(coeffs.size()) - 1;
  auto rows = eulerian_rows(std::max(degree, 1));
  double total = 0;
  for (int j = 0; j <= degree; ++j)
    if (coeffs[j] != 0) total += coeffs[j] * power_sum_all(j, u, rows);
  double head = 0, us = 1;
  for (int s = 1; s < start; ++s) {
    us *= u;
    head += poly_eval(coeffs, s) * us;
  }
  return total - head;
}

double phi(const PowerSpectrum& spec, double xi) {
  const double x1 = xi + 1.0;
  double v = 0;
  for (const auto& [s, t] : spec.terms) v += t.p * t.d * std::pow(x1, s);
  if (spec.tail)
    v += poly_geom_sum(spec.tail->poly, spec.tail->ratio * x1, spec.tail->start);
  return v;
}

double phi_prime(const PowerSpectrum& spec, double xi) {
  const double x1 = xi + 1.0;
  double v = 0;
  for (const auto& [s, t] : spec.terms)
    v += t.p * t.d * s * std::pow(x1, s - 1);
  if (spec.tail) {
    // d/dxi sum P(s) (r(xi+1))^s = (1/(xi+1)) sum s P(s) u^s
    std::vector<double> sp(spec.tail->poly.size() + 1, 0.0);
    for (size_t j = 0; j < spec.tail->poly.size(); ++j)
      sp[j + 1] = spec.tail->poly[j];
    v += poly_geom_sum(sp, spec.tail->ratio * x1, spec.tail->start) / x1;
  }
  return v;
}

Verdict MinRatioResult::verdict() const { return band_verdict(rho, 1.0); }

MinRatioResult min_ratio(const PowerSpectrum& spec) {
  validate(spec);
  double limit = std::min(kXiSearchBound, spec.xi_radius() * (1 - 1e-12));
  auto f = [&](double xi) { return phi(spec, xi); };
  auto df = [&](double xi) { return phi_prime(spec, xi); };
  RatioMinimum rm = find_ratio_minimum(f, df, 1.0, 0.0, limit);
  MinRatioResult out;
  out.xi_star = rm.x;
  out.attained = rm.attained;
  out.rho = phi(spec, rm.x) / rm.x;
  return out;
}

double xi_cell(EventId e, const WeightVector& mu, const DependencyGraph& dep,
               int cap) {
  const auto& nbrs = dep.adj[e];
  int t = static_cast<int>(nbrs.size()) + 1;
  if (t > std::min(cap, 63))
    throw std::runtime_error(
        "xi_cell: neighborhood larger than enumeration cap; use xi_clique");
  std::vector<EventId> members;
  members.push_back(e);
  members.insert(members.end(), nbrs.begin(), nbrs.end());
  std::vector<double> w(t);
  std::vector<std::uint64_t> masks(t, 0);
  for (int i = 0; i < t; ++i) {
    if (!(mu[members[i]] >= 0) || !std::isfinite(mu[members[i]]))
      throw std::invalid_argument("weights must be nonnegative and finite");
    w[i] = mu[members[i]];
    const auto& adj_i = dep.adj[members[i]];
    for (int j = 0; j < t; ++j)
      if (j != i &&
          (members[j] == e || members[i] == e ||
           std::binary_search(adj_i.begin(), adj_i.end(), members[j])))
        masks[i] |= std::uint64_t{1} << j;
  }
  return indep_sum(masks, w, (std::uint64_t{1} << t) - 1);
}

ClassicalBounds classical_bounds(EventId e, const WeightVector& mu,
                                 const DependencyGraph& dep) {
  ClassicalBounds out{1.0, 0.0};
  double sum = mu[e];
  out.dobrushin = 1.0 + mu[e];
  for (EventId f : dep.adj[e]) {
    out.dobrushin *= 1.0 + mu[f];
    sum += mu[f];
  }
  out.kp = std::exp(sum);
  return out;
}

double xi_clique(const Event& e, const WeightVector& mu, const Instance& inst) {
  double prod = 1.0;
  for (AtomId y : e.support()) {
    double s = 0;
    for (EventId f : inst.events_containing(y)) s += mu[f];
    prod *= 1.0 + s;
  }
  return prod;
}

CellReport check_cell(const Instance& inst, const WeightVector& mu, int cap) {
  if (static_cast<int>(mu.size()) != inst.event_count())
    throw std::invalid_argument("weight vector length differs from family size");
  for (double m : mu)
    if (!(m >= 0) || !std::isfinite(m))
      throw std::invalid_argument("weights must be nonnegative and finite");
  CellReport rep;
  rep.cell = Verdict::holds;
  rep.lll = Verdict::holds;
  rep.worst_cell_margin = -std::numeric_limits<double>::infinity();
  std::vector<int> stamp(inst.event_count(), -1);
  for (int e = 0; e < inst.event_count(); ++e) {
    rep.mu_sum += mu[e];
    std::vector<EventId> nbhd;  // inclusive neighborhood
    nbhd.push_back(e);
    stamp[e] = e;
    for (AtomId a : inst.event(e).support())
      for (EventId f : inst.events_containing(a))
        if (stamp[f] != e) {
          stamp[f] = e;
          nbhd.push_back(f);
        }
    double dob = 1.0;
    for (EventId f : nbhd) dob *= 1.0 + mu[f];

    double xi;
    if (static_cast<int>(nbhd.size()) <= std::min(cap, 63)) {
      const int t = static_cast<int>(nbhd.size());
      std::vector<double> w(t);
      std::vector<std::uint64_t> masks(t, 0);
      for (int i = 0; i < t; ++i) w[i] = mu[nbhd[i]];
      for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
          if (supports_intersect(inst.event(nbhd[i]).support(),
                                 inst.event(nbhd[j]).support())) {
            masks[i] |= std::uint64_t{1} << j;
            masks[j] |= std::uint64_t{1} << i;
          }
      xi = indep_sum(masks, w, (std::uint64_t{1} << t) - 1);
    } else {
      xi = xi_clique(inst.event(e), mu, inst);
      rep.used_clique_fallback = true;
    }

    const double prob = event_probability(inst.event(e), inst);
    rep.worst_cell_margin = std::max(rep.worst_cell_margin, prob * xi - mu[e]);
    if (prob * xi > mu[e]) {
      ++rep.cell_violations;
      rep.cell = Verdict::fails;
    }
    if (prob * dob > mu[e]) {
      ++rep.lll_violations;
      rep.lll = Verdict::fails;
    }
  }
  return rep;
}

EntropyResult check_entropy_condition(const PowerSpectrum& spec, int k) {
  validate(spec);
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  for (const auto& [s, t] : spec.terms) {
    double pk = t.p * std::pow(static_cast<double>(k), s);
    if (std::abs(pk - 1.0) > 1e-9)
      throw std::invalid_argument(
          "check_entropy_condition: non-uniform spectrum (p_s != k^-s)");
  }
  // D(alpha) = sum_s d_s alpha^s; tail weights w_s = P(s) r^s give
  // d_s = P(s) (r k)^s.
  const double rk = spec.tail ? spec.tail->ratio * k : 0.0;
  auto D = [&](double a) {
    double v = 0;
    for (const auto& [s, t] : spec.terms) v += t.d * std::pow(a, s);
    if (spec.tail) v += poly_geom_sum(spec.tail->poly, rk * a, spec.tail->start);
    return v;
  };
  auto Dp = [&](double a) {
    double v = 0;
    for (const auto& [s, t] : spec.terms) v += t.d * s * std::pow(a, s - 1);
    if (spec.tail) {
      std::vector<double> sp(spec.tail->poly.size() + 1, 0.0);
      for (size_t j = 0; j < spec.tail->poly.size(); ++j)
        sp[j + 1] = spec.tail->poly[j];
      v += poly_geom_sum(sp, rk * a, spec.tail->start) / a;
    }
    return v;
  };
  double limit = spec.tail ? (1.0 / rk) * (1 - 1e-12) : kXiSearchBound;
  RatioMinimum rm = find_ratio_minimum(D, Dp, 1.0, 1.0, limit);
  EntropyResult out;
  out.alpha_star = rm.x;
  out.attained = rm.attained;
  out.lhs_min = (1.0 + D(rm.x)) / rm.x;
  out.verdict = band_verdict(out.lhs_min, static_cast<double>(k));
  return out;
}

GlobalResult check_global_cell(const Instance& inst, double a_max) {
  GlobalResult out;
  const int m = inst.atom_count();
  // per atom: support-size -> summed probability
  std::vector<std::map<int, double>> coef(m);
  std::vector<double> prob(inst.event_count());
  for (int e = 0; e < inst.event_count(); ++e) {
    prob[e] = event_probability(inst.event(e), inst);
    for (AtomId a : inst.event(e).support())
      coef[a][inst.event(e).support_size()] += prob[e];
  }
  auto margin_at = [&](double a) {
    double worst = 0;
    for (int x = 0; x < m; ++x) {
      double lx = 0;
      for (const auto& [n, c] : coef[x]) lx += c * std::exp(a * n);
      worst = std::max(worst, lx);
    }
    return worst - std::expm1(a);
  };
  // deterministic grid scan + golden-section refinement around the best
  const int grid = 2000;
  double best_a = 0, best_v = std::numeric_limits<double>::infinity();
  const double lo_a = 1e-6;
  for (int i = 0; i <= grid; ++i) {
    double a = lo_a * std::pow(a_max / lo_a, static_cast<double>(i) / grid);
    double v = margin_at(a);
    if (v < best_v) {
      best_v = v;
      best_a = a;
    }
  }
  {
    double lo = best_a / std::pow(a_max / lo_a, 1.0 / grid);
    double hi = std::min(a_max, best_a * std::pow(a_max / lo_a, 1.0 / grid));
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = margin_at(x1), f2 = margin_at(x2);
    for (int it = 0; it < 120; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = margin_at(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = margin_at(x2);
      }
    }
    double mid = 0.5 * (lo + hi), fm = margin_at(mid);
    if (fm < best_v) {
      best_v = fm;
      best_a = mid;
    }
  }
  out.a_star = best_a;
  out.margin = best_v;
  out.holds = best_v <= 1e-12;
  for (int e = 0; e < inst.event_count(); ++e)
    out.expected_steps +=
        prob[e] * std::exp(best_a * inst.event(e).support_size());

  if (inst.event_count() == 0) {
    out.q = 0;
    return out;
  }
  out.q = 0;
  for (const Event& ev : inst.events())
    out.q = std::max(out.q, static_cast<double>(ev.support_size()) / ev.power());
  if (inst.uniform()) {
    // q-th power refinement: exists alpha with (1 + sum_s d_s alpha^s)^q
    // <= k alpha, with exact per-atom counts d_s
    std::map<int, double> dmap;
    for (const Event& ev : inst.events()) dmap[ev.power()] = 0;
    for (auto& [s, d] : dmap) d = d_s_exact(inst, s);
    auto D = [&](double a) {
      double v = 0;
      for (const auto& [s, d] : dmap) v += d * std::pow(a, s);
      return v;
    };
    auto Dp = [&](double a) {
      double v = 0;
      for (const auto& [s, d] : dmap) v += d * s * std::pow(a, s - 1);
      return v;
    };
    RatioMinimum rm = find_ratio_minimum(D, Dp, out.q, 1.0, kXiSearchBound);
    double value = std::pow(1.0 + D(rm.x), out.q) / rm.x;
    out.q_form_alpha = rm.x;
    out.q_form_min = value;
    out.q_form = band_verdict(value, static_cast<double>(inst.k()));
  }
  return out;
}

StepThreshold step_threshold(double rho, int m) {
  if (m < 1) throw std::invalid_argument("step_threshold: m must be >= 1");
  if (!(rho > 0)) throw std::invalid_argument("step_threshold: rho must be > 0");
  if (rho >= 1) throw std::domain_error("criterion not satisfied");
  const double x = 2.0 * m / std::abs(std::log(rho));
  const double raw = x * std::log(x) * std::log(x);
  StepThreshold out;
  out.n0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(raw)));
  const double q = std::sqrt(rho);
  const double n0 = static_cast<double>(out.n0);
  out.t_bound = n0 * (n0 + 1) / 2 +
                std::pow(q, n0 + 1) * ((n0 + 1) - n0 * q) / ((1 - q) * (1 - q));
  return out;
}

PowerSpectrum spectrum_from_instance(const Instance& inst) {
  PowerSpectrum spec;
  for (const Event& ev : inst.events()) {
    double p = event_probability(ev, inst);
    auto& term = spec.terms[ev.power()];
    term.p = std::max(term.p, p);
  }
  for (auto it = spec.terms.begin(); it != spec.terms.end();) {
    if (it->second.p <= 0) {
      it = spec.terms.erase(it);
    } else {
      it->second.d = d_s_exact(inst, it->first);
      ++it;
    }
  }
  return spec;
}

std::string CriterionReport::to_text() const {
  std::ostringstream out;
  for (const auto& e : entries) {
    char head[128];
    std::snprintf(head, sizeof head, "%-22s %-9s", e.name.c_str(),
                  verdict_name(e.verdict));
    out << head;
    for (const auto& [k, v] : e.witness) out << " " << k << "=" << fmt(v);
    if (e.tolerance > 0) out << " tol=" << fmt(e.tolerance);
    if (!e.note.empty()) out << "  (" << e.note << ")";
    out << "\n";
  }
  return out.str();
}

std::string CriterionReport::to_csv() const {
  std::ostringstream out;
  out << "criterion,verdict,witnesses,tolerance,note\n";
  for (const auto& e : entries) {
    out << e.name << "," << verdict_name(e.verdict) << ",";
    bool first = true;
    for (const auto& [k, v] : e.witness) {
      if (!first) out << ";";
      first = false;
      out << k << "=" << fmt(v);
    }
    out << "," << fmt(e.tolerance) << ",";
    std::string note = e.note;
    std::replace(note.begin(), note.end(), ',', ';');
    out << note << "\n";
  }
  return out.str();
}

}  // namespace lll
