#include "lll/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "lll/graph.hpp"
#include "lll/io.hpp"
#include "lll/witness.hpp"

namespace lll {

namespace {

using nlohmann::json;

const char* kApplications[] = {"nonrepetitive", "facial-thue", "frugal",
                               "instance"};
const char* kSolvers[] = {"forest", "mt", "ec"};

bool known(const char* const* list, size_t n, const std::string& v) {
  for (size_t i = 0; i < n; ++i)
    if (v == list[i]) return true;
  return false;
}

std::string fmt(const char* pattern, ...) {
  char buf[256];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be an object");
  ExperimentConfig cfg;
  try {
    cfg.application = j.value("application", std::string());
    cfg.graph_path = j.value("graph", std::string());
    cfg.faces_path = j.value("faces", std::string());
    cfg.lists_path = j.value("lists", std::string());
    cfg.instance_path = j.value("instance", std::string());
    cfg.k = j.value("k", 0);
    cfg.beta = j.value("beta", 1);
    cfg.l_max = j.value("L_max", 1);
    cfg.solver = j.value("solver", std::string("forest"));
    cfg.trials = j.value("trials", 1);
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.step_cap = j.value("step_cap", std::int64_t{0});
    cfg.out = j.value("out", std::string());
    cfg.threads = j.value("threads", 0);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config field has wrong type: ") +
                                e.what());
  }
  if (!known(kApplications, std::size(kApplications), cfg.application))
    throw std::invalid_argument("unknown application: " + cfg.application);
  if (!known(kSolvers, std::size(kSolvers), cfg.solver))
    throw std::invalid_argument("unknown solver: " + cfg.solver);
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.step_cap < 0) throw std::invalid_argument("step_cap must be >= 0");
  if (cfg.threads < 0) throw std::invalid_argument("threads must be >= 0");
  return cfg;
}

Problem build_problem(const ExperimentConfig& cfg) {
  auto need = [](const std::string& path, const char* what) {
    if (path.empty())
      throw std::invalid_argument(std::string("config needs a ") + what +
                                  " file for this application");
    return read_file(path);
  };
  if (cfg.application == "nonrepetitive") {
    auto spec = std::make_shared<NonrepetitiveSpec>(NonrepetitiveSpec{
        parse_graph(need(cfg.graph_path, "graph")), cfg.k, cfg.l_max});
    Problem p{build_nonrepetitive_instance(*spec), cfg.application,
              spec->graph.max_degree(), cfg.k, cfg.beta, cfg.l_max,
              [spec](const Configuration& c) {
                return verify_nonrepetitive(*spec, c);
              }};
    return p;
  }
  if (cfg.application == "facial-thue") {
    SimpleGraph g = parse_graph(need(cfg.graph_path, "graph"));
    FaceSet faces = parse_faces(g, need(cfg.faces_path, "faces"));
    auto lists = parse_color_lists(g, cfg.k, need(cfg.lists_path, "lists"));
    auto spec = std::make_shared<FacialThueSpec>(FacialThueSpec{
        std::move(g), std::move(faces), std::move(lists), cfg.k, cfg.l_max});
    Problem p{build_facial_thue_instance(*spec), cfg.application,
              spec->graph.max_degree(), cfg.k, cfg.beta, cfg.l_max,
              [spec](const Configuration& c) { return verify_facial(*spec, c); }};
    return p;
  }
  if (cfg.application == "frugal") {
    auto spec = std::make_shared<FrugalSpec>(FrugalSpec{
        parse_graph(need(cfg.graph_path, "graph")), cfg.k, cfg.beta});
    Problem p{build_frugal_instance(*spec), cfg.application,
              spec->graph.max_degree(), cfg.k, cfg.beta, cfg.l_max,
              [spec](const Configuration& c) { return verify_frugal(*spec, c); }};
    return p;
  }
  // Raw instance: the independent check is a direct occurrence scan.
  auto inst = std::make_shared<Instance>(
      parse_instance(need(cfg.instance_path, "instance")));
  Problem p{*inst,     cfg.application, 0, cfg.k, cfg.beta, cfg.l_max,
            [inst](const Configuration& c) {
              return bad_atoms(*inst, c).empty();
            }};
  return p;
}

namespace {

// 0 = no finite threshold (rho >= 1 or no spectrum).
std::int64_t auto_step_cap(const Problem& p) {
  if (p.instance.event_count() == 0) return 1;
  const MinRatioResult mr = min_ratio(spectrum_from_instance(p.instance));
  if (mr.verdict() != Verdict::holds) return 1'000'000;
  const StepThreshold st = step_threshold(mr.rho, p.instance.atom_count());
  // Floor of 50 m: the entropy-compression solver needs at least m steps
  // to color everything once.
  return std::max<std::int64_t>(10 * st.n0,
                                50ll * p.instance.atom_count());
}

ResultRow run_one_trial(const Problem& p, const ExperimentConfig& cfg,
                        int trial, std::int64_t cap, Configuration* solution) {
  ResultRow row;
  row.trial = trial;
  Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(trial));
  row.seed = rng.seed();
  Configuration config;
  if (cfg.solver == "mt") {
    MtResult r = moser_tardos_resampling(p.instance, rng, cap);
    row.steps = r.stats.steps;
    row.phases = r.stats.phases;
    row.success = r.stats.success;
    row.wall_ms = r.stats.wall_ms;
    config = std::move(r.config);
  } else if (cfg.solver == "forest") {
    ForestResult r = forest_algorithm(p.instance, rng, cap);
    row.steps = r.stats.steps;
    row.phases = r.stats.phases;
    row.success = r.stats.success;
    row.wall_ms = r.stats.wall_ms;
    config = std::move(r.config);
  } else {
    EcResult r = entropy_compression(p.instance, rng, cap);
    row.steps = r.steps_used;
    row.phases = r.backtracks;
    row.success = r.success;
    config = std::move(r.config);
  }
  if (row.success) {
    row.verified = p.verify(config);
    if (solution) *solution = std::move(config);
  }
  return row;
}

}  // namespace

SolveOutcome run_solve(const Problem& p, const ExperimentConfig& cfg) {
  SolveOutcome out;
  out.step_cap_used = cfg.step_cap > 0 ? cfg.step_cap : auto_step_cap(p);
  out.rows.resize(cfg.trials);
  std::vector<Configuration> solutions(cfg.trials);

  int workers = cfg.threads > 0
                    ? cfg.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, cfg.trials);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next.fetch_add(1); i < cfg.trials; i = next.fetch_add(1))
      out.rows[i] =
          run_one_trial(p, cfg, i, out.step_cap_used, &solutions[i]);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  out.csv = "trial,seed,steps,phases,success,verified\n";
  for (const ResultRow& r : out.rows) {
    out.csv += fmt("%d,%llu,%lld,%d,%d,%d\n", r.trial,
                   static_cast<unsigned long long>(r.seed),
                   static_cast<long long>(r.steps), r.phases,
                   r.success ? 1 : 0, r.verified ? 1 : 0);
    out.total_wall_ms += r.wall_ms;
    out.success_count += r.success;
    out.verified_count += r.verified;
    if (r.success && !out.solution)
      out.solution = std::move(solutions[r.trial]);
  }

  json meta;
  meta["tool"] = "locallemma";
  meta["version"] = kToolVersion;
  meta["application"] = p.application;
  meta["solver"] = cfg.solver;
  meta["master_seed"] = cfg.seed;
  meta["trials"] = cfg.trials;
  meta["step_cap"] = out.step_cap_used;
  meta["boundary_tolerance"] = kBoundaryTolerance;
  meta["success_count"] = out.success_count;
  meta["verified_count"] = out.verified_count;
  out.sidecar_json = meta.dump(2) + "\n";
  return out;
}

namespace {

void push_entry(CriterionReport& rep, std::string name, Verdict v,
                std::vector<std::pair<std::string, double>> witness,
                std::string note = {}) {
  rep.entries.push_back({std::move(name), v, std::move(witness),
                         kBoundaryTolerance, std::move(note)});
}

std::optional<PowerSpectrum> series_spectrum(const Problem& p,
                                             std::string* note) {
  try {
    if (p.application == "nonrepetitive")
      return nonrepetitive_spectrum(p.delta, p.k);
    if (p.application == "facial-thue") return facial_thue_spectrum(p.k);
    if (p.application == "frugal")
      return frugal_spectrum(p.delta, p.beta, p.k);
  } catch (const std::invalid_argument& e) {
    *note = e.what();
  }
  return std::nullopt;
}

}  // namespace

CriterionReport run_criteria(const Problem& p) {
  CriterionReport rep;
  const Instance& inst = p.instance;
  if (inst.event_count() == 0) {
    for (const char* name :
         {"min-ratio (family)", "lll", "cell", "global"})
      push_entry(rep, name, Verdict::holds, {}, "empty event family");
    return rep;
  }

  const PowerSpectrum family = spectrum_from_instance(inst);
  const MinRatioResult mr = min_ratio(family);
  push_entry(rep, "min-ratio (family)", mr.verdict(),
             {{"rho", mr.rho}, {"xi*", mr.xi_star}},
             mr.attained ? "" : "infimum approached at the search bound");
  if (mr.verdict() == Verdict::holds) {
    const StepThreshold st = step_threshold(mr.rho, inst.atom_count());
    push_entry(rep, "step-threshold", Verdict::holds,
               {{"N", static_cast<double>(st.n0)}, {"T", st.t_bound}});
  }

  std::string series_note;
  if (const auto series = series_spectrum(p, &series_note); series) {
    const MinRatioResult sr = min_ratio(*series);
    push_entry(rep, "min-ratio (series)", sr.verdict(),
               {{"rho", sr.rho}, {"xi*", sr.xi_star}});
  } else if (!series_note.empty()) {
    push_entry(rep, "min-ratio (series)", Verdict::fails, {}, series_note);
  }

  if (inst.uniform()) {
    try {
      const EntropyResult er = check_entropy_condition(family, inst.k());
      push_entry(rep, "entropy", er.verdict,
                 {{"alpha*", er.alpha_star}, {"min", er.lhs_min}});
    } catch (const std::invalid_argument&) {
      // Non-uniform spectrum (facial lists): the form does not apply.
    }
  }

  const GlobalResult g = check_global_cell(inst);
  push_entry(rep, "global", g.holds ? Verdict::holds : Verdict::fails,
             {{"a*", g.a_star},
              {"margin", g.margin},
              {"steps", g.expected_steps},
              {"q", g.q}});
  if (g.q_form)
    push_entry(rep, "global-q", *g.q_form,
               {{"alpha*", g.q_form_alpha.value_or(0)},
                {"min", g.q_form_min.value_or(0)}});

  // Weighted conditions: mu from the global exponent when available,
  // otherwise the e * prob fallback.
  WeightVector mu(inst.event_count());
  for (EventId e = 0; e < inst.event_count(); ++e) {
    const double prob = event_probability(inst.event(e), inst);
    mu[e] = g.holds
                ? prob * std::exp(g.a_star * inst.event(e).support_size())
                : std::exp(1.0) * prob;
  }
  const CellReport cell = check_cell(inst, mu);
  push_entry(rep, "cell", cell.cell,
             {{"violations", static_cast<double>(cell.cell_violations)},
              {"mu-sum", cell.mu_sum},
              {"worst-margin", cell.worst_cell_margin}},
             cell.used_clique_fallback ? "clique bound used for large neighborhoods"
                                       : "");
  push_entry(rep, "lll", cell.lll,
             {{"violations", static_cast<double>(cell.lll_violations)}});
  return rep;
}

std::string bounds_table(int delta, std::optional<int> beta) {
  const NonrepetitiveBounds b = nonrepetitive_bounds(delta);
  std::string out;
  out += fmt("degree                 %d\n", delta);
  out += fmt("b0                     %.12g\n", b.b0);
  out += fmt("b0 residual            %.3g\n", b.residual);
  out += fmt("xi0                    %.12g\n", b.xi0);
  out += fmt("pi bound (budget)      %.12g  -> %d colors\n", b.pi_bound,
             static_cast<int>(std::ceil(b.pi_bound)));
  if (b.comparison_bound)
    out += fmt("pi bound (comparison)  %.12g  -> %d colors\n",
               *b.comparison_bound,
               static_cast<int>(std::ceil(*b.comparison_bound)));
  else
    out += "pi bound (comparison)  needs degree > 2\n";
  out += fmt("crossover degree       %.6g\n", nonrepetitive_crossover());
  if (beta) {
    const FrugalBound f = frugal_bound(delta, *beta);
    out += fmt("frugal beta            %d\n", *beta);
    if (f.closed_form)
      out += fmt("frugal closed form     %.12g  -> %d colors\n",
                 *f.closed_form, static_cast<int>(std::ceil(*f.closed_form)));
    else
      out += "frugal closed form     undefined at beta = 1 (numeric search only)\n";
    out += fmt("frugal smallest k      %d\n", f.generic_k);
  }
  return out;
}

}  // namespace lll
