// freelab: spaces, free-space norms, retraction systems, basis constants,
// certified circle searches and the canned experiment suites, one binary.
//
// Exit codes: 0 success, 1 validation/usage failure, 2 budget-indeterminate.
#include "freelab/basis.hpp"
#include "freelab/circle_search.hpp"
#include "freelab/extensional.hpp"
#include "freelab/json_io.hpp"
#include "freelab/transport.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace freelab;

namespace {

using Clock = std::chrono::steady_clock;

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty()) std::cout << j.dump(2) << std::endl;
  else save_json_file(out_path, j);
}

PointedMetricSpace load_space(const std::string& path) {
  const auto sp = space_from_json(load_json_file(path));
  const auto rep = validate_metric(sp);
  if (!rep.ok()) {
    std::cerr << path << ": not a metric space\n" << rep.summary();
    throw CLI::RuntimeError(1);
  }
  return sp;
}

RetractionSystem load_system(const PointedMetricSpace& sp, const std::string& path) {
  return system_from_json(sp, load_json_file(path));
}

Measure load_measure(const PointedMetricSpace& sp, const std::string& inline_text,
                     const std::string& file) {
  if (!inline_text.empty()) return measure_from_string(sp, inline_text);
  if (file.empty()) throw CLI::RuntimeError(1);
  if (file.size() > 4 && file.substr(file.size() - 4) == ".csv") {
    std::ifstream in(file);
    if (!in) {
      std::cerr << "cannot open '" << file << "'\n";
      throw CLI::RuntimeError(1);
    }
    return measure_from_csv(sp, in);
  }
  return measure_from_json(sp, load_json_file(file));
}

/// Accepts "p/q", integers and exact decimal strings ("1.29" -> 129/100).
Rational parse_exact_value(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) return parse_rational(text);
  const std::string whole = text.substr(0, dot), frac = text.substr(dot + 1);
  if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("malformed decimal '" + text + "'");
  Rational scale(1);
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  const bool neg = !whole.empty() && whole[0] == '-';
  const Rational w = whole.empty() || whole == "-" ? Rational(0) : parse_rational(whole);
  const Rational f = Rational(boost::multiprecision::mpz_int(frac).convert_to<long long>()) / scale;
  return neg ? w - f : w + f;
}

double default_budget_secs() {
  if (const char* env = std::getenv("FREELAB_BUDGET_SECS")) {
    try {
      return std::stod(env);
    } catch (...) {
      std::cerr << "ignoring malformed FREELAB_BUDGET_SECS\n";
    }
  }
  return 600.0;
}

std::string num_str(const Num& v) { return v.exact() ? v.rat().str() : std::to_string(v.dbl()); }

Json lips_json(const RetractionSystem& sys) {
  Json arr = Json::array();
  for (int i = 0; i <= sys.levels(); ++i) arr.push_back(num_str(sys.lip_constant(i)));
  return arr;
}

ExperimentReport make_report(const std::string& id, Json inputs) {
  ExperimentReport rep;
  rep.id = id;
  rep.inputs = std::move(inputs);
  rep.version = FREELAB_VERSION;
  return rep;
}

int run_search(int n, const std::string& target_text, long long budget_nodes,
               double budget_secs, const std::string& resume_path,
               const std::string& checkpoint_path, int threads) {
  LipTarget target = target_text == "auto" ? theorem32_bound(n).target
                                           : LipTarget::exact(parse_exact_value(target_text));
  if (target_text == "auto" && theorem32_bound(n).small_n_warning)
    std::cerr << "warning: the lower-bound formula is stated for n >= 10\n";

  SearchBudget budget;
  budget.max_nodes = budget_nodes;
  budget.max_seconds = budget_secs;

  std::optional<std::vector<SearchPrefix>> resume;
  if (!resume_path.empty()) resume = frontier_from_json(load_json_file(resume_path), n);

  const auto cert = certify_circle_lower_bound(n, target, budget, threads,
                                               resume ? &*resume : nullptr);
  Json out = certificate_to_json(cert);
  if (cert.outcome == SearchOutcome::Counterexample) {
    const auto circle = build_circle(n);
    std::vector<int> order{0}, parent{-1};
    for (const auto& [p, q] : cert.counterexample) {
      order.push_back(p);
      parent.push_back(q);
    }
    const RetractionSystem sys(circle, order, parent);
    out["counterexample_system"] = system_to_json(sys);
    out["counterexample_max_lip"] = num_str(sys.max_lip());
  }
  if (cert.outcome == SearchOutcome::Indeterminate) {
    const std::string path =
        checkpoint_path.empty() ? "freelab_frontier_n" + std::to_string(n) + ".json"
                                : checkpoint_path;
    save_json_file(path, frontier_to_json(cert));
    out["frontier_file"] = path;
  }
  std::cout << out.dump(2) << std::endl;
  return cert.outcome == SearchOutcome::Indeterminate ? 2 : 0;
}

int run_experiment_thm32(int n, long long budget_nodes, double budget_secs, int threads,
                         const std::string& outdir) {
  const auto t0 = Clock::now();
  auto rep = make_report("thm32_n" + std::to_string(n),
                         Json{{"n", n},
                              {"budget_nodes", budget_nodes},
                              {"budget_secs", budget_secs},
                              {"threads", threads}});
  rep.columns = {"quantity", "value"};
  const auto bound = theorem32_bound(n);
  rep.rows.push_back({"lower_bound_formula", bound.target.describe()});
  rep.rows.push_back({"lower_bound_approx", std::to_string(bound.approx)});

  const auto circle = build_circle(n);
  for (auto strat : {CircleStrategy::PeelOneArc, CircleStrategy::PeelBalanced,
                     CircleStrategy::GreedyMinLip}) {
    const auto h = heuristic_circle_system(circle, strat);
    rep.rows.push_back({"heuristic_" + strategy_name(strat), num_str(h.achieved)});
  }

  SearchBudget budget;
  budget.max_nodes = budget_nodes;
  budget.max_seconds = budget_secs;
  const auto cert = certify_circle_lower_bound(n, bound.target, budget, threads);
  const char* outcome = cert.outcome == SearchOutcome::Certified       ? "certified"
                        : cert.outcome == SearchOutcome::Counterexample ? "counterexample"
                                                                        : "indeterminate";
  rep.rows.push_back({"certificate", outcome});
  rep.rows.push_back({"nodes_explored", std::to_string(cert.nodes_explored)});
  if (cert.outcome == SearchOutcome::Indeterminate) {
    const std::string path = "freelab_frontier_n" + std::to_string(n) + ".json";
    save_json_file(path, frontier_to_json(cert));
    rep.rows.push_back({"frontier_file", path});
  }
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  std::cout << report_to_json(rep).dump(2) << std::endl;
  write_report_files(rep, outdir);
  return cert.outcome == SearchOutcome::Indeterminate ? 2 : 0;
}

int run_experiment_lemma41(int m, int samples, unsigned long long seed,
                           const std::string& outdir) {
  const auto t0 = Clock::now();
  auto rep = make_report("lemma41_grid" + std::to_string(m),
                         Json{{"grid_m", m}, {"samples", samples}, {"seed", seed}});
  rep.columns = {"quantity", "value"};
  const auto g = build_grid_net(m, 2);
  const auto sys = grid_row_major_system(g, m, 2);
  const auto fam = projections_from_system(sys);

  const auto pairs = find_divergent_chains(sys, Rational(1), 2);
  if (pairs.empty()) {
    std::cerr << "no divergent chains found\n";
    return 1;
  }
  const auto& deep = pairs.front();
  rep.rows.push_back({"deepest_pair", g.label(deep.x) + " / " + g.label(deep.y)});
  rep.rows.push_back({"deepest_excess", std::to_string(deep.excess)});
  const auto w =
      lemma41_witness(sys, chain_to(sys, deep.x), chain_to(sys, deep.y), Rational(1), Rational(1));
  rep.rows.push_back({"witness_bound", rational_str(w.bound)});
  const auto achieved = signed_sum_norm(fam, w.eps);
  rep.rows.push_back({"witness_signed_sum_norm", num_str(achieved)});
  const auto sampled = unconditional_constant_sampled(fam, samples, seed);
  rep.rows.push_back({"sampled_unconditional_lb", num_str(sampled.value)});
  rep.rows.push_back({"sampled_patterns", std::to_string(sampled.patterns_scanned)});
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  std::cout << report_to_json(rep).dump(2) << std::endl;
  write_report_files(rep, outdir);
  return 0;
}

int run_experiment_cor33(int k, const std::string& outdir) {
  const auto t0 = Clock::now();
  auto rep = make_report("cor33_k" + std::to_string(k), Json{{"k_max", k}});
  rep.columns = {"system", "escapes", "union_max_lip", "restricted_max_lip", "floor", "floor_met"};
  const auto u = build_circle_union(k);
  std::vector<std::pair<std::string, RetractionSystem>> systems;
  systems.emplace_back("peel-one-arc", union_peel_system(u, k, false));
  systems.emplace_back("peel-balanced", union_peel_system(u, k, true));
  systems.emplace_back("greedy-min-lip", greedy_min_lip_system(u));
  bool all_floors = true;
  for (const auto& [name, sys] : systems) {
    const auto dich = union_restriction_report(sys, k);
    all_floors = all_floors && dich.floor_met;
    rep.rows.push_back({name, dich.escapes ? "yes" : "no", num_str(dich.union_max_lip),
                        dich.escapes ? "-" : num_str(dich.restricted_max_lip),
                        std::to_string(dich.floor_approx), dich.floor_met ? "yes" : "no"});
  }
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  std::cout << report_to_json(rep).dump(2) << std::endl;
  write_report_files(rep, outdir);
  return all_floors ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"freelab: computations in Lipschitz-free spaces over finite metric spaces"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for searches (default 1)");

  // ---- space ----------------------------------------------------------
  auto* space = app.add_subcommand("space", "build and validate spaces");
  space->require_subcommand(1);
  int circ_n = 0, union_k = 0, grid_m = 0, grid_dim = 2;
  long long grid_cap = 20000;
  std::string out_path, in_file;

  auto* sc = space->add_subcommand("circle", "circle of radius n");
  sc->add_option("--n", circ_n, "rim size")->required();
  sc->add_option("--out", out_path, "output file (default stdout)");
  sc->callback([&] { emit(space_to_json(build_circle(circ_n)), out_path); });

  auto* su = space->add_subcommand("union", "concentric circle union");
  su->add_option("--k", union_k, "number of circles")->required();
  su->add_option("--out", out_path, "output file");
  su->callback([&] { emit(space_to_json(build_circle_union(union_k)), out_path); });

  auto* sg = space->add_subcommand("grid", "Euclidean grid net");
  sg->add_option("--m", grid_m, "side length")->required();
  sg->add_option("--dim", grid_dim, "dimension (default 2)");
  sg->add_option("--cap", grid_cap, "point-count cap");
  sg->add_option("--out", out_path, "output file");
  sg->callback([&] { emit(space_to_json(build_grid_net(grid_m, grid_dim, grid_cap)), out_path); });

  auto* sv = space->add_subcommand("validate", "check the metric axioms of a space file");
  sv->add_option("--file", in_file, "space JSON")->required();
  sv->callback([&] {
    const auto sp = space_from_json(load_json_file(in_file));
    const auto rep = validate_metric(sp);
    if (!rep.ok()) {
      std::cerr << rep.summary();
      throw CLI::RuntimeError(1);
    }
    std::cout << "valid: " << sp.size() << " points, "
              << (sp.exact() ? "exact" : "float") << std::endl;
  });

  // ---- norm -----------------------------------------------------------
  auto* norm = app.add_subcommand("norm", "free-space norm of a measure");
  std::string norm_space, norm_measure, norm_measure_file;
  bool no_witness = false;
  norm->add_option("--space", norm_space, "space JSON")->required();
  norm->add_option("--measure", norm_measure, "inline measure 'x1:1,x3:-2'");
  norm->add_option("--measure-file", norm_measure_file, "measure JSON/CSV file");
  norm->add_flag("--no-witness", no_witness, "skip the dual witness");
  norm->callback([&] {
    const auto sp = load_space(norm_space);
    const auto mu = load_measure(sp, norm_measure, norm_measure_file);
    const auto primal = kr_norm(mu);
    const auto dual = kr_norm_dual(mu, no_witness ? WitnessMode::None : WitnessMode::LexMin);
    Json j;
    j["primal"] = num_str(primal);
    j["dual"] = num_str(dual.value);
    j["exact"] = sp.exact();
    if (!no_witness) {
      Json w = Json::object();
      for (int i = 0; i < sp.size(); ++i) {
        if (sp.exact()) w[sp.label(i)] = rational_str(dual.witness_q[i]);
        else w[sp.label(i)] = dual.witness_d[i];
      }
      j["witness"] = std::move(w);
    }
    std::cout << j.dump(2) << std::endl;
  });

  // ---- system ---------------------------------------------------------
  auto* system = app.add_subcommand("system", "retraction systems");
  system->require_subcommand(1);
  std::string sys_space, sys_file, chain_point;

  auto* sb = system->add_subcommand("build", "build and echo the canonical system");
  sb->add_option("--space", sys_space)->required();
  sb->add_option("--system", sys_file)->required();
  sb->add_option("--out", out_path);
  sb->callback([&] {
    const auto sp = load_space(sys_space);
    const auto sys = load_system(sp, sys_file);
    Json j = system_to_json(sys);
    j["lip"] = lips_json(sys);
    emit(j, out_path);
  });

  auto* svv = system->add_subcommand("validate", "exhaustive law check");
  svv->add_option("--space", sys_space)->required();
  svv->add_option("--system", sys_file)->required();
  svv->callback([&] {
    const auto sp = load_space(sys_space);
    const auto sys = load_system(sp, sys_file);
    const auto rep = validate_system(sys);
    if (!rep.ok()) {
      std::cerr << rep.summary();
      throw CLI::RuntimeError(1);
    }
    std::cout << "valid system on " << sys.points() << " points" << std::endl;
  });

  auto* sl = system->add_subcommand("lip", "per-level Lipschitz constants");
  sl->add_option("--space", sys_space)->required();
  sl->add_option("--system", sys_file)->required();
  sl->callback([&] {
    const auto sp = load_space(sys_space);
    const auto sys = load_system(sp, sys_file);
    Json j;
    j["lip"] = lips_json(sys);
    j["max"] = num_str(sys.max_lip());
    std::cout << j.dump(2) << std::endl;
  });

  auto* sch = system->add_subcommand("chain", "chain from the base to a point");
  sch->add_option("--space", sys_space)->required();
  sch->add_option("--system", sys_file)->required();
  sch->add_option("--point", chain_point)->required();
  sch->callback([&] {
    const auto sp = load_space(sys_space);
    const auto sys = load_system(sp, sys_file);
    const int idx = sp.index_of(chain_point);
    if (idx < 0) {
      std::cerr << "unknown point '" << chain_point << "'\n";
      throw CLI::RuntimeError(1);
    }
    Json arr = Json::array();
    for (int p : chain_to(sys, idx).points) arr.push_back(sp.label(p));
    std::cout << Json{{"chain", arr}}.dump(2) << std::endl;
  });

  // ---- basis ----------------------------------------------------------
  auto* basis = app.add_subcommand("basis", "projection families and constants");
  basis->require_subcommand(1);
  std::string b_space, b_system, b_x, b_y;
  bool exhaustive = false, evaluate = false;
  int b_samples = 100, b_cap = 20;
  unsigned long long b_seed = 0;
  std::string b_alpha = "1", b_beta = "1";

  auto* bc = basis->add_subcommand("const", "basis constant and per-level norms");
  bc->add_option("--space", b_space)->required();
  bc->add_option("--system", b_system)->required();
  bc->callback([&] {
    const auto sp = load_space(b_space);
    const auto sys = load_system(sp, b_system);
    const auto fam = projections_from_system(sys);
    Json per = Json::array();
    for (const auto& P : fam.P) per.push_back(num_str(operator_norm(P)));
    Json j;
    j["value"] = num_str(basis_constant(fam));
    j["per_n_norms"] = std::move(per);
    std::cout << j.dump(2) << std::endl;
  });

  auto* bu = basis->add_subcommand("uncond", "unconditionality scan");
  bu->add_option("--space", b_space)->required();
  bu->add_option("--system", b_system)->required();
  bu->add_flag("--exhaustive", exhaustive, "scan all sign patterns (N <= cap)");
  bu->add_option("--samples", b_samples, "sampled mode: number of patterns");
  bu->add_option("--seed", b_seed, "sampled mode PRNG seed");
  bu->add_option("--cap", b_cap, "exhaustive-mode cap on N");
  bu->callback([&] {
    const auto sp = load_space(b_space);
    const auto sys = load_system(sp, b_system);
    const auto fam = projections_from_system(sys);
    const auto res = exhaustive ? unconditional_constant_exhaustive(fam, b_cap)
                                : unconditional_constant_sampled(fam, b_samples, b_seed);
    Json j;
    j["value"] = num_str(res.value);
    j["mode"] = res.exhaustive ? "exhaustive" : "sampled";
    j["eps"] = res.eps;
    j["patterns_scanned"] = res.patterns_scanned;
    j["norms_evaluated"] = res.norms_evaluated;
    if (!res.exhaustive) j["seed"] = res.seed;
    std::cout << j.dump(2) << std::endl;
  });

  auto* bw = basis->add_subcommand("witness", "aligned-chain conditionality witness");
  bw->add_option("--space", b_space)->required();
  bw->add_option("--system", b_system)->required();
  bw->add_option("--alpha", b_alpha, "separation constant (exact, default 1)");
  bw->add_option("--beta", b_beta, "endpoint distance bound (exact, default 1)");
  bw->add_option("--x", b_x, "final point of S (default: deepest pair)");
  bw->add_option("--y", b_y, "final point of T");
  bw->add_flag("--evaluate", evaluate, "also compute the signed projection-sum norm");
  bw->callback([&] {
    const auto sp = load_space(b_space);
    const auto sys = load_system(sp, b_system);
    const Rational alpha = parse_exact_value(b_alpha), beta = parse_exact_value(b_beta);
    int xi, yi;
    if (!b_x.empty() && !b_y.empty()) {
      xi = sp.index_of(b_x);
      yi = sp.index_of(b_y);
      if (xi < 0 || yi < 0) {
        std::cerr << "unknown endpoint label\n";
        throw CLI::RuntimeError(1);
      }
    } else {
      const auto pairs = find_divergent_chains(sys, beta, 2);
      if (pairs.empty()) {
        std::cerr << "no divergent chain pair within beta\n";
        throw CLI::RuntimeError(1);
      }
      xi = pairs.front().x;
      yi = pairs.front().y;
    }
    const auto w = lemma41_witness(sys, chain_to(sys, xi), chain_to(sys, yi), alpha, beta);
    Json j;
    j["x"] = sp.label(xi);
    j["y"] = sp.label(yi);
    j["excess"] = w.n_excess;
    j["bound"] = rational_str(w.bound);
    j["eps"] = w.eps;
    Json f = Json::object();
    for (int i = 0; i < sp.size(); ++i)
      if (w.f.values[i] != 0) f[sp.label(i)] = rational_str(w.f.values[i]);
    j["f"] = std::move(f);
    if (evaluate) {
      const auto fam = projections_from_system(sys);
      j["signed_sum_norm"] = num_str(signed_sum_norm(fam, w.eps));
    }
    std::cout << j.dump(2) << std::endl;
  });

  // ---- search ---------------------------------------------------------
  auto* search = app.add_subcommand("search", "certified circle searches");
  search->require_subcommand(1);
  int search_n = 0;
  std::string target_text = "auto", resume_path, checkpoint_path, strat_text = "greedy-min-lip";
  long long budget_nodes = 100'000'000;
  double budget_secs = -1;

  auto* scc = search->add_subcommand("circle", "exhaustive lower-bound certification");
  scc->add_option("--n", search_n, "circle size")->required();
  scc->add_option("--target", target_text, "'auto' or an exact value");
  scc->add_option("--budget-nodes", budget_nodes, "node budget (default 1e8)");
  scc->add_option("--budget-secs", budget_secs, "time budget (default 600 or FREELAB_BUDGET_SECS)");
  scc->add_option("--resume", resume_path, "frontier checkpoint to resume");
  scc->add_option("--checkpoint", checkpoint_path, "frontier output on indeterminate runs");
  scc->callback([&] {
    const double secs = budget_secs > 0 ? budget_secs : default_budget_secs();
    const int rc = run_search(search_n, target_text, budget_nodes, secs, resume_path,
                              checkpoint_path, threads);
    if (rc != 0) throw CLI::RuntimeError(rc);
  });

  auto* sh = search->add_subcommand("heuristic", "upper-bound construction");
  sh->add_option("--n", search_n, "circle size")->required();
  sh->add_option("--strategy", strat_text, "peel-one-arc | peel-balanced | greedy-min-lip");
  sh->callback([&] {
    const auto circle = build_circle(search_n);
    const auto h = heuristic_circle_system(circle, strategy_from_string(strat_text));
    Json j = system_to_json(h.sys);
    j["achieved_max_lip"] = num_str(h.achieved);
    j["strategy"] = strat_text;
    std::cout << j.dump(2) << std::endl;
  });

  // ---- extensional ----------------------------------------------------
  auto* ext = app.add_subcommand("extensional", "extension operators on circle unions");
  ext->require_subcommand(1);
  int ext_k = 0, ext_i = -1, ext_samples = 3;
  unsigned long long ext_seed = 1;
  std::string i_range, ext_f_file;

  auto* ev = ext->add_subcommand("verify", "norms, ranks, commutation, extension constants");
  ev->add_option("--k", ext_k, "truncation depth")->required();
  ev->add_option("--i-range", i_range, "level range a..b (default all)");
  ev->add_option("--samples", ext_samples, "random profiles per level");
  ev->add_option("--seed", ext_seed, "PRNG seed");
  ev->callback([&] {
    const CircleUnionEnumeration en(ext_k);
    int lo = 0, hi = en.last();
    if (!i_range.empty()) {
      const auto dots = i_range.find("..");
      if (dots == std::string::npos) {
        std::cerr << "--i-range wants a..b\n";
        throw CLI::RuntimeError(1);
      }
      lo = std::stoi(i_range.substr(0, dots));
      hi = std::stoi(i_range.substr(dots + 2));
    }
    const auto rep = verify_extensional_suite(en, lo, hi, ext_samples, ext_seed);
    Json per = Json::array();
    for (const auto& lvl : rep.per_level)
      per.push_back(Json{{"i", lvl.i},
                         {"norm", num_str(lvl.norm)},
                         {"rank", lvl.rank},
                         {"commutes_next", lvl.commutes_next}});
    Json j;
    j["k"] = ext_k;
    j["levels"] = std::move(per);
    j["norms_ok"] = rep.norms_ok;
    j["ranks_ok"] = rep.ranks_ok;
    j["commute_ok"] = rep.commute_ok;
    j["lipschitz_ok"] = rep.lipschitz_ok;
    j["fixes_prefix_ok"] = rep.fixes_prefix_ok;
    j["all_ok"] = rep.all_ok();
    std::cout << j.dump(2) << std::endl;
    if (!rep.all_ok()) throw CLI::RuntimeError(1);
  });

  auto* ea = ext->add_subcommand("apply", "extend function values from D_i");
  ea->add_option("--k", ext_k, "truncation depth")->required();
  ea->add_option("--i", ext_i, "prefix size i")->required();
  ea->add_option("--f", ext_f_file, "values on D_i as JSON {label: 'p/q'}")->required();
  ea->add_option("--out", out_path, "CSV output file (default stdout)");
  ea->callback([&] {
    const CircleUnionEnumeration en(ext_k);
    if (ext_i < 0 || ext_i > en.last()) {
      std::cerr << "i out of range\n";
      throw CLI::RuntimeError(1);
    }
    const auto j = load_json_file(ext_f_file);
    std::vector<Rational> f(ext_i + 1, Rational(0));
    for (const auto& [label, v] : j.items()) {
      const int p = en.space().index_of(label);
      if (p < 0 || !en.in_prefix(ext_i, p)) {
        std::cerr << "point '" << label << "' is not in D_i\n";
        throw CLI::RuntimeError(1);
      }
      f[en.index_of_point(p)] = parse_rational(v.get<std::string>());
    }
    const auto vals = apply_extension(en, ext_i, f);
    std::ostringstream csv;
    csv << "label,value\n";
    for (int p = 0; p < en.space().size(); ++p)
      csv << en.space().label(p) << "," << rational_str(vals[p]) << "\n";
    if (out_path.empty()) std::cout << csv.str();
    else {
      std::ofstream out(out_path);
      out << csv.str();
    }
  });

  // ---- experiment -----------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "canned reproduction suites");
  exp->require_subcommand(1);
  int exp_grid = 3, exp_n = 12, exp_k = 2, exp_samples = 32;
  unsigned long long exp_seed = 1;
  std::string outdir = ".";

  auto* el = exp->add_subcommand("lemma41", "divergent chains and conditionality on a grid");
  el->add_option("--grid", exp_grid, "grid side m")->required();
  el->add_option("--samples", exp_samples, "sampled sign patterns");
  el->add_option("--seed", exp_seed, "PRNG seed");
  el->add_option("--out-dir", outdir, "report directory");
  el->callback([&] {
    const int rc = run_experiment_lemma41(exp_grid, exp_samples, exp_seed, outdir);
    if (rc != 0) throw CLI::RuntimeError(rc);
  });

  auto* et = exp->add_subcommand("thm32", "bound, heuristics and certification on a circle");
  et->add_option("--n", exp_n, "circle size")->required();
  et->add_option("--budget-nodes", budget_nodes);
  et->add_option("--budget-secs", budget_secs);
  et->add_option("--out-dir", outdir, "report directory");
  et->callback([&] {
    const double secs = budget_secs > 0 ? budget_secs : default_budget_secs();
    const int rc = run_experiment_thm32(exp_n, budget_nodes, secs, threads, outdir);
    if (rc != 0) throw CLI::RuntimeError(rc);
  });

  auto* ec = exp->add_subcommand("cor33", "restriction dichotomy on a circle union");
  ec->add_option("--k", exp_k, "truncation depth")->required();
  ec->add_option("--out-dir", outdir, "report directory");
  ec->callback([&] {
    const int rc = run_experiment_cor33(exp_k, outdir);
    if (rc != 0) throw CLI::RuntimeError(rc);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
