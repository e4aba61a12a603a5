#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>

#include "CLI11.hpp"
#include "perception/acceptance.hpp"
#include "report.hpp"
#include "scenario.hpp"

namespace perception::cli {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Options {
  std::string scenario;
  std::size_t grid_n = 0;
  std::string out;
  std::string kappa;
  std::vector<std::string> pgp;
};

struct Context {
  std::string command;
  Scenario sc;
  std::string out;
  std::ostream* log = nullptr;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  json meta(json extra = json::object()) const {
    json m = {{"command", command},
              {"version", kVersion},
              {"grid_n", sc.grid_n},
              {"prior", sc.prior},
              {"elapsed_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
    if (!sc.pgps.empty()) m["pgps"] = sc.pgps;
    for (auto& [k, v] : extra.items()) m[k] = v;
    return m;
  }
  void write(const std::string& name, const Table& t, json extra = json::object()) const {
    write_table(out, name, t, meta(std::move(extra)));
    *log << "wrote " << out << "/" << name << ".csv (" << t.size() << " rows)\n";
  }
};

Context make_context(const std::string& command, const Options& o, std::ostream& log) {
  Context c;
  c.command = command;
  c.log = &log;
  if (!o.scenario.empty()) c.sc = load_scenario(o.scenario);
  if (o.grid_n != 0) {
    if (o.grid_n < 2) throw Error(ErrorKind::kSchema, "--grid-n must be >= 2");
    c.sc.grid_n = o.grid_n;
  }
  if (!o.kappa.empty()) {
    c.sc.kappa = parse_number_list(o.kappa);
    for (double v : c.sc.kappa)
      if (!(v >= 0.0)) throw Error(ErrorKind::kSchema, "kappa values must be >= 0");
  }
  if (!o.pgp.empty()) {
    c.sc.pgps.clear();
    for (const std::string& tag : o.pgp) c.sc.pgps.push_back(pgp_from_tag(tag));
  }
  c.out = o.out.empty() ? c.sc.output : o.out;
  return c;
}

std::vector<Pgp> build_pgps(const Context& c, const TypeDist& prior) {
  if (c.sc.pgps.empty()) throw Error(ErrorKind::kSchema, c.command + " needs a pgp (--pgp or scenario 'pgp')");
  std::vector<Pgp> out;
  for (const json& spec : c.sc.pgps) out.push_back(build_pgp(spec, prior));
  return out;
}

std::vector<double> kappas_or(const Context& c, double lo, double hi, std::size_t count) {
  if (!c.sc.kappa.empty()) return c.sc.kappa;
  std::vector<double> k(count);
  for (std::size_t i = 0; i < count; ++i) k[i] = lo + (hi - lo) * i / (count - 1.0);
  return k;
}

int cmd_voa(const Context& c) {
  const Grid g(c.sc.grid_n);
  const TypeDist prior = build_prior(c.sc.prior, g);
  const auto pgps = build_pgps(c, prior);
  const json rule_spec = c.sc.rule.value_or(json{{"kind", "threshold"}, {"cutoff", 0.5}});
  const AllocationRule rule = build_rule(rule_spec, g);
  const Mechanism mech = transfers_from_envelope(rule);
  // The double sum is O(n^2); skip it on very fine grids.
  const bool direct = g.n() <= 4000;

  Table summary({"pgp", "rule", "nu", "nu_direct", "v_a", "v_i"});
  Table weights({"pgp", "cell", "pi", "f_i", "e_i", "w", "w_information", "w_bias"});
  for (const Pgp& p : pgps) {
    const AttentionWeights w(p);
    summary.add()
        .text(p.label())
        .text(rule_spec.dump())
        .num(w.apply(rule.q()))
        .num(direct ? std::optional<double>(value_of_attention_direct(rule, p)) : std::nullopt)
        .num(attentive_utility(mech, prior))
        .num(inattentive_utility(mech, p));
    for (std::size_t j = 0; j < g.n(); ++j) {
      weights.add()
          .text(p.label())
          .integer(static_cast<long long>(j))
          .num(g.midpoint(j))
          .num(p.f_i()[j])
          .num(p.posterior_mean()[j])
          .num(w.w()[j] * g.n())
          .num(w.information()[j] * g.n())
          .num(w.bias()[j] * g.n());
    }
  }
  c.write("voa", summary, {{"rule", rule_spec}});
  c.write("attention_weights", weights, {{"note", "weights are densities: w_j times n"}});
  return kExitOk;
}

int cmd_maximize(const Context& c) {
  const Grid g(c.sc.grid_n);
  const TypeDist prior = build_prior(c.sc.prior, g);
  Table summary({"pgp", "max_value", "tol", "argmax_count", "cutoff_first", "cutoff_last", "pi_low_end",
                 "pi_high_begin"});
  Table thresholds({"pgp", "k", "cutoff", "nu", "is_max"});
  for (const Pgp& p : build_pgps(c, prior)) {
    const MaximizerReport r = attention_maximizers(p);
    summary.add()
        .text(p.label())
        .num(r.max_value)
        .num(r.tol)
        .integer(static_cast<long long>(r.threshold_argmax.size()))
        .num(g.boundary(r.threshold_argmax.front()))
        .num(g.boundary(r.threshold_argmax.back()))
        .num(g.boundary(r.pi_low_end))
        .num(g.boundary(r.pi_high_begin));
    std::size_t next = 0;
    for (std::size_t k = 0; k <= g.n(); ++k) {
      const bool is_max = next < r.threshold_argmax.size() && r.threshold_argmax[next] == k;
      if (is_max) ++next;
      thresholds.add().text(p.label()).integer(static_cast<long long>(k)).num(g.boundary(k)).num(r.threshold_value[k]).flag(is_max);
    }
  }
  c.write("maximizers", summary, {{"tolerances", {{"argmax", "1e-12 * n"}}}});
  c.write("threshold_values", thresholds);
  return kExitOk;
}

int cmd_accuracy(const Context& c) {
  const Grid g(c.sc.grid_n);
  const TypeDist prior = build_prior(c.sc.prior, g);
  const auto pgps = build_pgps(c, prior);
  std::vector<std::string> cols{"x", "prior_tail"};
  std::vector<SCurve> curves;
  for (const Pgp& p : pgps) {
    cols.push_back("S:" + p.label());
    curves.emplace_back(p);
  }
  const auto tail = prior_tail_integral(prior);
  Table s(cols);
  for (std::size_t k = 0; k <= g.n(); ++k) {
    auto& row = s.add().num(g.boundary(k)).num(tail[k]);
    for (const SCurve& cv : curves) row.num(cv.at(k));
  }
  Table pairs({"a", "b", "order", "max_s_a_minus_s_b", "min_s_a_minus_s_b"});
  for (std::size_t a = 0; a < pgps.size(); ++a) {
    for (std::size_t b = a + 1; b < pgps.size(); ++b) {
      double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k <= g.n(); ++k) {
        const double d = curves[a].at(k) - curves[b].at(k);
        hi = std::max(hi, d);
        lo = std::min(lo, d);
      }
      pairs.add().text(pgps[a].label()).text(pgps[b].label()).text(to_string(is_more_accurate(pgps[a], pgps[b]))).num(hi).num(lo);
    }
  }
  const json tol = {{"accuracy", default_accuracy_tol(g)}};
  c.write("s_curve", s, {{"tolerances", tol}});
  c.write("accuracy", pairs, {{"tolerances", tol}, {"note", "lower S is more accurate"}});
  return kExitOk;
}

int cmd_efficiency(const Context& c) {
  const Grid g(c.sc.grid_n);
  const TypeDist prior = build_prior(c.sc.prior, g);
  const CostFunction cost = build_cost(c.sc.cost);
  const AllocationFamily family =
      c.sc.family == "threshold" ? AllocationFamily::kThreshold : AllocationFamily::kMonotone;
  const auto kappas = kappas_or(c, 0.0, 0.05, 51);
  Table rows({"pgp", "family", "kappa", "regime", "welfare", "nu", "threshold", "welfare_attentive_net",
              "welfare_inattentive", "lambda"});
  Table summary({"pgp", "family", "w_a_star", "w_i_star", "kappa_star", "kappa_i", "kappa_bar", "nu_sell",
                 "manage_feasible"});
  for (const Pgp& p : build_pgps(c, prior)) {
    const EfficiencyProblem ep(p, cost, family);
    const bool feasible = ep.manage_feasible();
    summary.add()
        .text(p.label())
        .text(to_string(family))
        .num(ep.bounds().w_a_star)
        .num(ep.bounds().w_i_star)
        .num(ep.bounds().kappa_star)
        .num(feasible ? std::optional<double>(ep.kappa_i()) : std::nullopt)
        .num(ep.kappa_bar())
        .num(ep.nu_sell())
        .flag(feasible);
    for (double k : kappas) {
      const EfficiencyOutcome o = ep.solve(k);
      rows.add()
          .text(p.label())
          .text(to_string(family))
          .num(k)
          .text(to_string(o.regime))
          .num(o.welfare)
          .num(o.nu)
          .num(o.threshold)
          .num(o.welfare_attentive_net)
          .num(o.welfare_inattentive)
          .num(o.lambda);
    }
  }
  const json extra = {{"cost", c.sc.cost}, {"family", to_string(family)}, {"kappa", kappas}, {"tolerances", {{"kappa_bar", 1e-9}, {"constraint_band", 1e-7}}}};
  c.write("efficiency", rows, extra);
  c.write("efficiency_summary", summary, extra);
  return kExitOk;
}

bool uniform(const TypeDist& prior) {
  for (std::size_t j = 0; j < prior.grid().n(); ++j)
    if (std::abs(prior.pmf(j) - 1.0 / prior.grid().n()) > 1e-15) return false;
  return true;
}

int cmd_screening(const Context& c) {
  Scenario sc = c.sc;
  if (sc.pgps.empty()) sc.pgps = {json{{"kind", "rho_U"}}, json{{"kind", "rho_C"}}};
  const Grid g(sc.grid_n);
  const TypeDist prior = build_prior(sc.prior, g);
  const CostFunction cost = build_cost(sc.cost);
  const auto kappas = kappas_or(c, 0.0, 0.06, 61);

  Table rows({"pgp", "kappa", "regime", "profit", "v_a", "v_i", "nu", "lambda", "solver_lambda", "solver_sup_gap"});
  Table summary({"pgp", "kappa_low", "kappa_high", "profit_attentive", "profit_inattentive", "nu_q_attentive",
                 "nu_q_inattentive"});
  Table rules({"pgp", "kappa", "cell", "pi", "q"});
  for (const json& spec : sc.pgps) {
    const std::string kind = spec.value("kind", "");
    const bool closed = (kind == "rho_U" || kind == "rho_C") && cost.kind() == CostKind::kQuadratic && uniform(prior);
    std::vector<ScreeningSolution> sols;
    std::string label;
    ScreeningThresholds th;
    if (closed) {
      const RhoUKernel kernel = spec.value("construction", "shift") == "entropic" ? RhoUKernel::kEntropic : RhoUKernel::kShift;
      const ScreeningModel m(kind == "rho_U" ? ScreeningPgp::kRhoU : ScreeningPgp::kRhoC, g.n(), kernel);
      label = m.problem().pgp().label();
      th = m.problem().thresholds();
      const ScreeningBenchmarks b = m.benchmarks();
      summary.add().text(label).num(th.kappa_low).num(th.kappa_high).num(b.profit_a).num(b.profit_i).num(b.nu_a).num(b.nu_i);
      sols = carrot_stick_curves(m, kappas);
    } else {
      const ScreeningProblem pr(build_pgp(spec, prior), cost);
      label = pr.pgp().label();
      th = pr.thresholds();
      const auto& w = pr.weights();
      summary.add()
          .text(label)
          .num(th.kappa_low)
          .num(th.kappa_high)
          .num(pr.attentive_objective().value(pr.q_attentive()))
          .num(pr.inattentive_objective().value(pr.q_inattentive()))
          .num(w.apply(pr.q_attentive().q()))
          .num(w.apply(pr.q_inattentive().q()));
      for (double k : kappas) sols.push_back(pr.solve(k));
    }
    for (const ScreeningSolution& s : sols) {
      rows.add()
          .text(label)
          .num(s.kappa)
          .text(to_string(s.regime))
          .num(s.profit)
          .num(s.v_a)
          .num(s.v_i)
          .num(s.nu)
          .num(s.lambda)
          .num(s.solver_lambda)
          .num(s.solver_sup_gap);
      if (sc.emit_rules) {
        for (std::size_t j = 0; j < g.n(); ++j)
          rules.add().text(label).num(s.kappa).integer(static_cast<long long>(j)).num(g.midpoint(j)).num(s.rule[j]);
      }
    }
  }
  const json extra = {{"cost", sc.cost}, {"pgps", sc.pgps}, {"kappa", kappas}, {"tolerances", {{"threshold_bisection", 1e-10}, {"constraint_band", 1e-7}}}};
  c.write("screening", rows, extra);
  c.write("screening_summary", summary, extra);
  if (sc.emit_rules) c.write("screening_rules", rules, extra);
  return kExitOk;
}

int cmd_hype(const Context& c) {
  std::vector<double> hs = c.sc.h;
  if (hs.empty())
    for (int i = 0; i <= 20; ++i) hs.push_back(i / 20.0);
  const auto kappas = kappas_or(c, 0.0025, 0.2, 80);

  Table opt({"kappa", "h_s_star", "h_b_star", "h_b_alternative", "h_s_grid", "h_b_grid"});
  for (const OptimalHypeRow& r : optimal_hype(kappas, c.sc.h_steps))
    opt.add().num(r.kappa).num(r.h_s_star).num(r.h_b_star).num(r.h_b_alternative).num(r.h_s_grid).num(r.h_b_grid);

  Table region({"h", "kappa", "kappa_low", "kappa_high", "regime", "price", "revenue", "buyer_utility",
                "d_revenue_sign", "d_buyer_sign"});
  for (const HypeRegionRow& r : hype_region_map(hs, kappas)) {
    region.add()
        .num(r.h)
        .num(r.kappa)
        .num(r.kappa_low)
        .num(r.kappa_high)
        .text(to_string(r.regime))
        .num(r.price)
        .num(r.revenue)
        .num(r.buyer_utility)
        .integer(r.d_revenue_sign)
        .integer(r.d_buyer_sign);
  }

  // Exogenous-inattention price of each h, run through a grid mechanism.
  Table check({"h", "price", "nu_grid", "nu_formula", "revenue_grid", "revenue_formula", "buyer_utility_grid",
               "buyer_utility_formula"});
  for (double h : hs) {
    const double p = inattentive_price(h);
    const HypeGridCheck gc = hype_grid_check(h, p, c.sc.grid_n);
    check.add()
        .num(h)
        .num(gc.price)
        .num(gc.nu_grid)
        .num(gc.nu_formula)
        .num(gc.revenue_grid)
        .num(inattentive_revenue(h, gc.price))
        .num(gc.buyer_utility_grid)
        .num(inattentive_buyer_utility(h, gc.price));
  }
  const json extra = {{"h_steps", c.sc.h_steps}, {"h", hs}, {"kappa", kappas}, {"tolerances", {{"finite_difference_step", 1e-6}, {"sign_threshold", 1e-9}}}};
  c.write("hype_optimal", opt, extra);
  c.write("hype_region", region, extra);
  c.write("hype_grid_check", check, extra);
  return kExitOk;
}

int cmd_verify(const Context& c, std::ostream& out) {
  Table t({"id", "title", "pass", "detail"});
  json timing = json::object();
  int failed = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    const CriterionResult r = run_criterion(id, c.sc.grid_n);
    out << format_result(r) << '\n' << std::flush;
    t.add().integer(r.id).text(r.title).flag(r.pass).text(r.detail);
    timing[std::to_string(id)] = r.seconds;
    failed += r.pass ? 0 : 1;
  }
  out << (kCriterionCount - failed) << "/" << kCriterionCount << " criteria passed\n";
  c.write("verify", t, {{"seconds", timing}});
  return failed == 0 ? kExitOk : kExitFailure;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--scenario", o.scenario, "Scenario JSON file");
  sub->add_option("--grid-n", o.grid_n, "Grid size override");
  sub->add_option("--out", o.out, "Output directory (default: scenario 'output' or ./out)");
  sub->add_option("--kappa", o.kappa, "Attention costs: a,b,c or start:stop:count");
  sub->add_option("--pgp", o.pgp, "PGP tag or JSON file; repeat for several")->take_all();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mechanism design with perception errors: numerical toolkit", "perception"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"voa", "Value of attention of a rule, with per-cell weights"},
      {"maximize-attention", "Threshold scan for the attention-maximizing rules"},
      {"accuracy", "S curves and pairwise accuracy order"},
      {"efficiency", "Welfare-maximizing mechanism across attention costs"},
      {"screening", "Revenue-maximizing mechanism across attention costs"},
      {"hype", "Posted prices under hype: optima and regime map"},
      {"verify", "Run the acceptance checks"},
  };
  for (const Sub& s : subs) add_common(app.add_subcommand(s.name, s.help), o);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::Success& e) {
    // --help / --version
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitSchema;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    Context c = make_context(cmd, o, err);
    if (cmd == "voa") return cmd_voa(c);
    if (cmd == "maximize-attention") return cmd_maximize(c);
    if (cmd == "accuracy") return cmd_accuracy(c);
    if (cmd == "efficiency") return cmd_efficiency(c);
    if (cmd == "screening") return cmd_screening(c);
    if (cmd == "hype") return cmd_hype(c);
    return cmd_verify(c, out);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what();
    if (e.achievable_hi() > e.achievable_lo())
      err << " (achievable nu in [" << e.achievable_lo() << ", " << e.achievable_hi() << "])";
    err << '\n';
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kExitSchema;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace perception::cli
