// feeder: batch front door for the one-shot feeder coordination models.
//
// Subcommands: routes, prune, solve, sweep-b, sweep-s, gen, verify.
// Every output table is a CSV with a `# meta` preamble so downstream plots
// are reproducible from the file alone.
//
// Exit codes: 0 solved and all optimality-property diagnostics pass;
// 2 solved but a proved property failed; 1 operational error.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "feeder/instance_io.hpp"
#include "feeder/oracle.hpp"
#include "feeder/problems.hpp"

namespace {

using namespace feeder;

struct CommonOpts {
  std::string instance_path;
  std::string out_path;
  double tol = 1e-8;
  std::size_t ceiling = 2'000'000;
  int workers = 1;
};

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

LpTolerances tolerances(const CommonOpts& c) {
  LpTolerances t;
  t.feas = c.tol;
  t.gap = c.tol;
  return t;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    double lo, step, hi;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> lo >> c1 >> step >> c2 >> hi) || c1 != ':' || c2 != ':' || step <= 0)
      throw std::runtime_error("bad grid '" + spec + "' (want lo:step:hi)");
    for (double v = lo; v <= hi + 1e-12; v += step) grid.push_back(v);
  } else {
    std::istringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
  }
  if (grid.empty()) throw std::runtime_error("empty grid");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::runtime_error("grid values must be sorted");
  return grid;
}

// run grid points on up to `workers` threads; rows keep grid order
std::vector<std::string> run_grid(int workers, std::size_t count,
                                  const std::function<std::string(std::size_t)>& fn) {
  std::vector<std::string> rows(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) rows[i] = fn(i);
    return rows;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) rows[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return rows;
}

struct FeedInSide {
  std::vector<Route> routes;
  AltTransport alt;
  PriceTable prices;
  std::vector<int> rbar, rminus, all;
};

FeedInSide load_feedin_side(const Instance& inst, const CommonOpts& c) {
  FeedInSide s;
  s.routes = enumerate_feedin_routes(inst.net, inst.time_window, c.ceiling);
  s.alt = inst.feedin_alt(s.routes);
  s.prices = make_feedin_prices(s.routes, s.alt, inst.time_window);
  s.rbar = reduce_feedin(s.routes, s.prices);
  s.rminus = reduce_supplyopt(s.routes, s.prices, s.rbar);
  s.all.resize(s.routes.size());
  for (std::size_t i = 0; i < s.routes.size(); ++i) s.all[i] = static_cast<int>(i);
  return s;
}

struct FeedOutSide {
  std::vector<Route> routes;
  AltTransport alt;
  PriceTable prices;
  std::vector<int> rhatminus, all;
  EquivalenceContext ctx;
};

FeedOutSide load_feedout_side(const Instance& inst, const CommonOpts& c) {
  auto routes = enumerate_feedout_routes(inst.net, inst.time_window, c.ceiling);
  auto alt = inst.feedout_alt(inst.net, c.ceiling);
  auto prices = make_feedout_prices(routes, alt);
  auto ctx = make_equivalence_context(inst.net, inst.time_window, alt, 1.0, c.ceiling);
  auto rhatminus = reduce_feedout(routes, ctx.rev_routes, ctx.rev_rminus);
  std::vector<int> all(routes.size());
  for (std::size_t i = 0; i < routes.size(); ++i) all[i] = static_cast<int>(i);
  return FeedOutSide{std::move(routes), std::move(alt), std::move(prices),
                     std::move(rhatminus), std::move(all), std::move(ctx)};
}

int cmd_routes(const CommonOpts& c, bool feedout) {
  const Instance inst = load_instance(c.instance_path);
  std::vector<Route> routes =
      feedout ? enumerate_feedout_routes(inst.net, inst.time_window, c.ceiling)
              : enumerate_feedin_routes(inst.net, inst.time_window, c.ceiling);

  std::ofstream file;
  std::ostream& os = open_out(c.out_path, file);
  write_route_table(os, inst.net, routes);

  int tuples = 0;
  for (const Route& r : routes)
    for (int i = 1; i <= r.theta(); ++i) tuples += static_cast<int>(r.leg(i).tuple_pos.size());
  std::cerr << "routes=" << routes.size() << " variables=" << routes.size() + tuples
            << "\n";
  for (NodeId l : inst.net.nodes_cut_off_from_interchange(inst.time_window))
    std::cerr << "note: node " << inst.net.node_name(l)
              << " cannot reach the interchange within the window\n";
  return 0;
}

int cmd_prune(const CommonOpts& c, const std::string& prices_path) {
  const Instance inst = load_instance(c.instance_path);
  const FeedInSide s = load_feedin_side(inst, c);
  const PruneStats st = prune_stats(s.routes, s.prices);

  std::ofstream file;
  std::ostream& os = open_out(c.out_path, file);
  TableWriter w(os);
  w.meta("instance", c.instance_path);
  w.header({"total", "rbar", "r1", "r2", "rminus"});
  w.row({std::to_string(st.total), std::to_string(st.rbar), std::to_string(st.r1),
         std::to_string(st.r2), std::to_string(st.rminus)});

  if (!prices_path.empty()) {
    std::ofstream pf(prices_path);
    if (!pf) throw std::runtime_error("cannot write " + prices_path);
    write_price_table(pf, inst.net, s.routes, s.prices);
  }
  return 0;
}

double instance_total_supply(const Instance& inst) { return inst.net.total_supply(); }

int report_diagnostics(const DiagnosticsReport& rep) {
  for (const auto& chk : rep.checks)
    std::cerr << (chk.pass ? "ok   " : "FAIL ") << chk.name
              << (chk.detail.empty() ? "" : " (" + chk.detail + ")") << "\n";
  return rep.all_pass() ? 0 : 2;
}

int cmd_solve(const CommonOpts& c, const std::string& kind, const std::string& form_name,
              double supply_override, const std::string& dump_lp) {
  const Instance inst = load_instance(c.instance_path);
  const Form form = form_name == "full" ? Form::Full : Form::Reduced;
  const LpTolerances tol = tolerances(c);
  const double s_total =
      supply_override >= 0 ? supply_override : instance_total_supply(inst);

  std::ofstream file;
  std::ostream& os = open_out(c.out_path, file);

  auto maybe_dump = [&](const LinearProgram& lp) {
    if (dump_lp.empty()) return;
    std::ofstream f(dump_lp);
    if (!f) throw std::runtime_error("cannot write " + dump_lp);
    write_lp_format(lp, f);
  };

  if (kind == "feed-in") {
    const FeedInSide side = load_feedin_side(inst, c);
    FeedInProblem p{&inst.net, inst.time_window, side.routes, &side.prices,
                    form == Form::Full ? side.all : side.rbar};
    maybe_dump(build_feedin_lp(p));
    const FlowSolution sol = solve_feedin(p, tol);
    write_solution(os, inst.net, side.routes, side.prices, p.selection, sol);
    if (sol.status != LpStatus::Optimal) {
      std::cerr << "solve failed: " << to_string(sol.status) << "\n";
      return 1;
    }
    return report_diagnostics(verify_optimality_properties(
        SolutionKind::FeedIn, inst.net, side.routes, side.prices, p.selection, sol, 0,
        &side.rbar));
  }
  if (kind == "supply-opt") {
    const FeedInSide side = load_feedin_side(inst, c);
    SupplyOptProblem p{&inst.net,   inst.time_window,
                       side.routes, &side.prices,
                       form == Form::Full ? side.all : side.rminus,
                       s_total};
    maybe_dump(build_supplyopt_lp(p, form));
    const FlowSolution sol = solve_supplyopt(p, form, tol);
    write_solution(os, inst.net, side.routes, side.prices, p.selection, sol);
    if (sol.status != LpStatus::Optimal) {
      std::cerr << "solve failed: " << to_string(sol.status) << "\n";
      return 1;
    }
    std::cerr << "j_max=" << TableWriter::num(absolute_max_profit(
                     inst.net, side.routes, side.prices, side.rminus))
              << "\n";
    return report_diagnostics(verify_optimality_properties(
        SolutionKind::SupplyOpt, inst.net, side.routes, side.prices, p.selection, sol,
        s_total, &side.rbar));
  }
  if (kind == "feed-out" || kind == "feed-out-via-equivalence") {
    const FeedOutSide side = load_feedout_side(inst, c);
    FeedOutProblem p{&inst.net, inst.time_window, side.routes, &side.prices,
                     form == Form::Full ? side.all : side.rhatminus, s_total};
    FlowSolution sol;
    if (kind == "feed-out") {
      maybe_dump(build_feedout_lp(p, form));
      sol = solve_feedout(p, form, tol);
    } else {
      sol = solve_feedout_via_equivalence(p, side.ctx, tol);
    }
    write_solution(os, inst.net, side.routes, side.prices, p.selection, sol);
    if (sol.status != LpStatus::Optimal) {
      std::cerr << "solve failed: " << to_string(sol.status) << "\n";
      return 1;
    }
    return report_diagnostics(verify_optimality_properties(
        SolutionKind::FeedOut, inst.net, side.routes, side.prices, p.selection, sol,
        s_total, nullptr));
  }
  throw std::runtime_error("unknown kind '" + kind + "'");
}

int cmd_sweep_b(const CommonOpts& c, const std::string& grid_spec) {
  const Instance inst = load_instance(c.instance_path);
  if (!inst.cost_factor_mode())
    throw std::runtime_error("sweep-b needs an instance in cost-factor mode");
  const std::vector<double> grid = parse_grid(grid_spec);
  const auto routes = enumerate_feedin_routes(inst.net, inst.time_window, c.ceiling);

  const auto rows = run_grid(c.workers, grid.size(), [&](std::size_t i) {
    const double b = grid[i];
    const AltTransport alt = best_alt_transport(inst.net, routes, inst.value_of_time, b);
    const PriceTable prices = make_feedin_prices(routes, alt, inst.time_window);
    const PruneStats st = prune_stats(routes, prices);
    const MultilegReport rep =
        check_multileg_conditions(inst.net, routes, inst.value_of_time, b);
    std::ostringstream ss;
    ss << TableWriter::num(b) << ',' << st.rbar << ',' << st.r1 << ',' << st.r2 << ','
       << st.rminus << ',' << (rep.cond_a ? 1 : 0) << ',' << (rep.cond_b_any ? 1 : 0);
    return ss.str();
  });

  std::ofstream file;
  std::ostream& os = open_out(c.out_path, file);
  TableWriter w(os);
  w.meta("instance", c.instance_path);
  w.meta("alpha", TableWriter::num(inst.value_of_time));
  w.meta("T", TableWriter::num(inst.time_window));
  for (NodeId l = 0; l < inst.net.node_count(); ++l) {
    const auto b_star = viability_threshold(inst.net, routes, inst.value_of_time, l);
    if (b_star) w.meta("b_star_" + inst.net.node_name(l), TableWriter::num(*b_star));
  }
  w.header({"b", "rbar", "r1", "r2", "rminus", "has_multileg", "has_interchange_origin"});
  for (const auto& r : rows) os << r << "\n";
  return 0;
}

int cmd_sweep_s(const CommonOpts& c, const std::string& grid_spec,
                const std::string& form_name, bool vrp_baseline) {
  const Instance inst = load_instance(c.instance_path);
  const Form form = form_name == "full" ? Form::Full : Form::Reduced;
  const std::vector<double> grid = parse_grid(grid_spec);
  const FeedInSide side = load_feedin_side(inst, c);
  const LpTolerances tol = tolerances(c);
  const double flow_tol = 1e-7;

  const auto rows = run_grid(c.workers, grid.size(), [&](std::size_t i) {
    const double s = grid[i];
    SupplyOptProblem p{&inst.net,   inst.time_window,
                       side.routes, &side.prices,
                       form == Form::Full ? side.all : side.rminus,
                       s};
    const FlowSolution sol = solve_supplyopt(p, form, tol);
    if (sol.status != LpStatus::Optimal)
      throw std::runtime_error(std::string("sweep point failed: ") + to_string(sol.status));
    int used = 0;
    for (double f : sol.route_flow)
      if (f > flow_tol) ++used;
    std::ostringstream ss;
    ss << TableWriter::num(s) << ',' << TableWriter::num(sol.objective) << ',' << used;
    if (vrp_baseline) {
      // all supply parked at the interchange, fixed-supply feed-in solve
      std::vector<double> sup(inst.net.node_count(), 0.0);
      sup[inst.net.interchange()] = s;
      Network vrp_net(
          [&] {
            std::vector<std::string> names;
            for (int v = 0; v < inst.net.node_count(); ++v)
              names.push_back(inst.net.node_name(v));
            return names;
          }(),
          inst.net.node_name(inst.net.interchange()),
          std::vector<Edge>(inst.net.edges().begin(), inst.net.edges().end()),
          inst.net.demand(), sup);
      FeedInProblem q{&vrp_net, inst.time_window, side.routes, &side.prices, side.rbar};
      const FlowSolution vs = solve_feedin(q, tol);
      ss << ',' << TableWriter::num(vs.objective);
    }
    return ss.str();
  });

  std::ofstream file;
  std::ostream& os = open_out(c.out_path, file);
  TableWriter w(os);
  w.meta("instance", c.instance_path);
  w.meta("form", form_name);
  w.meta("j_max", TableWriter::num(absolute_max_profit(inst.net, side.routes, side.prices,
                                                       side.rminus)));
  std::vector<std::string> cols{"s", "profit", "routes_used"};
  if (vrp_baseline) cols.push_back("vrp_profit");
  w.header(cols);
  for (const auto& r : rows) os << r << "\n";
  return 0;
}

int cmd_gen(const CommonOpts& c, const oracle::InstanceRecipe& recipe) {
  const Instance inst = oracle::generate(recipe);
  if (c.out_path.empty()) {
    std::cout << instance_to_json(inst) << "\n";
  } else {
    save_instance(inst, c.out_path);
    std::cerr << "wrote " << c.out_path << "\n";
  }
  return 0;
}

int cmd_verify(const CommonOpts& c, const std::string& kind, double supply_override) {
  const Instance inst = load_instance(c.instance_path);
  const LpTolerances tol = tolerances(c);
  const double s_total =
      supply_override >= 0 ? supply_override : instance_total_supply(inst);

  // enumeration cross-check against the independent naive enumerator
  const bool feedout = kind == "feed-out";
  std::set<std::vector<NodeId>> ours, naive;
  if (feedout) {
    for (const Route& r : enumerate_feedout_routes(inst.net, inst.time_window, c.ceiling))
      ours.insert(r.nodes());
    for (auto& w : oracle::naive_feedout_walks(inst.net, inst.time_window))
      naive.insert(std::move(w));
  } else {
    for (const Route& r : enumerate_feedin_routes(inst.net, inst.time_window, c.ceiling))
      ours.insert(r.nodes());
    for (auto& w : oracle::naive_feedin_walks(inst.net, inst.time_window))
      naive.insert(std::move(w));
  }
  if (ours != naive) {
    std::cerr << "FAIL enumeration mismatch: " << ours.size() << " vs " << naive.size()
              << " routes\n";
    return 2;
  }

  double primary = 0;
  oracle::ProblemKind okind;
  if (kind == "feed-in") {
    okind = oracle::ProblemKind::FeedIn;
    const FeedInSide side = load_feedin_side(inst, c);
    FeedInProblem p{&inst.net, inst.time_window, side.routes, &side.prices, side.rbar};
    primary = solve_feedin(p, tol).objective;
  } else if (kind == "supply-opt") {
    okind = oracle::ProblemKind::SupplyOpt;
    const FeedInSide side = load_feedin_side(inst, c);
    SupplyOptProblem p{&inst.net,   inst.time_window, side.routes,
                       &side.prices, side.rminus,      s_total};
    primary = solve_supplyopt(p, Form::Reduced, tol).objective;
  } else if (kind == "feed-out") {
    okind = oracle::ProblemKind::FeedOut;
    const FeedOutSide side = load_feedout_side(inst, c);
    FeedOutProblem p{&inst.net,    inst.time_window, side.routes,
                     &side.prices, side.rhatminus,   s_total};
    primary = solve_feedout(p, Form::Reduced, tol).objective;
  } else {
    throw std::runtime_error("unknown kind '" + kind + "'");
  }

  const Rational ref = oracle::reference_solve(
      inst, okind,
      kind == "feed-in" ? std::nullopt : std::optional<double>(s_total));
  const double ref_d = static_cast<double>(ref);
  const double dev = std::abs(primary - ref_d) / (1.0 + std::abs(ref_d));
  std::cout << "primary=" << TableWriter::num(primary)
            << " oracle=" << TableWriter::num(ref_d) << " rel_dev=" << dev << "\n";
  if (dev > 1e-9) {
    std::cerr << "FAIL objectives disagree beyond 1e-9\n";
    return 2;
  }
  std::cerr << "ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-shot feeder coordination: routes, pricing, pruning, LP solves"};
  app.require_subcommand(1);

  CommonOpts c;
  std::string kind = "feed-in", form = "reduced", grid, dump_lp;
  double supply_override = -1;
  bool feedout_routes_flag = false, vrp_baseline = false;
  oracle::InstanceRecipe recipe;

  auto add_common = [&](CLI::App* sub, bool needs_instance = true) {
    if (needs_instance)
      sub->add_option("--instance", c.instance_path, "instance JSON")->required();
    sub->add_option("--out", c.out_path, "output file (default stdout)");
    sub->add_option("--tol", c.tol, "solver certification tolerance");
    sub->add_option("--ceiling", c.ceiling, "route-count ceiling");
    sub->add_option("--workers", c.workers, "parallel sweep workers");
  };

  auto* routes_cmd = app.add_subcommand("routes", "enumerate feasible routes");
  add_common(routes_cmd);
  routes_cmd->add_flag("--feed-out", feedout_routes_flag, "enumerate feed-out routes");

  std::string prices_path;
  auto* prune_cmd = app.add_subcommand("prune", "offline route elimination statistics");
  add_common(prune_cmd);
  prune_cmd->add_option("--prices", prices_path, "also export the price table here");

  auto* solve_cmd = app.add_subcommand("solve", "solve one problem and verify properties");
  add_common(solve_cmd);
  solve_cmd->add_option("--kind", kind,
                        "feed-in | supply-opt | feed-out | feed-out-via-equivalence");
  solve_cmd->add_option("--form", form, "full | reduced");
  solve_cmd->add_option("--supply", supply_override, "total supply override");
  solve_cmd->add_option("--dump-lp", dump_lp, "write the LP in interchange format");

  auto* sweepb_cmd = app.add_subcommand("sweep-b", "route-set size vs cost factor");
  add_common(sweepb_cmd);
  sweepb_cmd->add_option("--grid", grid, "b grid: lo:step:hi or v1,v2,...")->required();

  auto* sweeps_cmd = app.add_subcommand("sweep-s", "max profit vs total supply");
  add_common(sweeps_cmd);
  sweeps_cmd->add_option("--grid", grid, "s grid: lo:step:hi or v1,v2,...")->required();
  sweeps_cmd->add_option("--form", form, "full | reduced");
  sweeps_cmd->add_flag("--vrp-baseline", vrp_baseline,
                       "also solve with all supply at the interchange");

  auto* gen_cmd = app.add_subcommand("gen", "generate a reproducible random instance");
  add_common(gen_cmd, /*needs_instance=*/false);
  gen_cmd->add_option("--seed", recipe.seed, "random seed");
  gen_cmd->add_option("--nodes", recipe.node_count, "node count");
  gen_cmd->add_option("--density", recipe.edge_density, "edge probability");
  gen_cmd->add_option("--alpha", recipe.alpha, "value of time");
  gen_cmd->add_option("--cost-factor", recipe.cost_factor, "cost factor b");
  gen_cmd->add_option("--window-min", recipe.window_min, "min time window");
  gen_cmd->add_option("--window-max", recipe.window_max, "max time window");
  gen_cmd->add_option("--demand-max", recipe.demand_max, "max node demand");
  gen_cmd->add_option("--supply-max", recipe.supply_max, "max node supply");
  gen_cmd->add_flag("--explicit-tables", recipe.explicit_tables,
                    "emit explicit alt-transport tables instead of a cost factor");

  auto* verify_cmd = app.add_subcommand("verify", "paired primary/oracle run");
  add_common(verify_cmd);
  verify_cmd->add_option("--kind", kind, "feed-in | supply-opt | feed-out");
  verify_cmd->add_option("--supply", supply_override, "total supply override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (routes_cmd->parsed()) return cmd_routes(c, feedout_routes_flag);
    if (prune_cmd->parsed()) return cmd_prune(c, prices_path);
    if (solve_cmd->parsed()) return cmd_solve(c, kind, form, supply_override, dump_lp);
    if (sweepb_cmd->parsed()) return cmd_sweep_b(c, grid);
    if (sweeps_cmd->parsed()) return cmd_sweep_s(c, grid, form, vrp_baseline);
    if (gen_cmd->parsed()) return cmd_gen(c, recipe);
    if (verify_cmd->parsed()) return cmd_verify(c, kind, supply_override);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
