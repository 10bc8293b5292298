#include "feeder/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace feeder {
namespace oracle {

namespace {

// splitmix64; stdlib distributions are implementation-defined, this is not
struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  int uniform(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin(double p) { return (next() >> 11) * 0x1.0p-53 < p; }
};

Instance try_generate(const InstanceRecipe& rc, std::uint64_t seed) {
  Rng rng{seed * 0x9e3779b97f4a7c15ULL + 0x123456789ULL};
  const int n = rc.node_count;
  std::vector<std::string> names(n);
  names[0] = "I";
  for (int v = 1; v < n; ++v) names[v] = "n" + std::to_string(v);

  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      if (!rng.coin(rc.edge_density)) continue;
      edges.push_back({u, v, static_cast<double>(rng.uniform(rc.rho_min, rc.rho_max)),
                       static_cast<double>(rng.uniform(rc.time_min, rc.time_max))});
    }

  std::vector<double> demand(n), supply(n);
  for (int v = 0; v < n; ++v) {
    demand[v] = v == 0 ? 0 : rng.uniform(rc.demand_min, rc.demand_max);
    supply[v] = rng.uniform(rc.supply_min, rc.supply_max);
  }

  Instance inst{Network(names, "I", std::move(edges), std::move(demand), std::move(supply)),
                static_cast<double>(rng.uniform(rc.window_min, rc.window_max)),
                rc.alpha,
                std::nullopt,
                std::nullopt,
                std::nullopt};
  if (rc.explicit_tables) {
    std::vector<Minutes> eta(n, 0.0);
    std::vector<Money> zeta(n, 0.0);
    for (int v = 1; v < n; ++v) {
      eta[v] = rng.uniform(rc.time_min, 3 * rc.time_max);
      zeta[v] = rng.uniform(1, 3 * rc.rho_max);
    }
    inst.alt_eta = std::move(eta);
    inst.alt_zeta = std::move(zeta);
  } else {
    inst.cost_factor = rc.cost_factor;
  }
  return inst;
}

}  // namespace

Instance generate(const InstanceRecipe& recipe) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Instance inst = try_generate(recipe, recipe.seed + 1000003ULL * attempt);
    const auto t = inst.net.fastest_times_to(inst.net.interchange());
    for (int v = 0; v < inst.net.node_count(); ++v)
      if (v != inst.net.interchange() && t[v] <= inst.time_window) return inst;
  }
  throw std::runtime_error("no feasible routes after 100 generation attempts (seed " +
                           std::to_string(recipe.seed) + ")");
}

namespace {

void naive_extend(const Network& net, std::vector<NodeId>& walk, Minutes elapsed,
                  Minutes budget, bool record_all, std::size_t max_walks,
                  std::vector<std::vector<NodeId>>& out) {
  if (walk.size() >= 2 &&
      (record_all || walk.back() == net.interchange())) {
    if (out.size() >= max_walks)
      throw SizeGuardError("naive enumeration exceeded its walk guard");
    out.push_back(walk);
  }
  for (int ei : net.out_edges(walk.back())) {
    const Edge& e = net.edges()[ei];
    if (elapsed + e.time > budget) continue;
    walk.push_back(e.to);
    naive_extend(net, walk, elapsed + e.time, budget, record_all, max_walks, out);
    walk.pop_back();
  }
}

}  // namespace

std::vector<std::vector<NodeId>> naive_feedin_walks(const Network& net, Minutes T,
                                                    std::size_t max_walks) {
  std::vector<std::vector<NodeId>> out;
  if (!(T > 0)) return out;
  for (NodeId o = 0; o < net.node_count(); ++o) {
    std::vector<NodeId> walk{o};
    naive_extend(net, walk, 0, T, /*record_all=*/false, max_walks, out);
  }
  return out;
}

std::vector<std::vector<NodeId>> naive_feedout_walks(const Network& net, Minutes T_hat,
                                                     std::size_t max_walks) {
  std::vector<std::vector<NodeId>> out;
  if (!(T_hat > 0)) return out;
  std::vector<NodeId> walk{net.interchange()};
  naive_extend(net, walk, 0, T_hat, /*record_all=*/true, max_walks, out);
  return out;
}

namespace {

// Everything below recomputes the model from raw instance data in rational
// arithmetic: cumulative times, leg splits, per-leg service nodes, prices.

struct RWalk {
  std::vector<NodeId> nodes;
  std::vector<Rational> cum_time;
  std::vector<Rational> cum_cost;
  std::vector<std::pair<int, int>> legs;  // [first,last] positions
};

RWalk annotate(const Network& net, const std::vector<NodeId>& nodes, bool feedout) {
  RWalk w;
  w.nodes = nodes;
  w.cum_time.assign(nodes.size(), 0);
  w.cum_cost.assign(nodes.size(), 0);
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    const Edge* e = net.find_edge(nodes[j], nodes[j + 1]);
    w.cum_time[j + 1] = w.cum_time[j] + rational_from_double(e->time);
    w.cum_cost[j + 1] = w.cum_cost[j] + rational_from_double(e->rho);
  }
  const int n = static_cast<int>(nodes.size());
  const NodeId I = net.interchange();
  if (!feedout) {
    int start = 0;
    for (int p = 1; p < n; ++p)
      if (nodes[p] == I) {
        w.legs.push_back({start, p});
        start = p;
      }
  } else {
    int start = 0;
    for (int p = 1; p + 1 < n; ++p)
      if (nodes[p] == I) {
        w.legs.push_back({start, p});
        start = p;
      }
    w.legs.push_back({start, n - 1});
  }
  return w;
}

// perceived cost of the best alternate transport, in rationals
std::vector<std::optional<Rational>> rational_g(const Instance& inst, const Network& net,
                                                const std::vector<std::vector<NodeId>>& feedin_walks) {
  const int n = net.node_count();
  std::vector<std::optional<Rational>> g(n);
  g[net.interchange()] = Rational(0);
  const Rational alpha = rational_from_double(inst.value_of_time);
  if (inst.cost_factor_mode()) {
    const Rational b = rational_from_double(*inst.cost_factor);
    for (const auto& nodes : feedin_walks) {
      // simple walk: no interior interchange visit
      bool simple = true;
      for (std::size_t p = 1; p + 1 < nodes.size(); ++p)
        if (nodes[p] == net.interchange()) simple = false;
      if (!simple || nodes.front() == net.interchange()) continue;
      Rational t(0), c(0);
      for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
        const Edge* e = net.find_edge(nodes[j], nodes[j + 1]);
        t += rational_from_double(e->time);
        c += rational_from_double(e->rho);
      }
      const Rational key = alpha * t + b * c;
      auto& slot = g[nodes.front()];
      if (!slot || key < *slot) slot = key;
    }
  } else {
    for (int l = 0; l < n; ++l)
      g[l] = alpha * rational_from_double((*inst.alt_eta)[l]) +
             rational_from_double((*inst.alt_zeta)[l]);
  }
  return g;
}

struct ExactBuild {
  ExactLinearProgram lp;
  int flow_vars = 0;
};

ExactBuild build_reference(const Instance& inst, ProblemKind kind,
                           std::optional<double> total_supply) {
  const Network& net = inst.net;
  const bool feedout = kind == ProblemKind::FeedOut;
  const auto walks =
      feedout ? naive_feedout_walks(net, inst.time_window)
              : naive_feedin_walks(net, inst.time_window);

  const Rational alpha = rational_from_double(inst.value_of_time);
  const Rational T = rational_from_double(inst.time_window);

  // feed-out alternate-transport rides the reversed graph in cost-factor mode
  std::vector<std::optional<Rational>> g;
  std::vector<Rational> eta_hat(net.node_count(), 0), zeta_hat(net.node_count(), 0);
  if (!feedout) {
    g = rational_g(inst, net, walks);
  } else if (inst.cost_factor_mode()) {
    const Network rev = net.reversed();
    const auto rev_walks = naive_feedin_walks(rev, inst.time_window);
    const Rational b = rational_from_double(*inst.cost_factor);
    std::vector<std::optional<Rational>> best_key(net.node_count());
    for (const auto& nodes : rev_walks) {
      bool simple = true;
      for (std::size_t p = 1; p + 1 < nodes.size(); ++p)
        if (nodes[p] == rev.interchange()) simple = false;
      if (!simple || nodes.front() == rev.interchange()) continue;
      Rational t(0), c(0);
      for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
        const Edge* e = rev.find_edge(nodes[j], nodes[j + 1]);
        t += rational_from_double(e->time);
        c += rational_from_double(e->rho);
      }
      const Rational key = alpha * t + b * c;
      const NodeId l = nodes.front();
      if (!best_key[l] || key < *best_key[l]) {
        best_key[l] = key;
        // tie-break irrelevant for the optimum value, but eta/zeta must be a
        // consistent pair from one route
        eta_hat[l] = t;
        zeta_hat[l] = b * c;
      }
    }
  } else {
    for (int l = 0; l < net.node_count(); ++l) {
      eta_hat[l] = rational_from_double((*inst.alt_eta)[l]);
      zeta_hat[l] = rational_from_double((*inst.alt_zeta)[l]);
    }
    eta_hat[net.interchange()] = 0;
    zeta_hat[net.interchange()] = 0;
  }

  ExactBuild eb;
  ExactLinearProgram& lp = eb.lp;
  const int n = net.node_count();

  std::vector<int> flow_var(walks.size());
  for (std::size_t r = 0; r < walks.size(); ++r) {
    flow_var[r] = lp.num_vars++;
    Rational c(0);
    for (std::size_t j = 0; j + 1 < walks[r].size(); ++j)
      c += rational_from_double(net.find_edge(walks[r][j], walks[r][j + 1])->rho);
    lp.objective.push_back(-c);
  }
  eb.flow_vars = static_cast<int>(walks.size());

  std::vector<std::vector<std::pair<int, Rational>>> demand_terms(n);
  std::vector<std::vector<std::pair<int, Rational>>> origin_terms(n);
  for (std::size_t r = 0; r < walks.size(); ++r) {
    const RWalk w = annotate(net, walks[r], feedout);
    origin_terms[w.nodes.front()].push_back({flow_var[r], Rational(1)});
    for (std::size_t li = 0; li < w.legs.size(); ++li) {
      auto [a, bpos] = w.legs[li];
      // one variable per distinct node on the leg (paper-literal: every node
      // of the leg is a service position, boundaries included)
      std::map<NodeId, int> pos;  // node -> pickup/dropoff position
      for (int p = a; p <= bpos; ++p) {
        auto [it, ins] = pos.insert({w.nodes[p], p});
        if (!ins && !feedout) it->second = p;  // pickup: last occurrence
      }
      std::vector<std::pair<int, Rational>> leg_row;
      for (auto [node, p] : pos) {
        Rational beta;
        if (!feedout) {
          if (!g[node]) throw std::logic_error("oracle: node without alternate transport");
          // time on board is the remaining traversal time of the route
          const Rational onboard = w.cum_time.back() - w.cum_time[p];
          beta = *g[node] - alpha * onboard - 1;
        } else {
          beta = alpha * (eta_hat[node] - w.cum_time[p]) + zeta_hat[node] - 1;
        }
        const int var = lp.num_vars++;
        lp.objective.push_back(beta);
        leg_row.push_back({var, Rational(1)});
        demand_terms[node].push_back({var, Rational(1)});
      }
      leg_row.push_back({flow_var[r], Rational(-1)});
      lp.rows.push_back({std::move(leg_row), LinearProgram::Rel::LE, Rational(0)});
    }
  }

  for (NodeId l = 0; l < n; ++l) {
    if (demand_terms[l].empty()) continue;
    lp.rows.push_back({std::move(demand_terms[l]), LinearProgram::Rel::LE,
                       rational_from_double(net.demand(l))});
  }

  if (kind == ProblemKind::FeedIn) {
    for (NodeId l = 0; l < n; ++l) {
      if (origin_terms[l].empty()) continue;
      lp.rows.push_back({std::move(origin_terms[l]), LinearProgram::Rel::LE,
                         rational_from_double(net.supply(l))});
    }
  } else if (kind == ProblemKind::SupplyOpt) {
    if (!total_supply) throw std::invalid_argument("supply optimization needs total supply");
    std::vector<std::pair<int, Rational>> budget;
    for (NodeId l = 0; l < n; ++l) {
      const int sv = lp.num_vars++;
      lp.objective.push_back(Rational(0));
      budget.push_back({sv, Rational(1)});
      auto terms = std::move(origin_terms[l]);
      terms.push_back({sv, Rational(-1)});
      lp.rows.push_back({std::move(terms), LinearProgram::Rel::LE, Rational(0)});
    }
    lp.rows.push_back({std::move(budget), LinearProgram::Rel::LE,
                       rational_from_double(*total_supply)});
  } else {
    if (!total_supply) throw std::invalid_argument("feed-out needs total supply");
    std::vector<std::pair<int, Rational>> total;
    for (std::size_t r = 0; r < walks.size(); ++r) total.push_back({flow_var[r], Rational(1)});
    if (!total.empty())
      lp.rows.push_back({std::move(total), LinearProgram::Rel::LE,
                         rational_from_double(*total_supply)});
  }
  return eb;
}

}  // namespace

int reference_variable_count(const Instance& inst, ProblemKind kind) {
  const ExactBuild eb = build_reference(
      inst, kind, kind == ProblemKind::FeedIn ? std::nullopt : std::optional<double>(0.0));
  return eb.lp.num_vars;
}

Rational reference_solve(const Instance& inst, ProblemKind kind,
                         std::optional<double> total_supply, const ExactLimits& limits) {
  const ExactBuild eb = build_reference(inst, kind, total_supply);
  const ExactSolution sol = solve_exact(eb.lp, limits);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error(std::string("oracle solve did not reach optimality: ") +
                             to_string(sol.status));
  return sol.objective;
}

}  // namespace oracle
}  // namespace feeder
