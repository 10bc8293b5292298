#pragma once

#include <optional>
#include <string>

#include "feeder/lp.hpp"
#include "feeder/pricing.hpp"
#include "feeder/reduction.hpp"

namespace feeder {

enum class Form { Full, Reduced };

/// Feed-in profit maximization over a selected subset of a priced feed-in
/// route set (all of R, or R-bar). Demand and supply come from the network.
struct FeedInProblem {
  const Network* net = nullptr;
  Minutes T = 0;
  std::span<const Route> routes;
  const PriceTable* prices = nullptr;
  std::vector<int> selection;
};

/// Supply distribution is a decision variable; only total supply is fixed.
/// The reduced form requires `selection` to be R-. With `pin_interchange`
/// the supply distribution is restricted to the set that fixes
/// S_I = max(0, s - sum_{l != I} d_l); in the reduced form (where S_I is
/// structurally zero) this is applied as the value-identical budget clamp
/// min(s, sum_{l != I} d_l).
struct SupplyOptProblem {
  const Network* net = nullptr;
  Minutes T = 0;
  std::span<const Route> routes;
  const PriceTable* prices = nullptr;
  std::vector<int> selection;
  double total_supply = 0;
  bool pin_interchange = false;
};

/// Drop-offs from the interchange; total supply s sits at the interchange.
struct FeedOutProblem {
  const Network* net = nullptr;
  Minutes T = 0;  // T-hat
  std::span<const Route> routes;  // feed-out routes
  const PriceTable* prices = nullptr;  // p-hat table
  std::vector<int> selection;
  double total_supply = 0;
};

/// Where each LP column came from. Indices are -1 when a variable does not
/// exist in the chosen form.
struct VariableMap {
  std::vector<int> flow_var;    // per selection entry
  std::vector<int> tuple_var;   // per global PriceTable tuple index
  std::vector<int> supply_var;  // per node (supply optimization only)
};

LinearProgram build_feedin_lp(const FeedInProblem& p, VariableMap* map = nullptr);
LinearProgram build_supplyopt_lp(const SupplyOptProblem& p, Form form,
                                 VariableMap* map = nullptr);
LinearProgram build_feedout_lp(const FeedOutProblem& p, Form form,
                               VariableMap* map = nullptr);

/// Structured solution. route_flow/alloc are aligned with the problem's
/// selection and the price table's global tuple indexing; flows eliminated by
/// a reduced form are reconstructed from their anchor allocations.
struct FlowSolution {
  LpStatus status = LpStatus::Optimal;
  double objective = 0;
  std::vector<double> route_flow;
  std::vector<double> alloc;
  std::vector<double> node_total;  // F_l
  std::vector<double> supply;      // S_l (variable where applicable; feed-out: final supply)
  LpSolution lp;
};

FlowSolution solve_feedin(const FeedInProblem& p, const LpTolerances& tol = {});
/// Reduced-form infeasibility would indicate a bug; it is logged and the full
/// form is solved instead.
FlowSolution solve_supplyopt(const SupplyOptProblem& p, Form form,
                             const LpTolerances& tol = {});
FlowSolution solve_feedout(const FeedOutProblem& p, Form form,
                           const LpTolerances& tol = {});

/// Reversed-graph machinery shared by a grid of equivalence solves.
struct EquivalenceContext {
  Network rev_net;                 // the equivalent feed-in graph
  std::vector<Route> rev_routes;   // feed-in routes on it
  PriceTable rev_prices;
  std::vector<int> rev_rbar;
  std::vector<int> rev_rminus;
};

/// Builds the equivalent feed-in side for a feed-out network: reverse the
/// graph, enumerate feed-in routes for the same window, price them with the
/// same alternate-transport tables, reduce.
EquivalenceContext make_equivalence_context(const Network& feedout_net, Minutes T,
                                            const AltTransport& alt, Money op_cost = 1,
                                            std::size_t ceiling = 2'000'000);

/// Solves the feed-out problem through the equivalent supply-optimization
/// problem on the reversed graph (supply distribution restricted so the
/// construction applies) and maps flows back tuple-for-tuple.
FlowSolution solve_feedout_via_equivalence(const FeedOutProblem& p,
                                           const EquivalenceContext& ctx,
                                           const LpTolerances& tol = {});

/// Per node: whether a simple route from it covers its own pickup cost
/// (the sufficient-supply assumption).
std::vector<bool> profitable_origin_nodes(const Network& net, std::span<const Route> routes,
                                          const PriceTable& prices);
/// Feed-out mirror: a simple route to the node whose destination drop-off
/// covers the route cost.
std::vector<bool> profitable_destination_nodes(const Network& net,
                                               std::span<const Route> feedout_routes,
                                               const PriceTable& prices);

/// Closed-form absolute maximum profit over all supply distributions:
/// sum_l d_l * max over simple R- routes from l of (revenue at origin - cost).
/// Nodes without such a route contribute zero.
double absolute_max_profit(const Network& net, std::span<const Route> routes,
                           const PriceTable& prices, const std::vector<int>& rminus);
double absolute_max_profit_feedout(const Network& net,
                                   std::span<const Route> feedout_routes,
                                   const PriceTable& prices,
                                   const std::vector<int>& rhatminus);

enum class SolutionKind { FeedIn, SupplyOpt, FeedOut };

struct PropertyCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct DiagnosticsReport {
  std::vector<PropertyCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Checks the proved properties of optimal solutions on a certified-optimal
/// FlowSolution (throws if the solution is not optimal): full-allocation of
/// secondary legs, no-loss conditions, supply-optimization route/supply
/// structure, feed-out analogs. `rbar` enables the R-bar membership check
/// where available. Tolerance is 1e-6 * (1 + |objective|).
DiagnosticsReport verify_optimality_properties(SolutionKind kind, const Network& net,
                                               std::span<const Route> routes,
                                               const PriceTable& prices,
                                               const std::vector<int>& selection,
                                               const FlowSolution& sol,
                                               double total_supply = 0,
                                               const std::vector<int>* rbar = nullptr);

}  // namespace feeder
