#pragma once

#include <cstdint>
#include <optional>

#include "feeder/instance_io.hpp"
#include "feeder/lp.hpp"

namespace feeder {
namespace oracle {

/// Reproducible random-instance description. All drawn quantities are small
/// integers (costs, times, demands, supplies, the window) and alpha / the
/// cost factor are expected to be dyadic, so every downstream price is exact
/// in both double and rational arithmetic.
struct InstanceRecipe {
  std::uint64_t seed = 1;
  int node_count = 4;
  double edge_density = 0.6;  // probability of each ordered pair
  int rho_min = 1, rho_max = 5;
  int time_min = 1, time_max = 5;
  int demand_min = 0, demand_max = 250;
  int supply_min = 0, supply_max = 150;
  int window_min = 4, window_max = 12;
  double alpha = 0.5;
  double cost_factor = 2.5;
  bool explicit_tables = false;
};

/// Deterministic in the recipe (a hand-rolled generator, so identical across
/// standard libraries). Retries up to 100 reseeded attempts to find a graph
/// where at least one node reaches the interchange within the window; throws
/// std::runtime_error("no feasible routes ...") otherwise.
Instance generate(const InstanceRecipe& recipe);

/// Second, independent walk enumerator: plain recursive extension with no
/// pruning beyond the time budget itself. Returns node sequences.
std::vector<std::vector<NodeId>> naive_feedin_walks(const Network& net, Minutes T,
                                                    std::size_t max_walks = 200'000);
std::vector<std::vector<NodeId>> naive_feedout_walks(const Network& net, Minutes T_hat,
                                                     std::size_t max_walks = 200'000);

enum class ProblemKind { FeedIn, SupplyOpt, FeedOut };

/// Number of variables the full unreduced formulation would have; useful for
/// respecting the exact-solver guard before committing to a solve.
int reference_variable_count(const Instance& inst, ProblemKind kind);

/// Exact optimum of the FULL formulation over the complete unreduced walk
/// set, with prices recomputed here in rational arithmetic. Shares nothing
/// with route enumeration, route reduction or the floating solver.
/// `total_supply` is required for SupplyOpt and FeedOut.
Rational reference_solve(const Instance& inst, ProblemKind kind,
                         std::optional<double> total_supply = std::nullopt,
                         const ExactLimits& limits = {});

}  // namespace oracle
}  // namespace feeder
