#pragma once

#include <span>
#include <vector>

#include "feeder/pricing.hpp"

namespace feeder {

/// Inclusion slack for the reduction comparisons: borderline w = 0 routes must
/// not be dropped by rounding, and keeping a route is always sound.
inline constexpr double kReductionSlack = 1e-12;

/// w_r^i = max_{l in leg i} max(beta, 0) - c_r^i.
Money leg_score(const Route& route, int leg, const PriceTable& prices, int route_index);

/// Reduced feed-in set R-bar = R1 (simple routes with w^1 >= 0) union
/// R2 (multi-leg routes with every secondary w^i >= 0 and sum_i w^i >= 0).
/// Returns indices into `routes`, ascending. Operates on route metadata only;
/// never inspects demand or supply.
std::vector<int> reduce_feedin(std::span<const Route> routes, const PriceTable& prices);

/// R- for supply optimization: routes of R-bar that do not originate at the
/// interchange, whose origin pickup covers the first-leg cost, and whose
/// first leg has no cycle.
std::vector<int> reduce_supplyopt(std::span<const Route> routes, const PriceTable& prices,
                                  const std::vector<int>& rbar);

/// R-hat-minus: feed-out routes whose reversal image lies in R-. `rev_routes`
/// is the feed-in route set on the reversed network and `rev_rminus` the R-
/// indices within it. Matching is by node sequence of the image.
std::vector<int> reduce_feedout(std::span<const Route> feedout_routes,
                                std::span<const Route> rev_routes,
                                const std::vector<int>& rev_rminus);

/// The quantities plotted against b in route-set studies.
struct PruneStats {
  std::size_t total = 0;   // |R|
  std::size_t rbar = 0;    // |R-bar|
  std::size_t r1 = 0;
  std::size_t r2 = 0;
  std::size_t rminus = 0;  // |R-|
};

PruneStats prune_stats(std::span<const Route> routes, const PriceTable& prices);

}  // namespace feeder
