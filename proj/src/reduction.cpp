#include "feeder/reduction.hpp"

#include <algorithm>
#include <map>

namespace feeder {

Money leg_score(const Route& route, int leg, const PriceTable& prices, int route_index) {
  Money best = 0;  // max(beta, 0) over the leg's tuples
  auto [t0, t1] = prices.tuple_range(route_index);
  for (int t = t0; t < t1; ++t)
    if (prices.tuples[t].leg == leg) best = std::max(best, prices.revenue[t]);
  return best - route.leg(leg).cost;
}

std::vector<int> reduce_feedin(std::span<const Route> routes, const PriceTable& prices) {
  std::vector<int> kept;
  for (int r = 0; r < static_cast<int>(routes.size()); ++r) {
    const Route& route = routes[r];
    if (route.simple()) {
      if (leg_score(route, 1, prices, r) >= -kReductionSlack) kept.push_back(r);
      continue;
    }
    double sum = 0;
    bool ok = true;
    for (int i = 1; i <= route.theta(); ++i) {
      const Money w = leg_score(route, i, prices, r);
      sum += w;
      if (i > 1 && w < -kReductionSlack) {
        ok = false;
        break;
      }
    }
    if (ok && sum >= -kReductionSlack) kept.push_back(r);
  }
  return kept;
}

std::vector<int> reduce_supplyopt(std::span<const Route> routes, const PriceTable& prices,
                                  const std::vector<int>& rbar) {
  std::vector<int> kept;
  for (int r : rbar) {
    const Route& route = routes[r];
    const NodeId I = route.nodes().back();  // feed-in routes end at I
    if (route.origin() == I) continue;
    const int t = prices.find(r, 1, route.origin());
    if (t < 0) continue;
    if (prices.revenue[t] < route.leg(1).cost - kReductionSlack) continue;
    if (route.has_cycle_in_leg(1)) continue;
    kept.push_back(r);
  }
  return kept;
}

std::vector<int> reduce_feedout(std::span<const Route> feedout_routes,
                                std::span<const Route> rev_routes,
                                const std::vector<int>& rev_rminus) {
  std::map<std::vector<NodeId>, int> rminus_by_nodes;
  for (int r : rev_rminus) rminus_by_nodes.emplace(rev_routes[r].nodes(), r);

  std::vector<int> kept;
  for (int r = 0; r < static_cast<int>(feedout_routes.size()); ++r) {
    std::vector<NodeId> image(feedout_routes[r].nodes().rbegin(),
                              feedout_routes[r].nodes().rend());
    if (rminus_by_nodes.count(image)) kept.push_back(r);
  }
  return kept;
}

PruneStats prune_stats(std::span<const Route> routes, const PriceTable& prices) {
  PruneStats st;
  st.total = routes.size();
  const auto rbar = reduce_feedin(routes, prices);
  st.rbar = rbar.size();
  for (int r : rbar)
    (routes[r].simple() ? st.r1 : st.r2)++;
  st.rminus = reduce_supplyopt(routes, prices, rbar).size();
  return st;
}

}  // namespace feeder
