#pragma once

#include <optional>
#include <span>
#include <vector>

#include "feeder/routes.hpp"

namespace feeder {

/// Perceived cost of the best alternate transport per node: travel time eta,
/// price zeta, g = alpha*eta + zeta. g at the interchange is 0 (the null
/// trip). Nodes with no simple route to the interchange within the window are
/// flagged unreachable and carry no values.
struct AltTransport {
  double alpha = 0;
  std::vector<Minutes> eta;
  std::vector<Money> zeta;
  std::vector<bool> reachable;

  Money g(NodeId l) const { return alpha * eta[l] + zeta[l]; }
};

/// p_bar = g_l - alpha * (T - pickup). May be negative; such tuples are
/// pruned or priced out downstream.
Money max_viable_price(Money g_l, double alpha, Minutes T, Minutes pickup);

/// Feed-out price: alpha * (eta_hat - dropoff) + zeta_hat.
Money feedout_price(Minutes eta_hat, Money zeta_hat, double alpha, Minutes dropoff);

/// Cost-factor model (the alternate transport costs b*c_r and takes t_r along
/// some feed-in route): per node the alternate rides the simple route
/// minimizing alpha*t + b*c. Ties broken by lower cost, then shorter time,
/// then lexicographic node sequence. `routes` must be the feed-in route set
/// for the window the prices are meant for.
AltTransport best_alt_transport(const Network& net, std::span<const Route> routes,
                                double alpha, double b);

/// Explicit-table mode; eta/zeta given per node (interchange entries forced
/// to zero). Mutually exclusive with the cost-factor model per instance.
AltTransport alt_transport_from_tables(const Network& net, double alpha,
                                       std::vector<Minutes> eta, std::vector<Money> zeta);

/// One priced pickup (feed-in) or drop-off (feed-out) opportunity.
struct ServiceTuple {
  int route = 0;       // index into the priced route set
  int leg = 0;         // 1-based
  NodeId node = 0;
  Minutes time = 0;    // pickup time (feed-in) or drop-off time (feed-out)
};

/// Prices for every service tuple of a route set, flattened; tuples of route
/// r occupy [route_first[r], route_first[r+1]).
struct PriceTable {
  std::vector<ServiceTuple> tuples;
  std::vector<int> route_first;
  std::vector<Money> price;    // p_bar (feed-in) or p_hat (feed-out)
  std::vector<Money> revenue;  // price - op_cost, exactly
  Money op_cost = 1;

  int tuple_count() const { return static_cast<int>(tuples.size()); }
  std::pair<int, int> tuple_range(int route) const {
    return {route_first[route], route_first[route + 1]};
  }
  /// Index of tuple (route, leg, node), or -1.
  int find(int route, int leg, NodeId node) const;
};

/// Builds the feed-in price table: p_bar per Eq.-of-viable-price, revenue
/// beta = p_bar - op_cost. Operational cost defaults to 1 money unit per
/// allocation; exposed for sensitivity runs.
PriceTable make_feedin_prices(std::span<const Route> routes, const AltTransport& alt,
                              Minutes T, Money op_cost = 1);

/// Feed-out analog over drop-off times.
PriceTable make_feedout_prices(std::span<const Route> routes, const AltTransport& alt_hat,
                               Money op_cost = 1);

/// Necessary cost-factor for multi-legged routes to serve node l:
/// b_l* = 1 + (1 + c*(I,l) + alpha*(t_{r(l,1)*} - t_{r(l,inf)*})) / c_{r(l,1)*}.
/// nullopt when l has no simple route or the interchange cannot reach l.
std::optional<double> viability_threshold(const Network& net,
                                          std::span<const Route> routes,
                                          double alpha, NodeId l);

/// Evaluation of the multi-leg viability conditions for a given b.
struct MultilegReport {
  bool cond_a = false;                 // a multi-leg route exists in R-bar
  bool cond_b_any = false;             // an interchange-origin simple route exists in R-bar
  std::vector<bool> cond_b;            // per node: such a route has a profitable pickup at l
  std::vector<bool> cond_c;            // per node: g_l(b) >= g_l(1) + c*(I,l) + 1
  std::vector<bool> cond_d;            // per node: b >= b_l*
  std::vector<std::optional<double>> b_star;  // per node threshold
};

/// Requires cost-factor pricing; evaluates conditions (a)-(d) for the given b
/// over the feed-in route set.
MultilegReport check_multileg_conditions(const Network& net, std::span<const Route> routes,
                                         double alpha, double b);

}  // namespace feeder
