#include "feeder/pricing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "feeder/reduction.hpp"

namespace feeder {

Money max_viable_price(Money g_l, double alpha, Minutes T, Minutes pickup) {
  return g_l - alpha * (T - pickup);
}

Money feedout_price(Minutes eta_hat, Money zeta_hat, double alpha, Minutes dropoff) {
  return alpha * (eta_hat - dropoff) + zeta_hat;
}

namespace {

// argmin tie-break: lower cost, then shorter time, then lexicographic nodes
bool better_route(double key_a, const Route& a, double key_b, const Route& b) {
  if (key_a != key_b) return key_a < key_b;
  if (a.total_cost() != b.total_cost()) return a.total_cost() < b.total_cost();
  if (a.total_time() != b.total_time()) return a.total_time() < b.total_time();
  return a.nodes() < b.nodes();
}

}  // namespace

AltTransport best_alt_transport(const Network& net, std::span<const Route> routes,
                                double alpha, double b) {
  if (b < 0) throw std::invalid_argument("cost factor must be nonnegative");
  const int n = net.node_count();
  AltTransport alt;
  alt.alpha = alpha;
  alt.eta.assign(n, 0);
  alt.zeta.assign(n, 0);
  alt.reachable.assign(n, false);
  alt.reachable[net.interchange()] = true;  // null trip, g = 0

  std::vector<const Route*> best(n, nullptr);
  for (const Route& r : routes) {
    if (!r.simple() || r.direction() != Direction::ToInterchange) continue;
    const NodeId l = r.origin();
    if (l == net.interchange()) continue;
    const double key = alpha * r.total_time() + b * r.total_cost();
    if (!best[l] ||
        better_route(key, r, alpha * best[l]->total_time() + b * best[l]->total_cost(),
                     *best[l]))
      best[l] = &r;
  }
  for (NodeId l = 0; l < n; ++l) {
    if (!best[l]) continue;
    alt.reachable[l] = true;
    alt.eta[l] = best[l]->total_time();
    alt.zeta[l] = b * best[l]->total_cost();
  }
  return alt;
}

AltTransport alt_transport_from_tables(const Network& net, double alpha,
                                       std::vector<Minutes> eta, std::vector<Money> zeta) {
  const int n = net.node_count();
  if (static_cast<int>(eta.size()) != n || static_cast<int>(zeta.size()) != n)
    throw std::invalid_argument("alt-transport table size mismatch");
  AltTransport alt;
  alt.alpha = alpha;
  alt.eta = std::move(eta);
  alt.zeta = std::move(zeta);
  alt.eta[net.interchange()] = 0;
  alt.zeta[net.interchange()] = 0;
  alt.reachable.assign(n, true);
  return alt;
}

int PriceTable::find(int route, int leg, NodeId node) const {
  for (int t = route_first[route]; t < route_first[route + 1]; ++t)
    if (tuples[t].leg == leg && tuples[t].node == node) return t;
  return -1;
}

namespace {

template <class TimeFn, class PriceFn>
PriceTable build_table(std::span<const Route> routes, const AltTransport& alt,
                       Money op_cost, TimeFn&& service_time, PriceFn&& price_of) {
  PriceTable pt;
  pt.op_cost = op_cost;
  pt.route_first.reserve(routes.size() + 1);
  pt.route_first.push_back(0);
  for (int r = 0; r < static_cast<int>(routes.size()); ++r) {
    const Route& route = routes[r];
    for (int i = 1; i <= route.theta(); ++i) {
      for (int pos : route.leg(i).tuple_pos) {
        const NodeId l = route.nodes()[pos];
        if (!alt.reachable[l])
          throw std::logic_error("priced node lacks alternate-transport data");
        const Minutes t = service_time(route, i, l);
        const Money p = price_of(l, t);
        pt.tuples.push_back({r, i, l, t});
        pt.price.push_back(p);
        pt.revenue.push_back(p - op_cost);
      }
    }
    pt.route_first.push_back(static_cast<int>(pt.tuples.size()));
  }
  return pt;
}

}  // namespace

PriceTable make_feedin_prices(std::span<const Route> routes, const AltTransport& alt,
                              Minutes T, Money op_cost) {
  return build_table(
      routes, alt, op_cost,
      [&](const Route& r, int leg, NodeId l) { return r.pickup_time(leg, l, T); },
      [&](NodeId l, Minutes t) { return max_viable_price(alt.g(l), alt.alpha, T, t); });
}

PriceTable make_feedout_prices(std::span<const Route> routes, const AltTransport& alt_hat,
                               Money op_cost) {
  return build_table(
      routes, alt_hat, op_cost,
      [&](const Route& r, int leg, NodeId l) { return r.dropoff_time(leg, l); },
      [&](NodeId l, Minutes t) {
        return feedout_price(alt_hat.eta[l], alt_hat.zeta[l], alt_hat.alpha, t);
      });
}

namespace {

// r(l,b)* for finite b; null when S(l) is empty
const Route* best_simple_route(std::span<const Route> routes, double alpha, double b,
                               NodeId l) {
  const Route* best = nullptr;
  for (const Route& r : routes) {
    if (!r.simple() || r.origin() != l || r.direction() != Direction::ToInterchange)
      continue;
    const double key = alpha * r.total_time() + b * r.total_cost();
    if (!best ||
        better_route(key, r, alpha * best->total_time() + b * best->total_cost(), *best))
      best = &r;
  }
  return best;
}

// r(l,inf)*: the cheapest simple route
const Route* cheapest_simple_route(std::span<const Route> routes, NodeId l) {
  const Route* best = nullptr;
  for (const Route& r : routes) {
    if (!r.simple() || r.origin() != l || r.direction() != Direction::ToInterchange)
      continue;
    if (!best || better_route(r.total_cost(), r, best->total_cost(), *best)) best = &r;
  }
  return best;
}

}  // namespace

std::optional<double> viability_threshold(const Network& net,
                                          std::span<const Route> routes,
                                          double alpha, NodeId l) {
  if (l == net.interchange()) return std::nullopt;
  const Route* r1 = best_simple_route(routes, alpha, 1.0, l);
  const Route* rinf = cheapest_simple_route(routes, l);
  if (!r1 || !rinf) return std::nullopt;
  const auto from_I = net.cheapest_costs_from(net.interchange());
  if (!std::isfinite(from_I[l])) return std::nullopt;
  return 1.0 + (1.0 + from_I[l] + alpha * (r1->total_time() - rinf->total_time())) /
                   r1->total_cost();
}

MultilegReport check_multileg_conditions(const Network& net, std::span<const Route> routes,
                                         double alpha, double b) {
  const int n = net.node_count();
  const NodeId I = net.interchange();
  MultilegReport rep;
  rep.cond_b.assign(n, false);
  rep.cond_c.assign(n, false);
  rep.cond_d.assign(n, false);
  rep.b_star.assign(n, std::nullopt);

  const AltTransport alt_b = best_alt_transport(net, routes, alpha, b);
  const AltTransport alt_1 = best_alt_transport(net, routes, alpha, 1.0);
  PriceTable prices;  // needs route times only through the table below
  Minutes T = 0;
  for (const Route& r : routes) T = std::max(T, r.total_time());
  prices = make_feedin_prices(routes, alt_b, T);

  const std::vector<int> rbar = reduce_feedin(routes, prices);
  const auto from_I = net.cheapest_costs_from(I);

  for (int idx : rbar) {
    const Route& r = routes[idx];
    if (r.theta() > 1) rep.cond_a = true;
    if (r.simple() && r.origin() == I) {
      rep.cond_b_any = true;
      // per-node: a profitable pickup at l on such a route
      auto [t0, t1] = prices.tuple_range(idx);
      for (int t = t0; t < t1; ++t)
        if (prices.tuples[t].node != I &&
            prices.revenue[t] >= r.total_cost() - kReductionSlack)
          rep.cond_b[prices.tuples[t].node] = true;
    }
  }
  for (NodeId l = 0; l < n; ++l) {
    if (l == I) continue;
    if (alt_b.reachable[l] && alt_1.reachable[l] && std::isfinite(from_I[l]))
      rep.cond_c[l] = alt_b.g(l) >= alt_1.g(l) + from_I[l] + 1.0 - kReductionSlack;
    rep.b_star[l] = viability_threshold(net, routes, alpha, l);
    if (rep.b_star[l]) rep.cond_d[l] = b >= *rep.b_star[l] - kReductionSlack;
  }
  return rep;
}

}  // namespace feeder
