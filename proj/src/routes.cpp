#include "feeder/routes.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace feeder {

Route::Route(const Network& net, std::vector<NodeId> nodes, Direction dir)
    : nodes_(std::move(nodes)), dir_(dir), interchange_(net.interchange()) {
  if (nodes_.size() < 2) throw std::invalid_argument("route needs at least two nodes");
  cum_time_.resize(nodes_.size());
  cum_cost_.resize(nodes_.size());
  cum_time_[0] = 0;
  cum_cost_[0] = 0;
  for (std::size_t j = 0; j + 1 < nodes_.size(); ++j) {
    const Edge* e = net.find_edge(nodes_[j], nodes_[j + 1]);
    if (!e)
      throw std::invalid_argument("route uses missing edge " + net.node_name(nodes_[j]) +
                                  "->" + net.node_name(nodes_[j + 1]));
    cum_time_[j + 1] = cum_time_[j] + e->time;
    cum_cost_[j + 1] = cum_cost_[j] + e->rho;
  }

  const int n = length();
  const NodeId I = interchange_;
  std::vector<std::pair<int, int>> spans;  // [first,last] node positions per leg
  if (dir_ == Direction::ToInterchange) {
    // a leg ends exactly when I is reached via an edge
    int start = 0;
    for (int p = 1; p < n; ++p) {
      if (nodes_[p] == I) {
        spans.push_back({start, p});
        start = p;
      }
    }
    if (spans.empty() || spans.back().second != n - 1)
      throw std::invalid_argument("feed-in route must end at the interchange");
  } else {
    if (nodes_[0] != I)
      throw std::invalid_argument("feed-out route must start at the interchange");
    // a leg starts at each departure from I
    int start = 0;
    for (int p = 1; p + 1 < n; ++p) {
      if (nodes_[p] == I) {
        spans.push_back({start, p});
        start = p;
      }
    }
    spans.push_back({start, n - 1});
  }

  legs_.reserve(spans.size());
  const int theta = static_cast<int>(spans.size());
  for (int i = 0; i < theta; ++i) {
    Leg leg;
    leg.first_pos = spans[i].first;
    leg.last_pos = spans[i].second;
    leg.time = cum_time_[leg.last_pos] - cum_time_[leg.first_pos];
    leg.cost = cum_cost_[leg.last_pos] - cum_cost_[leg.first_pos];

    // service-eligible positions: skip the boundary interchange positions
    // (see Leg docs); one tuple per distinct node. Service times come from
    // pickup_time/dropoff_time, not from these representative positions.
    int lo = leg.first_pos, hi = leg.last_pos;
    if (dir_ == Direction::ToInterchange) {
      --hi;                  // the arrival at I that closes the leg
      if (i > 0) ++lo;       // leading I carried over from the previous leg
    } else {
      ++lo;                  // the departure I that opens the leg
      if (i + 1 < theta) --hi;  // trailing I handed to the next leg
    }
    std::map<NodeId, int> chosen;  // node -> position
    for (int p = lo; p <= hi; ++p) {
      auto [it, inserted] = chosen.insert({nodes_[p], p});
      if (!inserted && dir_ == Direction::ToInterchange) it->second = p;  // keep last
      // feed-out keeps the first occurrence
    }
    for (auto& [node, pos] : chosen) leg.tuple_pos.push_back(pos);
    legs_.push_back(std::move(leg));
  }
}

Minutes Route::pickup_time(int leg_idx, NodeId l, Minutes T) const {
  const Leg& lg = leg(leg_idx);
  for (int p = lg.last_pos; p >= lg.first_pos; --p)
    if (nodes_[p] == l) return T - total_time() + cum_time_[p];
  throw std::invalid_argument("node not on leg");
}

Minutes Route::dropoff_time(int leg_idx, NodeId l) const {
  const Leg& lg = leg(leg_idx);
  for (int p = lg.first_pos; p <= lg.last_pos; ++p)
    if (nodes_[p] == l) return cum_time_[p];
  throw std::invalid_argument("node not on leg");
}

bool Route::has_cycle_in_leg(int leg_idx) const {
  const Leg& lg = leg(leg_idx);
  int lo = lg.first_pos, hi = lg.last_pos;
  if (dir_ == Direction::ToInterchange)
    --hi;  // terminal I is the leg structure, not a cycle
  else
    ++lo;  // leading I likewise
  std::unordered_set<NodeId> seen;
  for (int p = lo; p <= hi; ++p)
    if (!seen.insert(nodes_[p]).second) return true;
  return false;
}

Route Route::reversed(const Network& reversed_net) const {
  std::vector<NodeId> rev(nodes_.rbegin(), nodes_.rend());
  const Direction flipped = dir_ == Direction::ToInterchange
                                ? Direction::FromInterchange
                                : Direction::ToInterchange;
  return Route(reversed_net, std::move(rev), flipped);
}

std::string Route::label(const Network& net) const {
  std::string s;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    if (j) s += '-';
    s += net.node_name(nodes_[j]);
  }
  return s;
}

namespace {

void extend_feedin(const Network& net, const std::vector<double>& fastest_to_I,
                   std::vector<NodeId>& walk, Minutes elapsed, Minutes T,
                   std::size_t ceiling, std::vector<Route>& out) {
  const NodeId here = walk.back();
  if (walk.size() >= 2 && here == net.interchange()) {
    if (out.size() >= ceiling) throw RouteCeilingError(ceiling);
    out.emplace_back(net, walk, Direction::ToInterchange);
  }
  for (int ei : net.out_edges(here)) {
    const Edge& e = net.edges()[ei];
    const Minutes t = elapsed + e.time;
    // prune: even the fastest continuation to I does not fit the window
    if (t + fastest_to_I[e.to] > T) continue;
    walk.push_back(e.to);
    extend_feedin(net, fastest_to_I, walk, t, T, ceiling, out);
    walk.pop_back();
  }
}

void extend_feedout(const Network& net, std::vector<NodeId>& walk, Minutes elapsed,
                    Minutes T_hat, std::size_t ceiling, std::vector<Route>& out) {
  for (int ei : net.out_edges(walk.back())) {
    const Edge& e = net.edges()[ei];
    const Minutes t = elapsed + e.time;
    if (t > T_hat) continue;
    walk.push_back(e.to);
    if (out.size() >= ceiling) throw RouteCeilingError(ceiling);
    out.emplace_back(net, walk, Direction::FromInterchange);
    extend_feedout(net, walk, t, T_hat, ceiling, out);
    walk.pop_back();
  }
}

}  // namespace

std::vector<Route> enumerate_feedin_routes(const Network& net, Minutes T,
                                           std::size_t ceiling) {
  std::vector<Route> out;
  if (!(T > 0)) return out;
  const auto fastest = net.fastest_times_to(net.interchange());
  std::vector<NodeId> walk(1);
  for (NodeId o = 0; o < net.node_count(); ++o) {
    if (fastest[o] > T) continue;
    walk[0] = o;
    extend_feedin(net, fastest, walk, 0, T, ceiling, out);
  }
  return out;
}

std::vector<Route> enumerate_feedout_routes(const Network& net, Minutes T_hat,
                                            std::size_t ceiling) {
  std::vector<Route> out;
  if (!(T_hat > 0)) return out;
  std::vector<NodeId> walk{net.interchange()};
  extend_feedout(net, walk, 0, T_hat, ceiling, out);
  return out;
}

int find_route(const std::vector<Route>& routes, const std::vector<NodeId>& nodes) {
  for (std::size_t i = 0; i < routes.size(); ++i)
    if (routes[i].nodes() == nodes) return static_cast<int>(i);
  return -1;
}

}  // namespace feeder
