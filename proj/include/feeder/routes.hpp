#pragma once

#include <cstddef>
#include <vector>

#include "feeder/network.hpp"

namespace feeder {

/// Feed-in routes run to the interchange (every leg ends there); feed-out
/// routes run from it (every leg starts there).
enum class Direction { ToInterchange, FromInterchange };

/// One trip to (or from) the interchange within a route. Positions index into
/// the owning route's node sequence; the leg spans [first_pos, last_pos]
/// inclusive. tuple_pos lists the positions that carry a priced service tuple:
/// one per distinct node of the leg, excluding the boundary interchange
/// positions that belong to the leg structure rather than to service (the
/// arrival that closes a feed-in leg; the leading interchange of legs i>=2;
/// mirrored for feed-out).
struct Leg {
  int first_pos = 0;
  int last_pos = 0;
  Money cost = 0;
  Minutes time = 0;
  std::vector<int> tuple_pos;
};

/// A walk in the network, decomposed into legs. Total cost/time are edge sums;
/// cum_time(j)/cum_cost(j) measure from the route start to node position j.
class Route {
 public:
  Route(const Network& net, std::vector<NodeId> nodes, Direction dir);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  Direction direction() const { return dir_; }
  NodeId origin() const { return nodes_.front(); }
  NodeId destination() const { return nodes_.back(); }
  int length() const { return static_cast<int>(nodes_.size()); }  // n_r
  Minutes total_time() const { return cum_time_.back(); }
  Money total_cost() const { return cum_cost_.back(); }
  int theta() const { return static_cast<int>(legs_.size()); }
  /// Legs are 1-indexed to match the usual leg-numbering convention.
  const Leg& leg(int i) const { return legs_[i - 1]; }
  bool simple() const { return theta() == 1; }

  Minutes cum_time(int pos) const { return cum_time_[pos]; }
  Money cum_cost(int pos) const { return cum_cost_[pos]; }

  /// Arrival time at the last occurrence of l within leg i when the route
  /// departs its origin at T - total_time(). Throws if l is not on the leg.
  Minutes pickup_time(int leg, NodeId l, Minutes T) const;
  /// Traversal time from the route start (t = 0) to the first occurrence of l
  /// within leg i. Throws if l is not on the leg.
  Minutes dropoff_time(int leg, NodeId l) const;

  /// True iff a node repeats within the leg apart from the boundary
  /// interchange positions that delimit the leg.
  bool has_cycle_in_leg(int leg) const;

  /// The image of this route under graph reversal: node sequence reversed,
  /// direction flipped, theta and total cost preserved; service tuple
  /// (r, i, l) maps to (reversed, theta - i + 1, l).
  Route reversed(const Network& reversed_net) const;

  bool operator==(const Route& o) const { return nodes_ == o.nodes_; }

  std::string label(const Network& net) const;  // "A-I-A-I" for logs/exports

 private:
  std::vector<NodeId> nodes_;
  std::vector<Minutes> cum_time_;
  std::vector<Money> cum_cost_;
  std::vector<Leg> legs_;
  Direction dir_;
  NodeId interchange_;
};

/// All walks with destination = interchange, total time <= T and at least one
/// edge. Exhaustive; each permutation of leg orderings is a distinct route.
/// Throws RouteCeilingError when more than `ceiling` routes would be produced.
std::vector<Route> enumerate_feedin_routes(const Network& net, Minutes T,
                                           std::size_t ceiling = 2'000'000);

/// All walks with origin = interchange, total time <= T_hat, length >= 2.
std::vector<Route> enumerate_feedout_routes(const Network& net, Minutes T_hat,
                                            std::size_t ceiling = 2'000'000);

/// Position of `route` in `routes`, or -1. Matching is by node sequence.
int find_route(const std::vector<Route>& routes, const std::vector<NodeId>& nodes);

}  // namespace feeder
