#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "feeder/common.hpp"

namespace feeder {

struct Edge {
  NodeId from;
  NodeId to;
  Money rho;     // per-unit flow traversal cost, > 0
  Minutes time;  // average commute time, > 0
};

/// Directed network with a designated interchange node, per-node demand and
/// supply volumes, and per-edge traversal cost/time. Immutable after
/// construction; all queries are pure and safe to call concurrently.
class Network {
 public:
  /// Validates and builds. Throws std::invalid_argument on: unknown/duplicate
  /// node names, missing interchange, self-loops, parallel edges,
  /// non-positive edge cost or time, negative demand/supply, or nonzero
  /// demand at the interchange.
  Network(std::vector<std::string> node_names, const std::string& interchange,
          std::vector<Edge> edges, std::vector<double> demand,
          std::vector<double> supply);

  int node_count() const { return static_cast<int>(names_.size()); }
  NodeId interchange() const { return interchange_; }
  const std::string& node_name(NodeId v) const { return names_[v]; }
  /// Index of a named node; throws if unknown.
  NodeId node(const std::string& name) const;

  std::span<const Edge> edges() const { return edges_; }
  /// Indices into edges() of the out-edges of v.
  std::span<const int> out_edges(NodeId v) const;
  const Edge* find_edge(NodeId from, NodeId to) const;

  double demand(NodeId v) const { return demand_[v]; }
  double supply(NodeId v) const { return supply_[v]; }
  const std::vector<double>& demand() const { return demand_; }
  const std::vector<double>& supply() const { return supply_; }
  double total_demand() const;
  double total_supply() const;

  /// Same nodes, every edge (l,k,rho,t) replaced by (k,l,rho,t). Demand and
  /// supply vectors are carried over unchanged; what they mean on the
  /// reversed graph is the caller's business.
  Network reversed() const;

  /// Minimum total rho over all paths from `from` to `to`; nullopt when
  /// unreachable. cheapest_cost(l, l) == 0.
  std::optional<Money> cheapest_cost(NodeId from, NodeId to) const;
  /// One-to-all variant; unreachable entries are +inf.
  std::vector<double> cheapest_costs_from(NodeId src) const;
  /// Minimum total time from each node to `dst`; unreachable entries +inf.
  std::vector<double> fastest_times_to(NodeId dst) const;

  /// Nodes from which the interchange is not reachable within time T.
  /// Permitted at load time; reported by diagnostics.
  std::vector<NodeId> nodes_cut_off_from_interchange(Minutes T) const;

 private:
  std::vector<std::string> names_;
  NodeId interchange_ = -1;
  std::vector<Edge> edges_;
  std::vector<int> out_offset_;  // CSR offsets into out_edge_idx_
  std::vector<int> out_edge_idx_;
  std::vector<double> demand_;
  std::vector<double> supply_;

  // generic one-to-all Dijkstra over an edge weight selector
  std::vector<double> dijkstra(NodeId src, bool over_time, bool reverse_edges) const;
};

}  // namespace feeder
