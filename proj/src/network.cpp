#include "feeder/network.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <unordered_map>

namespace feeder {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Network::Network(std::vector<std::string> node_names, const std::string& interchange,
                 std::vector<Edge> edges, std::vector<double> demand,
                 std::vector<double> supply)
    : names_(std::move(node_names)),
      edges_(std::move(edges)),
      demand_(std::move(demand)),
      supply_(std::move(supply)) {
  const int n = static_cast<int>(names_.size());
  if (n == 0) throw std::invalid_argument("network has no nodes");
  {
    std::set<std::string> seen(names_.begin(), names_.end());
    if (static_cast<int>(seen.size()) != n)
      throw std::invalid_argument("duplicate node name");
  }
  interchange_ = -1;
  for (int v = 0; v < n; ++v)
    if (names_[v] == interchange) interchange_ = v;
  if (interchange_ < 0)
    throw std::invalid_argument("interchange '" + interchange + "' not in node set");

  if (static_cast<int>(demand_.size()) != n || static_cast<int>(supply_.size()) != n)
    throw std::invalid_argument("demand/supply size mismatch");
  for (int v = 0; v < n; ++v) {
    if (demand_[v] < 0) throw std::invalid_argument("negative demand at " + names_[v]);
    if (supply_[v] < 0) throw std::invalid_argument("negative supply at " + names_[v]);
  }
  if (demand_[interchange_] != 0)
    throw std::invalid_argument("interchange demand must be zero");

  std::set<std::pair<int, int>> pairs;
  for (const Edge& e : edges_) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw std::invalid_argument("edge references unknown node");
    if (e.from == e.to)
      throw std::invalid_argument("self-loop edge at " + names_[e.from]);
    if (!(e.time > 0)) throw std::invalid_argument("non-positive edge time");
    if (!(e.rho > 0)) throw std::invalid_argument("non-positive edge cost");
    if (!pairs.insert({e.from, e.to}).second)
      throw std::invalid_argument("parallel edge " + names_[e.from] + "->" + names_[e.to]);
  }

  out_offset_.assign(n + 1, 0);
  for (const Edge& e : edges_) out_offset_[e.from + 1]++;
  for (int v = 0; v < n; ++v) out_offset_[v + 1] += out_offset_[v];
  out_edge_idx_.resize(edges_.size());
  std::vector<int> cursor(out_offset_.begin(), out_offset_.end() - 1);
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i)
    out_edge_idx_[cursor[edges_[i].from]++] = i;
}

NodeId Network::node(const std::string& name) const {
  for (int v = 0; v < node_count(); ++v)
    if (names_[v] == name) return v;
  throw std::invalid_argument("unknown node '" + name + "'");
}

std::span<const int> Network::out_edges(NodeId v) const {
  return {out_edge_idx_.data() + out_offset_[v],
          out_edge_idx_.data() + out_offset_[v + 1]};
}

const Edge* Network::find_edge(NodeId from, NodeId to) const {
  for (int ei : out_edges(from))
    if (edges_[ei].to == to) return &edges_[ei];
  return nullptr;
}

double Network::total_demand() const {
  double s = 0;
  for (double d : demand_) s += d;
  return s;
}

double Network::total_supply() const {
  double s = 0;
  for (double v : supply_) s += v;
  return s;
}

Network Network::reversed() const {
  std::vector<Edge> rev;
  rev.reserve(edges_.size());
  for (const Edge& e : edges_) rev.push_back({e.to, e.from, e.rho, e.time});
  return Network(names_, names_[interchange_], std::move(rev), demand_, supply_);
}

std::vector<double> Network::dijkstra(NodeId src, bool over_time, bool reverse_edges) const {
  const int n = node_count();
  std::vector<double> dist(n, kInf);
  dist[src] = 0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({0.0, src});

  // forward adjacency is CSR; for reverse traversal scan all edges once into a
  // temporary adjacency (graphs here are small)
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const Edge& e : edges_) {
    const double w = over_time ? e.time : e.rho;
    if (reverse_edges)
      adj[e.to].push_back({e.from, w});
    else
      adj[e.from].push_back({e.to, w});
  }

  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (auto [u, w] : adj[v]) {
      if (d + w < dist[u]) {
        dist[u] = d + w;
        pq.push({dist[u], u});
      }
    }
  }
  return dist;
}

std::optional<Money> Network::cheapest_cost(NodeId from, NodeId to) const {
  const auto dist = dijkstra(from, /*over_time=*/false, /*reverse_edges=*/false);
  if (dist[to] == kInf) return std::nullopt;
  return dist[to];
}

std::vector<double> Network::cheapest_costs_from(NodeId src) const {
  return dijkstra(src, /*over_time=*/false, /*reverse_edges=*/false);
}

std::vector<double> Network::fastest_times_to(NodeId dst) const {
  return dijkstra(dst, /*over_time=*/true, /*reverse_edges=*/true);
}

std::vector<NodeId> Network::nodes_cut_off_from_interchange(Minutes T) const {
  const auto t = fastest_times_to(interchange_);
  std::vector<NodeId> cut;
  for (int v = 0; v < node_count(); ++v)
    if (v != interchange_ && t[v] > T) cut.push_back(v);
  return cut;
}

}  // namespace feeder
