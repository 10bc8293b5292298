#include "feeder/instance_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace feeder {

using nlohmann::json;

AltTransport Instance::feedin_alt(std::span<const Route> routes) const {
  if (cost_factor_mode())
    return best_alt_transport(net, routes, value_of_time, *cost_factor);
  return alt_transport_from_tables(net, value_of_time, *alt_eta, *alt_zeta);
}

AltTransport Instance::feedout_alt(const Network& feedout_net, std::size_t ceiling) const {
  if (!cost_factor_mode())
    return alt_transport_from_tables(feedout_net, value_of_time, *alt_eta, *alt_zeta);
  const Network rev = feedout_net.reversed();
  const auto rev_routes = enumerate_feedin_routes(rev, time_window, ceiling);
  return best_alt_transport(rev, rev_routes, value_of_time, *cost_factor);
}

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("instance schema: " + what);
}

double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) fail(std::string(key) + " must be a number");
  return j[key].get<double>();
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("document must be an object");
  for (const char* key : {"nodes", "interchange", "edges", "demand", "supply",
                          "time_window", "value_of_time"})
    if (!j.contains(key)) fail(std::string("missing field '") + key + "'");

  if (!j["nodes"].is_array()) fail("nodes must be a list of strings");
  std::vector<std::string> names;
  for (const auto& v : j["nodes"]) {
    if (!v.is_string()) fail("nodes must be a list of strings");
    names.push_back(v.get<std::string>());
  }
  const std::string interchange = j["interchange"].get<std::string>();

  auto index_of = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    fail("unknown node '" + name + "'");
  };

  std::vector<Edge> edges;
  if (!j["edges"].is_array()) fail("edges must be a list");
  for (const auto& e : j["edges"]) {
    if (!e.is_object() || !e.contains("from") || !e.contains("to"))
      fail("each edge needs from/to/rho/time");
    edges.push_back({index_of(e["from"].get<std::string>()),
                     index_of(e["to"].get<std::string>()), number_field(e, "rho"),
                     number_field(e, "time")});
  }

  auto node_map = [&](const char* key) {
    std::vector<double> out(names.size(), 0.0);
    if (!j[key].is_object()) fail(std::string(key) + " must be a map node->number");
    for (const auto& [name, v] : j[key].items()) {
      if (!v.is_number()) fail(std::string(key) + " values must be numbers");
      out[index_of(name)] = v.get<double>();
    }
    return out;
  };

  Instance inst{Network(names, interchange, std::move(edges), node_map("demand"),
                        node_map("supply")),
                number_field(j, "time_window"), number_field(j, "value_of_time"),
                std::nullopt, std::nullopt, std::nullopt};
  if (!(inst.time_window > 0)) fail("time_window must be positive");
  if (inst.value_of_time < 0) fail("value_of_time must be nonnegative");

  const bool has_b = j.contains("cost_factor");
  const bool has_alt = j.contains("alt_transport");
  if (has_b == has_alt) fail("exactly one of cost_factor / alt_transport is required");
  if (has_b) {
    inst.cost_factor = number_field(j, "cost_factor");
    if (*inst.cost_factor < 0) fail("cost_factor must be nonnegative");
  } else {
    std::vector<Minutes> eta(names.size(), 0.0);
    std::vector<Money> zeta(names.size(), 0.0);
    if (!j["alt_transport"].is_object()) fail("alt_transport must be a map");
    for (const auto& [name, v] : j["alt_transport"].items()) {
      const int l = index_of(name);
      eta[l] = number_field(v, "eta");
      zeta[l] = number_field(v, "zeta");
      if (inst.value_of_time * eta[l] + zeta[l] < 0) fail("perceived cost must be >= 0");
    }
    inst.alt_eta = std::move(eta);
    inst.alt_zeta = std::move(zeta);
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

Network load_network(const std::string& json_text) {
  return parse_instance(json_text).net;
}

std::string instance_to_json(const Instance& inst) {
  json j;
  const Network& net = inst.net;
  for (int v = 0; v < net.node_count(); ++v) j["nodes"].push_back(net.node_name(v));
  j["interchange"] = net.node_name(net.interchange());
  j["edges"] = json::array();
  for (const Edge& e : net.edges())
    j["edges"].push_back({{"from", net.node_name(e.from)},
                          {"to", net.node_name(e.to)},
                          {"rho", e.rho},
                          {"time", e.time}});
  for (int v = 0; v < net.node_count(); ++v) {
    j["demand"][net.node_name(v)] = net.demand(v);
    j["supply"][net.node_name(v)] = net.supply(v);
  }
  j["time_window"] = inst.time_window;
  j["value_of_time"] = inst.value_of_time;
  if (inst.cost_factor) {
    j["cost_factor"] = *inst.cost_factor;
  } else {
    for (int v = 0; v < net.node_count(); ++v)
      j["alt_transport"][net.node_name(v)] = {{"eta", (*inst.alt_eta)[v]},
                                              {"zeta", (*inst.alt_zeta)[v]}};
  }
  return j.dump(2);
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << instance_to_json(inst) << "\n";
}

void TableWriter::meta(const std::string& key, const std::string& value) {
  os_ << "# meta " << key << "=" << value << "\n";
}

void TableWriter::header(const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
  os_ << "\n";
}

void TableWriter::row(const std::vector<std::string>& cells) { header(cells); }

std::string TableWriter::num(double v) {
  std::ostringstream ss;
  ss.precision(15);
  ss << v;
  return ss.str();
}

void write_route_table(std::ostream& os, const Network& net,
                       std::span<const Route> routes) {
  TableWriter w(os);
  w.meta("records", std::to_string(routes.size()));
  w.header({"id", "origin", "destination", "theta", "time", "cost", "leg_costs", "nodes"});
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const Route& route = routes[r];
    std::string leg_costs, nodes;
    for (int i = 1; i <= route.theta(); ++i) {
      if (i > 1) leg_costs += ';';
      leg_costs += TableWriter::num(route.leg(i).cost);
    }
    for (std::size_t p = 0; p < route.nodes().size(); ++p) {
      if (p) nodes += ';';
      nodes += net.node_name(route.nodes()[p]);
    }
    w.row({std::to_string(r), net.node_name(route.origin()),
           net.node_name(route.destination()), std::to_string(route.theta()),
           TableWriter::num(route.total_time()), TableWriter::num(route.total_cost()),
           leg_costs, nodes});
  }
}

void write_price_table(std::ostream& os, const Network& net,
                       std::span<const Route> routes, const PriceTable& prices) {
  TableWriter w(os);
  w.meta("records", std::to_string(prices.tuples.size()));
  w.meta("op_cost", TableWriter::num(prices.op_cost));
  w.header({"route", "leg", "node", "service_time", "price", "revenue"});
  for (std::size_t t = 0; t < prices.tuples.size(); ++t) {
    const ServiceTuple& tup = prices.tuples[t];
    w.row({std::to_string(tup.route), std::to_string(tup.leg), net.node_name(tup.node),
           TableWriter::num(tup.time), TableWriter::num(prices.price[t]),
           TableWriter::num(prices.revenue[t])});
  }
  (void)routes;
}

void write_solution(std::ostream& os, const Network& net, std::span<const Route> routes,
                    const PriceTable& prices, const std::vector<int>& selection,
                    const FlowSolution& sol) {
  TableWriter w(os);
  w.meta("status", to_string(sol.status));
  w.meta("objective", TableWriter::num(sol.objective));
  w.meta("iterations", std::to_string(sol.lp.iterations));
  w.meta("primal_residual", TableWriter::num(sol.lp.primal_residual));
  w.meta("dual_residual", TableWriter::num(sol.lp.dual_residual));
  w.meta("duality_gap", TableWriter::num(sol.lp.duality_gap));
  w.meta("certified", sol.lp.certified ? "1" : "0");
  w.header({"kind", "route", "leg", "node", "value"});
  if (sol.status != LpStatus::Optimal) return;
  for (std::size_t k = 0; k < selection.size(); ++k) {
    if (sol.route_flow[k] == 0) continue;
    w.row({"flow", std::to_string(selection[k]), "", "",
           TableWriter::num(sol.route_flow[k])});
  }
  for (std::size_t t = 0; t < prices.tuples.size(); ++t) {
    if (sol.alloc[t] == 0) continue;
    const ServiceTuple& tup = prices.tuples[t];
    w.row({"alloc", std::to_string(tup.route), std::to_string(tup.leg),
           net.node_name(tup.node), TableWriter::num(sol.alloc[t])});
  }
  for (NodeId l = 0; l < net.node_count(); ++l) {
    if (sol.node_total[l] != 0)
      w.row({"node_total", "", "", net.node_name(l), TableWriter::num(sol.node_total[l])});
    if (!sol.supply.empty() && sol.supply[l] != 0)
      w.row({"supply", "", "", net.node_name(l), TableWriter::num(sol.supply[l])});
  }
  (void)routes;
}

}  // namespace feeder
