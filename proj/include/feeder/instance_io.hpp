#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "feeder/network.hpp"
#include "feeder/pricing.hpp"
#include "feeder/problems.hpp"

namespace feeder {

/// A loaded problem instance: the network plus the window, value of time and
/// one of the two pricing modes (cost factor, or explicit per-node tables).
struct Instance {
  Network net;
  Minutes time_window = 0;       // T
  double value_of_time = 0;      // alpha
  std::optional<double> cost_factor;  // b
  std::optional<std::vector<Minutes>> alt_eta;  // explicit tables (per node)
  std::optional<std::vector<Money>> alt_zeta;

  bool cost_factor_mode() const { return cost_factor.has_value(); }
  /// Alternate transport for a feed-in route set on this instance's network.
  AltTransport feedin_alt(std::span<const Route> routes) const;
  /// Feed-out tables: the best alternate from the interchange rides the
  /// reverse graph; explicit tables are used as given.
  AltTransport feedout_alt(const Network& feedout_net, std::size_t ceiling) const;
};

/// Parses the instance document (JSON): nodes, interchange, edges
/// ({from,to,rho,time}), demand, supply, time_window, value_of_time, and
/// exactly one of cost_factor / alt_transport ({node: {eta, zeta}}).
/// Throws std::invalid_argument with a schema-level message on violations.
Instance parse_instance(const std::string& json_text);
Instance load_instance(const std::string& path);
/// Network portion only.
Network load_network(const std::string& json_text);

std::string instance_to_json(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

/// Comma-separated tables with a `# meta` preamble so each output file is
/// reproducible on its own.
class TableWriter {
 public:
  explicit TableWriter(std::ostream& os) : os_(os) {}
  void meta(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<std::string>& cells);

  static std::string num(double v);

 private:
  std::ostream& os_;
};

void write_route_table(std::ostream& os, const Network& net,
                       std::span<const Route> routes);
void write_price_table(std::ostream& os, const Network& net,
                       std::span<const Route> routes, const PriceTable& prices);
void write_solution(std::ostream& os, const Network& net, std::span<const Route> routes,
                    const PriceTable& prices, const std::vector<int>& selection,
                    const FlowSolution& sol);

}  // namespace feeder
