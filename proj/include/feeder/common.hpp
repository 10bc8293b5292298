#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace feeder {

using Money = double;
using Minutes = double;
using NodeId = int;

/// Thrown when route enumeration exceeds the configured route-count ceiling.
class RouteCeilingError : public std::runtime_error {
 public:
  RouteCeilingError(std::size_t ceiling)
      : std::runtime_error("route enumeration exceeded ceiling of " +
                           std::to_string(ceiling) + " routes"),
        ceiling_(ceiling) {}
  std::size_t ceiling() const { return ceiling_; }

 private:
  std::size_t ceiling_;
};

/// Thrown when an exact-arithmetic solve is asked for a problem above its size guard.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace feeder
