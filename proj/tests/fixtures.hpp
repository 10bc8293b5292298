#pragma once

#include <string>

#include "feeder/instance_io.hpp"

namespace feeder::test {

// Two-node fixture: A <-> I, both edges (rho 2, time 5); demand 10 at A,
// supply 10 at A; T = 10, alpha = 1, cost factor 2.5. Hand-worked values:
// g_A = 10, the two feed-in routes are A-I (w = 2) and I-A-I (w = 0),
// R- = {A-I}, feed-in optimum 20, J_max = 20, b_A* = 2.5.
inline const char* kG1 = R"({
  "nodes": ["A", "I"],
  "interchange": "I",
  "edges": [
    {"from": "A", "to": "I", "rho": 2, "time": 5},
    {"from": "I", "to": "A", "rho": 2, "time": 5}
  ],
  "demand": {"A": 10},
  "supply": {"A": 10},
  "time_window": 10,
  "value_of_time": 1,
  "cost_factor": 2.5
})";

inline Instance g1() { return parse_instance(kG1); }

inline Instance g1_with(double T, double b) {
  Instance inst = g1();
  inst.time_window = T;
  inst.cost_factor = b;
  return inst;
}

// Three nodes around the interchange with a 2-cycle between A and B; rich
// enough for multi-leg routes, cycles inside legs, and reversal tests.
inline const char* kTriangle = R"({
  "nodes": ["A", "B", "I"],
  "interchange": "I",
  "edges": [
    {"from": "A", "to": "I", "rho": 2, "time": 2},
    {"from": "I", "to": "A", "rho": 2, "time": 2},
    {"from": "B", "to": "I", "rho": 1, "time": 3},
    {"from": "I", "to": "B", "rho": 1, "time": 3},
    {"from": "A", "to": "B", "rho": 1, "time": 1},
    {"from": "B", "to": "A", "rho": 1, "time": 1}
  ],
  "demand": {"A": 8, "B": 12},
  "supply": {"A": 6, "B": 4},
  "time_window": 8,
  "value_of_time": 0.5,
  "cost_factor": 3
})";

inline Instance triangle() { return parse_instance(kTriangle); }

}  // namespace feeder::test
