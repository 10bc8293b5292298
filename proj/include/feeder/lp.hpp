#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "feeder/common.hpp"

namespace feeder {

/// Maximize c.x subject to sparse rows a.x (<=|=) b, x >= 0.
struct LinearProgram {
  enum class Rel { LE, EQ };
  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    Rel rel = Rel::LE;
    double rhs = 0;
  };

  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;

  /// Throws on non-finite coefficients or out-of-range variable indices.
  void check_well_formed() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus s);

struct LpTolerances {
  double pivot = 1e-9;          // minimum usable pivot magnitude
  double reduced_cost = 1e-9;   // optimality threshold on reduced costs
  double feas = 1e-8;           // certification scale for primal residuals
  double gap = 1e-8;            // certification scale for the duality gap
  long max_iterations = 0;      // 0: derived from problem size
};

/// Result of a floating solve. Duals follow the multiplier sign convention of
/// a maximization Lagrangian L = c.x + sum_i dual_i (a_i.x - b_i): duals of
/// <= rows are <= 0 and c.x* + b.dual* = 0 at optimality. Residuals are
/// reported relative to scale (1 + |objective|); `certified` means primal
/// feasibility, stationarity, complementarity and the duality gap all sit
/// within their tolerances.
struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> x;
  double objective = 0;
  std::vector<double> dual;
  long iterations = 0;
  double primal_residual = 0;
  double dual_residual = 0;
  double complementarity = 0;
  double duality_gap = 0;
  bool certified = false;
};

/// Two-phase primal simplex on a dense tableau. Dantzig pricing with a
/// degeneracy watchdog that switches to Bland's rule, which guarantees
/// termination. Deterministic for identical input and tolerances.
LpSolution solve(const LinearProgram& lp, const LpTolerances& tol = {});

using Rational = boost::multiprecision::cpp_rational;

/// Exact binary expansion of a double (no rounding).
Rational rational_from_double(double v);

struct ExactLimits {
  int max_vars = 2000;
  int max_rows = 2000;
  long max_iterations = 2'000'000;
};

struct ExactSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<Rational> x;
  Rational objective = 0;
  long iterations = 0;
};

/// Rational-coefficient LP for oracle use.
struct ExactLinearProgram {
  struct Row {
    std::vector<std::pair<int, Rational>> coeffs;
    LinearProgram::Rel rel = LinearProgram::Rel::LE;
    Rational rhs = 0;
  };
  int num_vars = 0;
  std::vector<Rational> objective;
  std::vector<Row> rows;
};

/// Exact rational simplex (Bland's rule throughout). Throws SizeGuardError
/// above the configured limits.
ExactSolution solve_exact(const LinearProgram& lp, const ExactLimits& limits = {});
ExactSolution solve_exact(const ExactLinearProgram& lp, const ExactLimits& limits = {});

/// Writes the problem in LP interchange format for cross-validation with
/// third-party solvers.
void write_lp_format(const LinearProgram& lp, std::ostream& os);

}  // namespace feeder
