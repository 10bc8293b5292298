#include "feeder/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace feeder {

void LinearProgram::check_well_formed() const {
  if (static_cast<int>(objective.size()) != num_vars)
    throw std::invalid_argument("objective size mismatch");
  for (double c : objective)
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite objective coefficient");
  for (const Row& row : rows) {
    if (!std::isfinite(row.rhs)) throw std::invalid_argument("non-finite rhs");
    for (auto [j, a] : row.coeffs) {
      if (j < 0 || j >= num_vars) throw std::invalid_argument("row references bad variable");
      if (!std::isfinite(a)) throw std::invalid_argument("non-finite coefficient");
    }
  }
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

namespace {

template <class Scalar>
struct SimplexSettings {
  bool exact = false;      // exact comparisons, Bland throughout
  Scalar pivot_tol = 0;
  Scalar rc_tol = 0;
  long max_iterations = 0;
  long degeneracy_window = 0;  // non-improving pivots before switching to Bland
};

template <class Scalar>
struct SimplexOutput {
  LpStatus status = LpStatus::Optimal;
  std::vector<Scalar> x;
  Scalar objective = 0;
  std::vector<Scalar> dual;  // paper-signed, original row orientation
  long iterations = 0;
};

template <class Scalar>
Scalar abs_of(const Scalar& v) {
  return v < 0 ? Scalar(-v) : v;
}

// Dense two-phase tableau simplex shared by the floating and exact modes.
template <class Scalar>
class Simplex {
 public:
  using Rel = LinearProgram::Rel;

  Simplex(int num_vars, std::vector<Scalar> objective,
          std::vector<std::vector<std::pair<int, Scalar>>> row_coeffs,
          std::vector<Rel> rels, std::vector<Scalar> rhs, SimplexSettings<Scalar> cfg)
      : n_(num_vars), c_(std::move(objective)), cfg_(cfg) {
    m_ = static_cast<int>(row_coeffs.size());
    flip_.assign(m_, false);
    rel_ = std::move(rels);
    rhs_ = std::move(rhs);
    for (int i = 0; i < m_; ++i) {
      if (rhs_[i] < 0) {
        rhs_[i] = -rhs_[i];
        for (auto& [j, a] : row_coeffs[i]) a = -a;
        flip_[i] = true;
        // a flipped <= row becomes a >= row; equalities stay equalities
      }
    }

    // column layout: structural | slack/surplus | artificial
    slack_col_.assign(m_, -1);
    art_col_.assign(m_, -1);
    int col = n_;
    for (int i = 0; i < m_; ++i) {
      if (rel_[i] == Rel::LE) slack_col_[i] = col++;
    }
    for (int i = 0; i < m_; ++i) {
      if (rel_[i] == Rel::EQ || (rel_[i] == Rel::LE && flip_[i])) art_col_[i] = col++;
    }
    width_ = col;

    tab_.assign(static_cast<std::size_t>(m_) * width_, Scalar(0));
    basis_.assign(m_, -1);
    active_.assign(m_, true);
    for (int i = 0; i < m_; ++i) {
      Scalar* row = tab(i);
      for (auto [j, a] : row_coeffs[i]) row[j] += a;
      if (slack_col_[i] >= 0) row[slack_col_[i]] = flip_[i] ? Scalar(-1) : Scalar(1);
      if (art_col_[i] >= 0) row[art_col_[i]] = Scalar(1);
      basis_[i] = art_col_[i] >= 0 ? art_col_[i] : slack_col_[i];
    }
    z_.assign(width_, Scalar(0));
    is_artificial_.assign(width_, false);
    for (int i = 0; i < m_; ++i)
      if (art_col_[i] >= 0) is_artificial_[art_col_[i]] = true;
  }

  SimplexOutput<Scalar> run() {
    SimplexOutput<Scalar> out;
    const long max_iters =
        cfg_.max_iterations > 0 ? cfg_.max_iterations
                                : 10'000 + 200L * (m_ + width_);

    bool has_art = false;
    for (int i = 0; i < m_; ++i) has_art |= art_col_[i] >= 0;

    if (has_art) {
      load_phase1_objective();
      const LpStatus st = iterate(/*phase1=*/true, max_iters);
      if (st == LpStatus::IterationLimit) {
        out.status = st;
        out.iterations = iterations_;
        return out;
      }
      if (z_const_ < -phase1_tol()) {
        out.status = LpStatus::Infeasible;
        out.iterations = iterations_;
        return out;
      }
      expel_artificials();
    }

    load_phase2_objective();
    const LpStatus st = iterate(/*phase1=*/false, max_iters);
    out.status = st;
    out.iterations = iterations_;
    if (st != LpStatus::Optimal) return out;

    out.x.assign(n_, Scalar(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) out.x[basis_[i]] = rhs_[i];
    out.objective = z_const_;
    out.dual = extract_duals();
    return out;
  }

 private:
  Scalar* tab(int i) { return tab_.data() + static_cast<std::size_t>(i) * width_; }

  Scalar phase1_tol() const {
    if (cfg_.exact) return Scalar(0);
    Scalar norm(1);
    for (const Scalar& b : rhs_) norm += abs_of(b);
    return Scalar(1e-8) * norm;
  }

  void load_phase1_objective() {
    // cost -1 on artificials: reduced costs start as column sums over
    // artificial-basic rows
    std::fill(z_.begin(), z_.end(), Scalar(0));
    z_const_ = 0;
    for (int i = 0; i < m_; ++i) {
      if (art_col_[i] < 0) continue;
      const Scalar* row = tab(i);
      for (int j = 0; j < width_; ++j) z_[j] += row[j];
      z_const_ -= rhs_[i];
    }
    for (int i = 0; i < m_; ++i)
      if (art_col_[i] >= 0) z_[art_col_[i]] = Scalar(0);
  }

  void load_phase2_objective() {
    std::fill(z_.begin(), z_.end(), Scalar(0));
    z_const_ = 0;
    for (int j = 0; j < n_; ++j) z_[j] = c_[j];
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[i];
      if (b >= n_) continue;  // slack/surplus/artificial cost is zero
      const Scalar cb = c_[b];
      if (cb == 0) continue;
      const Scalar* row = tab(i);
      for (int j = 0; j < width_; ++j) z_[j] -= cb * row[j];
      z_const_ += cb * rhs_[i];
    }
  }

  bool col_enterable(int j) const {
    if (is_artificial_[static_cast<std::size_t>(j)]) return false;
    return true;
  }

  LpStatus iterate(bool phase1, long max_iters) {
    std::vector<bool> banned(width_, false);
    bool bland = cfg_.exact;
    long stall = 0;
    Scalar last_obj = z_const_;

    while (true) {
      if (iterations_ >= max_iters) return LpStatus::IterationLimit;

      int enter = -1;
      if (bland) {
        for (int j = 0; j < width_; ++j) {
          if (banned[j] || !col_enterable(j)) continue;
          if (z_[j] > cfg_.rc_tol) {
            enter = j;
            break;
          }
        }
      } else {
        Scalar best = cfg_.rc_tol;
        for (int j = 0; j < width_; ++j) {
          if (banned[j] || !col_enterable(j)) continue;
          if (z_[j] > best) {
            best = z_[j];
            enter = j;
          }
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      // ratio test; ties resolved toward the smallest basis column index
      int leave = -1;
      Scalar best_ratio(0);
      for (int i = 0; i < m_; ++i) {
        if (!active_[i]) continue;
        const Scalar a = tab(i)[enter];
        if (a <= cfg_.pivot_tol) continue;
        // round-off can leave a basic value a hair below zero; treat it as a
        // degenerate (zero-ratio) row rather than letting the ratio go negative
        const Scalar num = (!cfg_.exact && rhs_[i] < 0) ? Scalar(0) : rhs_[i];
        const Scalar ratio = num / a;
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) {
        if (phase1) {
          // bounded phase-1 objective: a missing ratio row is tolerance
          // noise; retire the column
          banned[enter] = true;
          continue;
        }
        return LpStatus::Unbounded;
      }

      pivot(leave, enter);
      ++iterations_;

      if (!bland && !cfg_.exact) {
        const Scalar improve = z_const_ - last_obj;
        if (improve > Scalar(1e-12) * (Scalar(1) + abs_of(z_const_))) {
          stall = 0;
          last_obj = z_const_;
        } else if (++stall > degeneracy_window()) {
          bland = true;  // anti-cycling fallback
        }
      }
    }
  }

  long degeneracy_window() const {
    return cfg_.degeneracy_window > 0 ? cfg_.degeneracy_window : 200 + (m_ + width_) / 4;
  }

  void pivot(int row, int col) {
    Scalar* pr = tab(row);
    const Scalar p = pr[col];
    if (p != 1) {
      for (int j = 0; j < width_; ++j) pr[j] /= p;
      rhs_[row] /= p;
    }
    pr[col] = Scalar(1);  // kill residual round-off on the pivot itself
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      Scalar* r = tab(i);
      const Scalar f = r[col];
      if (f == 0) continue;
      for (int j = 0; j < width_; ++j) r[j] -= f * pr[j];
      r[col] = Scalar(0);
      rhs_[i] -= f * rhs_[row];
      if (!cfg_.exact && rhs_[i] < 0 && rhs_[i] > Scalar(-1e-11)) rhs_[i] = Scalar(0);
    }
    {
      const Scalar f = z_[col];
      if (f != 0) {
        for (int j = 0; j < width_; ++j) z_[j] -= f * pr[j];
        z_[col] = Scalar(0);
        z_const_ += f * rhs_[row];
      }
    }
    basis_[row] = col;
  }

  void expel_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (!active_[i] || art_col_[i] < 0 || basis_[i] != art_col_[i]) continue;
      // basic artificial at level zero: pivot it out on any usable column
      int col = -1;
      const Scalar* row = tab(i);
      for (int j = 0; j < width_ && col < 0; ++j)
        if (!is_artificial_[j] && abs_of(row[j]) > cfg_.pivot_tol) col = j;
      if (col >= 0)
        pivot(i, col);
      else
        active_[i] = false;  // redundant row
    }
  }

  std::vector<Scalar> extract_duals() {
    // reduced cost of a row's own unit column recovers its multiplier
    std::vector<Scalar> mu(m_, Scalar(0));
    for (int i = 0; i < m_; ++i) {
      Scalar y(0);
      if (rel_[i] == Rel::LE && !flip_[i])
        y = -z_[slack_col_[i]];
      else if (rel_[i] == Rel::LE && flip_[i])
        y = z_[slack_col_[i]];  // surplus column carries -1
      else
        y = -z_[art_col_[i]];
      if (flip_[i]) y = -y;  // back to the original row orientation
      mu[i] = -y;            // Lagrangian sign: <= rows end up <= 0
    }
    return mu;
  }

  int n_ = 0;
  int m_ = 0;
  int width_ = 0;
  std::vector<Scalar> c_;
  SimplexSettings<Scalar> cfg_;
  std::vector<Scalar> tab_;
  std::vector<Scalar> z_;
  Scalar z_const_ = Scalar(0);
  std::vector<Scalar> rhs_;
  std::vector<Rel> rel_;
  std::vector<bool> flip_;
  std::vector<int> slack_col_;
  std::vector<int> art_col_;
  std::vector<int> basis_;
  std::vector<bool> active_;
  std::vector<bool> is_artificial_;
  long iterations_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const LpTolerances& tol) {
  lp.check_well_formed();

  std::vector<std::vector<std::pair<int, double>>> coeffs(lp.rows.size());
  std::vector<LinearProgram::Rel> rels(lp.rows.size());
  std::vector<double> rhs(lp.rows.size());
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    coeffs[i] = lp.rows[i].coeffs;
    rels[i] = lp.rows[i].rel;
    rhs[i] = lp.rows[i].rhs;
  }
  SimplexSettings<double> cfg;
  cfg.exact = false;
  cfg.pivot_tol = tol.pivot;
  cfg.rc_tol = tol.reduced_cost;
  cfg.max_iterations = tol.max_iterations;
  Simplex<double> sx(lp.num_vars, lp.objective, std::move(coeffs), std::move(rels),
                     std::move(rhs), cfg);
  auto out = sx.run();

  LpSolution sol;
  sol.status = out.status;
  sol.iterations = out.iterations;
  if (out.status != LpStatus::Optimal) return sol;
  sol.x = std::move(out.x);
  sol.objective = out.objective;
  sol.dual = std::move(out.dual);

  // certification against the original data
  const double scale = 1.0 + std::abs(sol.objective);
  double primal = 0, comp = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    double ax = 0;
    for (auto [j, a] : lp.rows[i].coeffs) ax += a * sol.x[j];
    const double slack = ax - lp.rows[i].rhs;
    if (lp.rows[i].rel == LinearProgram::Rel::LE)
      primal = std::max(primal, slack);
    else
      primal = std::max(primal, std::abs(slack));
    comp = std::max(comp, std::abs(sol.dual[i] * slack));
  }
  for (double xj : sol.x) primal = std::max(primal, -xj);

  // stationarity: c_j + sum_i mu_i a_ij <= 0, equal where x_j > 0
  std::vector<double> rc(lp.objective);
  for (std::size_t i = 0; i < lp.rows.size(); ++i)
    for (auto [j, a] : lp.rows[i].coeffs) rc[j] += sol.dual[i] * a;
  double dual_res = 0;
  for (int j = 0; j < lp.num_vars; ++j) {
    dual_res = std::max(dual_res, rc[j]);
    comp = std::max(comp, std::abs(sol.x[j] * rc[j]));
  }
  double b_dot_mu = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) b_dot_mu += lp.rows[i].rhs * sol.dual[i];
  double c_dot_x = 0;
  for (int j = 0; j < lp.num_vars; ++j) c_dot_x += lp.objective[j] * sol.x[j];

  sol.primal_residual = primal / scale;
  sol.dual_residual = dual_res / scale;
  sol.complementarity = comp / scale;
  sol.duality_gap = std::abs(c_dot_x + b_dot_mu) / scale;
  sol.certified = sol.primal_residual <= tol.feas && sol.dual_residual <= tol.feas &&
                  sol.duality_gap <= tol.gap && sol.complementarity <= tol.gap;
  return sol;
}

Rational rational_from_double(double v) {
  if (v == 0) return Rational(0);
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  int exp = 0;
  const double m = std::frexp(v, &exp);  // v = m * 2^exp, |m| in [0.5, 1)
  const auto mant = static_cast<long long>(std::ldexp(m, 53));
  exp -= 53;
  Rational r(mant);
  boost::multiprecision::cpp_int two(1);
  if (exp >= 0) {
    two <<= exp;
    r *= Rational(two);
  } else {
    two <<= -exp;
    r /= Rational(two);
  }
  return r;
}

namespace {

ExactSolution run_exact(int num_vars, std::vector<Rational> objective,
                        std::vector<std::vector<std::pair<int, Rational>>> coeffs,
                        std::vector<LinearProgram::Rel> rels, std::vector<Rational> rhs,
                        const ExactLimits& limits) {
  if (num_vars > limits.max_vars)
    throw SizeGuardError("exact solve refused: " + std::to_string(num_vars) +
                         " variables exceed the guard of " + std::to_string(limits.max_vars));
  if (static_cast<int>(coeffs.size()) > limits.max_rows)
    throw SizeGuardError("exact solve refused: too many rows");

  SimplexSettings<Rational> cfg;
  cfg.exact = true;
  cfg.pivot_tol = 0;
  cfg.rc_tol = 0;
  cfg.max_iterations = limits.max_iterations;
  Simplex<Rational> sx(num_vars, std::move(objective), std::move(coeffs), std::move(rels),
                       std::move(rhs), cfg);
  auto out = sx.run();
  ExactSolution sol;
  sol.status = out.status;
  sol.iterations = out.iterations;
  if (out.status == LpStatus::Optimal) {
    sol.x = std::move(out.x);
    sol.objective = out.objective;
  }
  return sol;
}

}  // namespace

ExactSolution solve_exact(const LinearProgram& lp, const ExactLimits& limits) {
  lp.check_well_formed();
  std::vector<Rational> obj(lp.num_vars);
  for (int j = 0; j < lp.num_vars; ++j) obj[j] = rational_from_double(lp.objective[j]);
  std::vector<std::vector<std::pair<int, Rational>>> coeffs(lp.rows.size());
  std::vector<LinearProgram::Rel> rels(lp.rows.size());
  std::vector<Rational> rhs(lp.rows.size());
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    rels[i] = lp.rows[i].rel;
    rhs[i] = rational_from_double(lp.rows[i].rhs);
    coeffs[i].reserve(lp.rows[i].coeffs.size());
    for (auto [j, a] : lp.rows[i].coeffs) coeffs[i].push_back({j, rational_from_double(a)});
  }
  return run_exact(lp.num_vars, std::move(obj), std::move(coeffs), std::move(rels),
                   std::move(rhs), limits);
}

ExactSolution solve_exact(const ExactLinearProgram& lp, const ExactLimits& limits) {
  std::vector<std::vector<std::pair<int, Rational>>> coeffs(lp.rows.size());
  std::vector<LinearProgram::Rel> rels(lp.rows.size());
  std::vector<Rational> rhs(lp.rows.size());
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    coeffs[i] = lp.rows[i].coeffs;
    rels[i] = lp.rows[i].rel;
    rhs[i] = lp.rows[i].rhs;
  }
  return run_exact(lp.num_vars, lp.objective, std::move(coeffs), std::move(rels),
                   std::move(rhs), limits);
}

void write_lp_format(const LinearProgram& lp, std::ostream& os) {
  auto num = [](double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
  };
  os << "Maximize\n obj:";
  bool first = true;
  for (int j = 0; j < lp.num_vars; ++j) {
    if (lp.objective[j] == 0) continue;
    os << (lp.objective[j] >= 0 && !first ? " +" : " ") << num(lp.objective[j]) << " x" << j;
    first = false;
  }
  if (first) os << " 0 x0";
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    os << " c" << i << ":";
    bool f = true;
    for (auto [j, a] : lp.rows[i].coeffs) {
      if (a == 0) continue;
      os << (a >= 0 && !f ? " +" : " ") << num(a) << " x" << j;
      f = false;
    }
    if (f) os << " 0 x0";
    os << (lp.rows[i].rel == LinearProgram::Rel::LE ? " <= " : " = ") << num(lp.rows[i].rhs)
       << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < lp.num_vars; ++j) os << " 0 <= x" << j << "\n";
  os << "End\n";
}

}  // namespace feeder
