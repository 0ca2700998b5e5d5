#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "oaminlp/errors.hpp"

namespace oaminlp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One row `coeffs . z <= rhs`. Equality rows are not supported; callers
/// encode them as two inequalities.
struct LpRow {
  std::vector<double> coeffs;
  double rhs = 0.0;
};

/// min objective . z  subject to  rows,  lower <= z <= upper.
/// Either bound side may be infinite.
struct LpProblem {
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_vars() const { return objective.size(); }
  void validate() const;
};

struct LpConfig {
  double feas_tol = 1e-9;   // primal feasibility
  double opt_tol = 1e-9;    // reduced-cost optimality
  double pivot_tol = 1e-11; // entries at or below count as zero
  int max_pivots = 200000;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// On Optimal the solution satisfies, within tolerances: primal feasibility,
/// row_duals >= 0, complementary slackness, and strong duality
///   obj = -rhs.row_duals + sum_c bound_duals_c * (active bound of c).
/// Bound duals are signed: >= 0 at a lower bound, <= 0 at an upper bound,
/// ~0 at interior coordinates, so that objective + A^T row_duals = bound_duals.
struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> z;
  double obj = 0.0;
  std::vector<double> row_duals;
  std::vector<double> bound_duals;
  int iterations = 0;
  double phase1_infeasibility = 0.0;  // > feas_tol certifies Infeasible
  std::vector<double> ray;            // improving direction when Unbounded
};

/// Dense two-phase simplex with Bland's rule on the bounded-variable form.
/// Deterministic for identical input. Throws NumericalError on breakdown.
LpSolution solve_lp(const LpProblem& p, const LpConfig& cfg = {});

}  // namespace oaminlp
