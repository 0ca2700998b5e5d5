#include "oaminlp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oaminlp {

void LpProblem::validate() const {
  const std::size_t n = num_vars();
  if (lower.size() != n || upper.size() != n)
    throw DimensionError("lp: bound vectors do not match variable count");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]))
      throw InvalidProblem("lp: NaN bound");
    if (lower[j] > upper[j]) {
      std::ostringstream os;
      os << "lp: crossed bounds on variable " << j << " [" << lower[j] << ", "
         << upper[j] << "]";
      throw InvalidProblem(os.str());
    }
  }
  for (double c : objective)
    if (!std::isfinite(c)) throw InvalidProblem("lp: non-finite objective");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].coeffs.size() != n)
      throw DimensionError("lp: row width does not match variable count");
    if (!std::isfinite(rows[r].rhs))
      throw InvalidProblem("lp: non-finite row rhs");
    for (double c : rows[r].coeffs)
      if (!std::isfinite(c)) throw InvalidProblem("lp: non-finite row entry");
  }
}

namespace {

enum class VarState : char { Basic, AtLower, AtUpper, FreeAtZero };

class Simplex {
 public:
  Simplex(const LpProblem& p, const LpConfig& cfg) : p_(p), cfg_(cfg) {
    n_ = p.num_vars();
    m_ = p.rows.size();
  }

  LpSolution run() {
    setup();
    if (nart_ > 0) {
      phase_ = 1;
      const bool bounded = iterate();
      if (!bounded)
        throw NumericalError("simplex: phase 1 claims unboundedness");
      const double infeas = phase1_objective();
      if (infeas > cfg_.feas_tol) {
        LpSolution sol;
        sol.status = LpStatus::Infeasible;
        sol.phase1_infeasibility = infeas;
        sol.iterations = iters_;
        return sol;
      }
      retire_artificials();
    }
    phase_ = 2;
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = p_.objective[j];
    for (std::size_t j = n_; j < ncols_; ++j) cost_[j] = 0.0;
    const bool bounded = iterate();
    if (!bounded) return extract_unbounded();
    return extract_optimal();
  }

 private:
  double& T(std::size_t i, std::size_t j) { return tab_[i * ncols_ + j]; }
  double Tc(std::size_t i, std::size_t j) const {
    return tab_[i * ncols_ + j];
  }

  double nonbasic_value(std::size_t j) const {
    switch (state_[j]) {
      case VarState::AtLower:
        return lower_[j];
      case VarState::AtUpper:
        return upper_[j];
      default:
        return 0.0;
    }
  }

  void setup() {
    // Initial nonbasic placement of structural variables.
    lower_.assign(p_.lower.begin(), p_.lower.end());
    upper_.assign(p_.upper.begin(), p_.upper.end());
    state_.assign(n_, VarState::FreeAtZero);
    for (std::size_t j = 0; j < n_; ++j) {
      if (std::isfinite(lower_[j]))
        state_[j] = VarState::AtLower;
      else if (std::isfinite(upper_[j]))
        state_[j] = VarState::AtUpper;
    }

    // Row activities at the initial point decide which rows need an
    // artificial column.
    std::vector<double> act(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j)
        s += p_.rows[i].coeffs[j] * nonbasic_value(j);
      act[i] = p_.rows[i].rhs - s;  // value the slack would take
    }
    std::vector<std::size_t> art_rows;
    for (std::size_t i = 0; i < m_; ++i)
      if (act[i] < -cfg_.feas_tol) art_rows.push_back(i);
    nart_ = art_rows.size();
    ncols_ = n_ + m_ + nart_;

    // Slack bounds [0, inf); artificial bounds [0, inf).
    lower_.resize(ncols_, 0.0);
    upper_.resize(ncols_, kInf);
    state_.resize(ncols_, VarState::AtLower);
    is_art_.assign(ncols_, 0);
    cost_.assign(ncols_, 0.0);

    tab_.assign(m_ * ncols_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) T(i, j) = p_.rows[i].coeffs[j];
      T(i, n_ + i) = 1.0;
    }

    basis_.assign(m_, -1);
    row_of_.assign(ncols_, -1);
    v_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = static_cast<int>(n_ + i);
      v_[i] = act[i];
    }
    for (std::size_t k = 0; k < nart_; ++k) {
      const std::size_t i = art_rows[k];
      const std::size_t col = n_ + m_ + k;
      is_art_[col] = 1;
      cost_[col] = 1.0;  // phase-1 cost
      T(i, col) = -1.0;
      // Swap the artificial in for the slack; B^-1 flips the row sign.
      state_[n_ + i] = VarState::AtLower;
      for (std::size_t j = 0; j < ncols_; ++j) T(i, j) = -T(i, j);
      basis_[i] = static_cast<int>(col);
      v_[i] = -v_[i];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      state_[basis_[i]] = VarState::Basic;
      row_of_[basis_[i]] = static_cast<int>(i);
    }
    d_.assign(ncols_, 0.0);
    refresh_reduced_costs();
  }

  void refresh_reduced_costs() {
    for (std::size_t j = 0; j < ncols_; ++j) d_[j] = cost_[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < ncols_; ++j) d_[j] -= cb * Tc(i, j);
    }
  }

  void refresh_values() {
    std::vector<double> fresh(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      const double b = p_.rows[r].rhs;
      if (b == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) fresh[i] += Tc(i, n_ + r) * b;
    }
    for (std::size_t j = 0; j < ncols_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      const double x = nonbasic_value(j);
      if (x == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) fresh[i] -= Tc(i, j) * x;
    }
    v_ = fresh;
  }

  // Lowest-index eligible entering column (Bland). Returns false when the
  // current basis is optimal for the active costs.
  bool pick_entering(std::size_t& jin, int& dir) const {
    for (std::size_t j = 0; j < ncols_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      if (phase_ == 2 && is_art_[j]) continue;
      if (lower_[j] == upper_[j]) continue;  // fixed
      switch (state_[j]) {
        case VarState::AtLower:
          if (d_[j] < -cfg_.opt_tol) {
            jin = j;
            dir = +1;
            return true;
          }
          break;
        case VarState::AtUpper:
          if (d_[j] > cfg_.opt_tol) {
            jin = j;
            dir = -1;
            return true;
          }
          break;
        case VarState::FreeAtZero:
          if (d_[j] < -cfg_.opt_tol) {
            jin = j;
            dir = +1;
            return true;
          }
          if (d_[j] > cfg_.opt_tol) {
            jin = j;
            dir = -1;
            return true;
          }
          break;
        default:
          break;
      }
    }
    return false;
  }

  // Runs Bland pivots until optimality (true) or unboundedness (false).
  bool iterate() {
    int since_refresh = 0;
    for (;;) {
      std::size_t jin = 0;
      int dir = 0;
      if (!pick_entering(jin, dir)) {
        // Guard against reduced-cost drift before declaring optimality.
        refresh_reduced_costs();
        if (!pick_entering(jin, dir)) return true;
      }

      // Ratio test over basic variables, plus the entering variable's own
      // opposite bound.
      double step = kInf;
      int block_row = -1;
      bool block_at_lower = false;
      if (std::isfinite(lower_[jin]) && std::isfinite(upper_[jin]))
        step = upper_[jin] - lower_[jin];  // bound-to-bound flip
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = dir * Tc(i, jin);
        const int bvar = basis_[i];
        if (a > cfg_.pivot_tol) {
          if (!std::isfinite(lower_[bvar])) continue;
          const double limit = std::max(0.0, (v_[i] - lower_[bvar]) / a);
          if (limit < step ||
              (block_row >= 0 && limit == step && bvar < basis_[block_row])) {
            step = limit;
            block_row = static_cast<int>(i);
            block_at_lower = true;
          }
        } else if (a < -cfg_.pivot_tol) {
          if (!std::isfinite(upper_[bvar])) continue;
          const double limit = std::max(0.0, (upper_[bvar] - v_[i]) / (-a));
          if (limit < step ||
              (block_row >= 0 && limit == step && bvar < basis_[block_row])) {
            step = limit;
            block_row = static_cast<int>(i);
            block_at_lower = false;
          }
        }
      }

      if (!std::isfinite(step)) {
        if (phase_ == 1)
          throw NumericalError("simplex: unbounded phase-1 objective");
        unbounded_col_ = static_cast<int>(jin);
        unbounded_dir_ = dir;
        return false;
      }
      ++iters_;
      if (iters_ > cfg_.max_pivots)
        throw NumericalError("simplex: pivot limit exceeded");

      if (block_row < 0) {
        // Bound-to-bound flip; no basis change.
        for (std::size_t i = 0; i < m_; ++i)
          v_[i] -= dir * step * Tc(i, jin);
        state_[jin] = state_[jin] == VarState::AtLower ? VarState::AtUpper
                                                       : VarState::AtLower;
        continue;
      }

      const double delta = dir * step;
      do_pivot(static_cast<std::size_t>(block_row), jin, delta,
               block_at_lower);
      if (++since_refresh >= 64) {
        refresh_values();
        refresh_reduced_costs();
        since_refresh = 0;
      }
    }
  }

  // Makes `jin` basic in `row`; the entering variable moves by `delta` from
  // its current value, the leaving variable retires to a bound.
  void do_pivot(std::size_t row, std::size_t jin, double delta,
                bool leave_at_lower) {
    const double piv = Tc(row, jin);
    if (std::abs(piv) <= cfg_.pivot_tol) {
      std::ostringstream os;
      os << "simplex: pivot " << piv << " below tolerance " << cfg_.pivot_tol
         << " at iteration " << iters_ << " (entering column " << jin
         << ", leaving row " << row << ")";
      throw NumericalError(os.str());
    }
    const int jout = basis_[row];
    const double entering_value = nonbasic_value(jin) + delta;

    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      v_[i] -= Tc(i, jin) * delta;
    }

    // Eliminate the entering column.
    const double inv = 1.0 / piv;
    double* prow = &tab_[row * ncols_];
    for (std::size_t j = 0; j < ncols_; ++j) prow[j] *= inv;
    prow[jin] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = Tc(i, jin);
      if (f == 0.0) continue;
      double* irow = &tab_[i * ncols_];
      for (std::size_t j = 0; j < ncols_; ++j) irow[j] -= f * prow[j];
      irow[jin] = 0.0;
    }
    const double dj = d_[jin];
    if (dj != 0.0) {
      for (std::size_t j = 0; j < ncols_; ++j) d_[j] -= dj * prow[j];
      d_[jin] = 0.0;
    }

    basis_[row] = static_cast<int>(jin);
    row_of_[jin] = static_cast<int>(row);
    row_of_[jout] = -1;
    state_[jin] = VarState::Basic;
    state_[jout] = leave_at_lower ? VarState::AtLower : VarState::AtUpper;
    if (!std::isfinite(leave_at_lower ? lower_[jout] : upper_[jout]))
      state_[jout] = VarState::FreeAtZero;
    v_[row] = entering_value;
  }

  double phase1_objective() const {
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (is_art_[basis_[i]]) s += std::max(0.0, v_[i]);
    return s;
  }

  // After a successful phase 1, pivot remaining basic artificials out where
  // possible and freeze the rest at zero.
  void retire_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      const int bvar = basis_[i];
      if (!is_art_[bvar]) continue;
      int target = -1;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (is_art_[j] || state_[j] == VarState::Basic) continue;
        if (std::abs(Tc(i, j)) > cfg_.pivot_tol) {
          target = static_cast<int>(j);
          break;
        }
      }
      if (target >= 0) {
        const double delta = v_[i] / Tc(i, static_cast<std::size_t>(target));
        do_pivot(i, static_cast<std::size_t>(target), delta, true);
      } else {
        v_[i] = std::max(0.0, v_[i]);
      }
    }
    for (std::size_t j = 0; j < ncols_; ++j)
      if (is_art_[j]) upper_[j] = 0.0;
  }

  std::vector<double> structural_point() const {
    std::vector<double> z(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j)
      z[j] = state_[j] == VarState::Basic
                 ? v_[static_cast<std::size_t>(row_of_[j])]
                 : nonbasic_value(j);
    return z;
  }

  LpSolution extract_unbounded() {
    LpSolution sol;
    sol.status = LpStatus::Unbounded;
    sol.iterations = iters_;
    sol.z = structural_point();
    sol.obj = -kInf;
    sol.ray.assign(n_, 0.0);
    const std::size_t jin = static_cast<std::size_t>(unbounded_col_);
    if (jin < n_) sol.ray[jin] = unbounded_dir_;
    for (std::size_t i = 0; i < m_; ++i) {
      const int bvar = basis_[i];
      if (bvar >= 0 && static_cast<std::size_t>(bvar) < n_)
        sol.ray[bvar] = -unbounded_dir_ * Tc(i, jin);
    }
    return sol;
  }

  LpSolution extract_optimal() {
    refresh_values();
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.iterations = iters_;
    sol.z = structural_point();
    sol.obj = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sol.obj += p_.objective[j] * sol.z[j];

    sol.row_duals.assign(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      double y = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double cb = cost_[basis_[i]];
        if (cb != 0.0) y += cb * Tc(i, n_ + r);
      }
      double mu = -y;
      if (mu < -10.0 * cfg_.opt_tol) {
        std::ostringstream os;
        os << "simplex: negative row dual " << mu << " on row " << r;
        throw NumericalError(os.str());
      }
      sol.row_duals[r] = std::max(0.0, mu);
    }
    sol.bound_duals.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      double nu = p_.objective[j];
      for (std::size_t r = 0; r < m_; ++r)
        nu += sol.row_duals[r] * p_.rows[r].coeffs[j];
      sol.bound_duals[j] = nu;
    }

    validate_primal(sol);
    return sol;
  }

  void validate_primal(const LpSolution& sol) const {
    double resid = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j)
        s += p_.rows[r].coeffs[j] * sol.z[j];
      resid = std::max(resid, s - p_.rows[r].rhs);
    }
    for (std::size_t j = 0; j < n_; ++j) {
      if (std::isfinite(p_.lower[j]))
        resid = std::max(resid, p_.lower[j] - sol.z[j]);
      if (std::isfinite(p_.upper[j]))
        resid = std::max(resid, sol.z[j] - p_.upper[j]);
    }
    if (resid > cfg_.feas_tol) {
      std::ostringstream os;
      os << "simplex: optimal point violates feasibility by " << resid;
      throw NumericalError(os.str());
    }
  }

  const LpProblem& p_;
  LpConfig cfg_;
  std::size_t n_ = 0, m_ = 0, ncols_ = 0, nart_ = 0;
  int phase_ = 1;
  std::vector<double> lower_, upper_, cost_;
  std::vector<char> is_art_;
  std::vector<double> tab_;
  std::vector<double> v_;
  std::vector<double> d_;
  std::vector<int> basis_;
  std::vector<int> row_of_;
  std::vector<VarState> state_;
  int iters_ = 0;
  int unbounded_col_ = -1;
  int unbounded_dir_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& p, const LpConfig& cfg) {
  p.validate();
  Simplex s(p, cfg);
  return s.run();
}

}  // namespace oaminlp
