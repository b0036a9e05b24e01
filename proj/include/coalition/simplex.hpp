// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COALITION_SIMPLEX_HPP
#define COALITION_SIMPLEX_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "coalition/errors.hpp"

namespace coalition {

/// One packing column: unit coefficients on the rows in rows_mask, objective
/// coefficient `objective`. Both LPs solved in this library (configuration
/// LP and stabilizing-subsidy LP) are of this 0/1 shape.
struct packed_column {
  std::uint64_t rows_mask = 0;
  double objective = 0.0;
};

/// maximize c.x  s.t.  A x <= 1, x >= 0, over 0/1 columns.
/// `duals` are the optimal row prices (the minimizing covering solution).
struct packing_lp_result {
  double objective = 0.0;
  std::vector<double> duals;
  bool exact = false;  // solved with rational arithmetic
};

namespace detail {

/// Revised simplex with a dense basis inverse. Rows <= 64; the all-slack
/// basis is feasible because the right-hand side is the all-ones vector.
/// Dantzig pricing with a switch to Bland's rule against cycling; Real is
/// double or an exact rational type.
template <typename Real>
class packing_simplex {
 public:
  packing_simplex(int rows, const std::vector<packed_column>& cols, bool exact)
      : rows_(rows), cols_(cols), exact_(exact) {
    basis_.resize(rows_);
    binv_.assign(static_cast<std::size_t>(rows_) * rows_, Real(0));
    xb_.assign(rows_, Real(1));
    in_basis_.assign(n_cols() + rows_, 0);
    for (int i = 0; i < rows_; ++i) {
      basis_[i] = n_cols() + i;  // slack of row i
      in_basis_[basis_[i]] = 1;
      binv(i, i) = Real(1);
    }
  }

  void solve() {
    const long bland_after = exact_ ? 0 : 2000 + 64L * rows_;
    const long hard_cap = 200000;
    for (long iter = 0; iter < hard_cap; ++iter) {
      if (!exact_ && iter > 0 && iter % 256 == 0) refactor();
      compute_duals();
      int entering = iter >= bland_after ? price_bland() : price_dantzig();
      if (entering < 0) return;  // optimal
      std::vector<Real> dir = direction(entering);
      int leave = ratio_test(dir);
      if (leave < 0) throw invariant_error("packing LP unbounded");
      pivot(entering, dir, leave);
    }
    throw invariant_error("simplex iteration cap exceeded");
  }

  Real objective() const {
    Real obj(0);
    for (int i = 0; i < rows_; ++i) obj += cost(basis_[i]) * xb_[i];
    return obj;
  }

  const std::vector<Real>& duals() const { return y_; }

 private:
  int n_cols() const { return static_cast<int>(cols_.size()); }

  Real& binv(int i, int j) { return binv_[static_cast<std::size_t>(i) * rows_ + j]; }
  const Real& binv(int i, int j) const {
    return binv_[static_cast<std::size_t>(i) * rows_ + j];
  }

  Real cost(int var) const {
    return var < n_cols() ? Real(cols_[var].objective) : Real(0);
  }

  Real entering_tol() const { return exact_ ? Real(0) : Real(1e-9); }
  Real pivot_tol() const { return exact_ ? Real(0) : Real(1e-11); }

  void compute_duals() {
    y_.assign(rows_, Real(0));
    for (int i = 0; i < rows_; ++i) {
      Real cb = cost(basis_[i]);
      if (cb == Real(0)) continue;
      for (int j = 0; j < rows_; ++j) y_[j] += cb * binv(i, j);
    }
  }

  Real reduced_cost(int var) const {
    if (var < n_cols()) {
      Real d(cols_[var].objective);
      std::uint64_t m = cols_[var].rows_mask;
      while (m) {
        d -= y_[std::countr_zero(m)];
        m &= m - 1;
      }
      return d;
    }
    return -y_[var - n_cols()];
  }

  int price_dantzig() {
    int best = -1;
    Real best_d = entering_tol();
    for (int j = 0; j < n_cols() + rows_; ++j) {
      if (in_basis_[j]) continue;
      Real d = reduced_cost(j);
      if (d > best_d) {
        best_d = d;
        best = j;
      }
    }
    return best;
  }

  int price_bland() {
    for (int j = 0; j < n_cols() + rows_; ++j)
      if (!in_basis_[j] && reduced_cost(j) > entering_tol()) return j;
    return -1;
  }

  std::vector<Real> direction(int entering) const {
    std::vector<Real> dir(rows_, Real(0));
    if (entering < n_cols()) {
      std::uint64_t m = cols_[entering].rows_mask;
      while (m) {
        int col = std::countr_zero(m);
        for (int i = 0; i < rows_; ++i) dir[i] += binv(i, col);
        m &= m - 1;
      }
    } else {
      int col = entering - n_cols();
      for (int i = 0; i < rows_; ++i) dir[i] = binv(i, col);
    }
    return dir;
  }

  int ratio_test(const std::vector<Real>& dir) const {
    int leave = -1;
    Real best_ratio(0);
    for (int i = 0; i < rows_; ++i) {
      if (dir[i] <= pivot_tol()) continue;
      Real ratio = xb_[i] / dir[i];
      if (ratio < Real(0)) ratio = Real(0);  // degenerate drift guard
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis_[i] < basis_[leave])) {
        best_ratio = ratio;
        leave = i;
      }
    }
    return leave;
  }

  void pivot(int entering, const std::vector<Real>& dir, int leave) {
    Real piv = dir[leave];
    for (int j = 0; j < rows_; ++j) binv(leave, j) /= piv;
    xb_[leave] /= piv;
    for (int i = 0; i < rows_; ++i) {
      if (i == leave || dir[i] == Real(0)) continue;
      Real f = dir[i];
      for (int j = 0; j < rows_; ++j) binv(i, j) -= f * binv(leave, j);
      xb_[i] -= f * xb_[leave];
    }
    in_basis_[basis_[leave]] = 0;
    in_basis_[entering] = 1;
    basis_[leave] = entering;
  }

  /// Recomputes the basis inverse from scratch (Gauss-Jordan) to shed
  /// accumulated pivot error, then refreshes the basic values.
  void refactor() {
    std::vector<Real> mat(static_cast<std::size_t>(rows_) * 2 * rows_, Real(0));
    auto at = [&](int i, int j) -> Real& {
      return mat[static_cast<std::size_t>(i) * 2 * rows_ + j];
    };
    for (int i = 0; i < rows_; ++i) {
      int var = basis_[i];
      if (var < n_cols()) {
        std::uint64_t m = cols_[var].rows_mask;
        while (m) {
          at(std::countr_zero(m), i) = Real(1);
          m &= m - 1;
        }
      } else {
        at(var - n_cols(), i) = Real(1);
      }
      at(i, rows_ + i) = Real(1);
    }
    for (int col = 0; col < rows_; ++col) {
      int piv_row = -1;
      Real best(0);
      for (int i = col; i < rows_; ++i) {
        Real a = at(i, col) < Real(0) ? -at(i, col) : at(i, col);
        if (piv_row < 0 || a > best) {
          best = a;
          piv_row = i;
        }
      }
      if (best == Real(0)) throw invariant_error("singular basis during refactor");
      // Row swaps are elementary operations folded into the inverse.
      if (piv_row != col)
        for (int j = 0; j < 2 * rows_; ++j) std::swap(at(piv_row, j), at(col, j));
      Real p = at(col, col);
      for (int j = 0; j < 2 * rows_; ++j) at(col, j) /= p;
      for (int i = 0; i < rows_; ++i) {
        if (i == col || at(i, col) == Real(0)) continue;
        Real f = at(i, col);
        for (int j = 0; j < 2 * rows_; ++j) at(i, j) -= f * at(col, j);
      }
    }
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < rows_; ++j) binv(i, j) = at(i, rows_ + j);
    for (int i = 0; i < rows_; ++i) {
      Real v(0);
      for (int j = 0; j < rows_; ++j) v += binv(i, j);  // b is all ones
      xb_[i] = v;
    }
  }

  int rows_;
  const std::vector<packed_column>& cols_;
  bool exact_;
  std::vector<int> basis_;
  std::vector<char> in_basis_;
  std::vector<Real> binv_;
  std::vector<Real> xb_;
  std::vector<Real> y_;
};

inline bool duals_feasible(int rows, const std::vector<packed_column>& cols,
                           const std::vector<double>& y, double tol) {
  for (int i = 0; i < rows; ++i)
    if (y[i] < -tol) return false;
  for (const auto& c : cols) {
    double covered = 0.0;
    std::uint64_t m = c.rows_mask;
    while (m) {
      covered += y[std::countr_zero(m)];
      m &= m - 1;
    }
    if (covered < c.objective - tol) return false;
  }
  return true;
}

}  // namespace detail

/// Solves max c.x s.t. Ax <= 1, x >= 0 over 0/1 columns and returns the
/// objective plus optimal duals. Solves in floating point first; if the
/// resulting duals fail the exhaustive feasibility / strong-duality check
/// at lp_tolerance, re-solves with exact rational arithmetic.
inline packing_lp_result solve_packing_lp(int rows, const std::vector<packed_column>& cols) {
  if (rows < 1 || rows > 64) throw validation_error("packing LP supports 1..64 rows");
  for (const auto& c : cols)
    if (rows < 64 && (c.rows_mask >> rows) != 0)
      throw validation_error("packing column references a row out of range");

  auto finish = [&](std::vector<double> y, double obj, bool exact) {
    packing_lp_result res;
    res.duals = std::move(y);
    res.objective = obj;
    res.exact = exact;
    return res;
  };

  try {
    detail::packing_simplex<double> s(rows, cols, /*exact=*/false);
    s.solve();
    std::vector<double> y = s.duals();
    double obj = s.objective();
    double dual_obj = 0.0;
    for (double v : y) dual_obj += v;
    if (detail::duals_feasible(rows, cols, y, lp_tolerance) &&
        std::abs(dual_obj - obj) <= lp_tolerance * std::max(1.0, std::abs(obj)))
      return finish(std::move(y), obj, false);
  } catch (const invariant_error&) {
    // fall through to the exact solve
  }

  using rational = boost::multiprecision::cpp_rational;
  detail::packing_simplex<rational> s(rows, cols, /*exact=*/true);
  s.solve();
  std::vector<double> y(rows);
  const auto& yr = s.duals();
  for (int i = 0; i < rows; ++i) y[i] = yr[i].convert_to<double>();
  double obj = s.objective().convert_to<double>();
  if (!detail::duals_feasible(rows, cols, y, lp_tolerance))
    throw invariant_error("rational LP solve produced infeasible duals");
  return finish(std::move(y), obj, true);
}

}  // namespace coalition

#endif  // COALITION_SIMPLEX_HPP
