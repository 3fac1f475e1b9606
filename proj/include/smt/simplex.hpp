#pragma once

// Dense two-phase tableau simplex with Bland's rule.
//
//     maximize c.x  subject to  A x = b,  x >= 0.
//
// Phase 1 starts from one artificial per row. Artificial columns are kept
// through phase 2 (barred from entering) so that B^-1 can be read off them,
// which yields the duals y = c_B B^-1. Rows that stay redundant after phase 1
// keep their artificial basic at level zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "smt/scalar.hpp"

namespace smt {

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

template <Scalar T>
struct StandardLp {
  std::vector<std::vector<T>> a;  // m rows of length n
  std::vector<T> b;
  std::vector<T> c;

  std::size_t rows() const { return a.size(); }
  std::size_t cols() const { return c.size(); }
};

template <Scalar T>
struct SimplexResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<T> x;
  std::vector<T> y;  // one dual per equality row, original row signs
  T value{};
  std::vector<std::size_t> basis;  // basic column per row; >= n means artificial
  bool unique_hint = false;        // no nonbasic column with zero reduced cost
  std::size_t pivots = 0;
};

namespace detail {

template <Scalar T>
T pivot_tolerance() {
  if constexpr (ScalarTraits<T>::exact) {
    return T(0);
  } else {
    return T(1e-11);
  }
}

template <Scalar T>
class Tableau {
 public:
  Tableau(const StandardLp<T>& lp) : m_(lp.rows()), n_(lp.cols()), width_(n_ + m_ + 1) {
    data_.assign(m_ * width_, T(0));
    sign_.assign(m_, 1);
    basis_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      sign_[r] = lp.b[r] < T(0) ? -1 : 1;
      for (std::size_t j = 0; j < n_; ++j) at(r, j) = sign_[r] < 0 ? T(-lp.a[r][j]) : lp.a[r][j];
      at(r, n_ + r) = T(1);
      rhs(r) = sign_[r] < 0 ? T(-lp.b[r]) : lp.b[r];
      basis_[r] = n_ + r;
    }
  }

  T& at(std::size_t r, std::size_t j) { return data_[r * width_ + j]; }
  const T& at(std::size_t r, std::size_t j) const { return data_[r * width_ + j]; }
  T& rhs(std::size_t r) { return data_[r * width_ + width_ - 1]; }
  const T& rhs(std::size_t r) const { return data_[r * width_ + width_ - 1]; }

  void pivot(std::size_t pr, std::size_t pc) {
    T p = at(pr, pc);
    for (std::size_t j = 0; j < width_; ++j) at(pr, j) /= p;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == pr) continue;
      T factor = at(r, pc);
      if (factor == T(0)) continue;
      for (std::size_t j = 0; j < width_; ++j) {
        if (at(pr, j) != T(0)) at(r, j) -= factor * at(pr, j);
      }
      at(r, pc) = T(0);
    }
    basis_[pr] = pc;
    ++pivots_;
  }

  /// Reduced cost c_j - c_B B^-1 A_j for a full cost vector over n + m columns.
  T reduced_cost(const std::vector<T>& cost, std::size_t j) const {
    T d = cost[j];
    for (std::size_t r = 0; r < m_; ++r) {
      if (at(r, j) != T(0)) d -= cost[basis_[r]] * at(r, j);
    }
    return d;
  }

  /// Runs Bland's rule on columns [0, allowed). Returns false when unbounded.
  bool optimize(const std::vector<T>& cost, std::size_t allowed) {
    const T tol = pivot_tolerance<T>();
    T scale(1);
    for (const auto& v : cost) scale = std::max(scale, abs_value(v));
    const T cost_tol = tol * scale;
    while (true) {
      std::size_t entering = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (is_basic(j)) continue;
        if (reduced_cost(cost, j) > cost_tol) {
          entering = j;
          break;
        }
      }
      if (entering == allowed) return true;

      std::size_t leaving = m_;
      T best_ratio{};
      for (std::size_t r = 0; r < m_; ++r) {
        if (at(r, entering) <= tol) continue;
        T ratio = rhs(r) / at(r, entering);
        if (leaving == m_ || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (leaving == m_) return false;
      pivot(leaving, entering);
      // Guard against round-off drifting a basic level below zero.
      if constexpr (!ScalarTraits<T>::exact) {
        for (std::size_t r = 0; r < m_; ++r) {
          if (rhs(r) < T(0) && rhs(r) > -tol * T(1e3)) rhs(r) = T(0);
        }
      }
    }
  }

  bool is_basic(std::size_t j) const {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] == j) return true;
    }
    return false;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<T> data_;
  std::vector<int> sign_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

template <Scalar T>
SimplexResult<T> simplex_solve(const StandardLp<T>& lp) {
  const std::size_t m = lp.rows();
  const std::size_t n = lp.cols();
  const T tol = detail::pivot_tolerance<T>();
  detail::Tableau<T> tab(lp);
  SimplexResult<T> result;

  // Phase 1: maximize -sum(artificials).
  std::vector<T> phase1(n + m, T(0));
  for (std::size_t r = 0; r < m; ++r) phase1[n + r] = T(-1);
  tab.optimize(phase1, n + m);
  T infeasibility(0);
  T b_scale(1);
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis_[r] >= n) infeasibility += tab.rhs(r);
    b_scale = std::max(b_scale, abs_value(lp.b[r]));
  }
  if (infeasibility > tol * T(1e3) * b_scale) {
    result.status = LpStatus::Infeasible;
    result.basis = tab.basis_;
    result.pivots = tab.pivots_;
    return result;
  }

  // Drive basic artificials out where some structural column allows it.
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis_[r] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (abs_value(tab.at(r, j)) > tol * T(1e3) && !tab.is_basic(j)) {
        tab.pivot(r, j);
        break;
      }
    }
  }

  // Phase 2 on the structural columns only.
  std::vector<T> phase2(n + m, T(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = lp.c[j];
  if (!tab.optimize(phase2, n)) {
    result.status = LpStatus::Unbounded;
    result.basis = tab.basis_;
    result.pivots = tab.pivots_;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.x.assign(n, T(0));
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis_[r] < n) result.x[tab.basis_[r]] = tab.rhs(r);
  }
  result.value = T(0);
  for (std::size_t j = 0; j < n; ++j) result.value += lp.c[j] * result.x[j];

  // y_i = c_B B^-1 e_i; column n + i of the tableau holds B^-1 e_i.
  result.y.assign(m, T(0));
  for (std::size_t i = 0; i < m; ++i) {
    T yi(0);
    for (std::size_t r = 0; r < m; ++r) yi += phase2[tab.basis_[r]] * tab.at(r, n + i);
    result.y[i] = tab.sign_[i] < 0 ? T(-yi) : yi;
  }

  T c_scale(1);
  for (const auto& v : lp.c) c_scale = std::max(c_scale, abs_value(v));
  result.unique_hint = true;
  for (std::size_t j = 0; j < n; ++j) {
    if (tab.is_basic(j)) continue;
    if (abs_value(tab.reduced_cost(phase2, j)) <= tol * T(1e3) * c_scale) {
      result.unique_hint = false;
      break;
    }
  }
  result.basis = tab.basis_;
  result.pivots = tab.pivots_;
  return result;
}

}  // namespace smt
