#pragma once

// Supermartingale, martingale and unconstrained transport as linear programs
// over the grid xs x ys, solved by the dense simplex.
//
// Variables P_ij >= 0, plus one slack per row when the drift constraint is an
// inequality. Equality rows, in order:
//
//     sum_j P_ij = mu_i                              dual phi_i
//     sum_i P_ij = nu_j                              dual psi_j
//     sum_j P_ij (y_j - x_i) [+ s_i] = 0             dual h_i
//
// For maximization the dual constraints read phi_i + psi_j + h_i (y_j - x_i)
// >= f_ij, and the slack column gives h_i >= 0. Minimization is solved as
// maximization of -f and the certificate is negated, so the inequality and
// the sign of h flip.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "smt/coupling.hpp"
#include "smt/error.hpp"
#include "smt/measure.hpp"
#include "smt/report.hpp"
#include "smt/simplex.hpp"

namespace smt {

enum class ConstraintKind { DriftLeqZero, DriftEqZero, None };
enum class Sense { Maximize, Minimize };

inline const char* to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::DriftLeqZero:
      return "drift_leq_zero";
    case ConstraintKind::DriftEqZero:
      return "drift_eq_zero";
    case ConstraintKind::None:
      return "none";
  }
  return "unknown";
}

inline const char* to_string(Sense s) { return s == Sense::Maximize ? "maximize" : "minimize"; }

template <Scalar T>
struct TransportLp {
  std::vector<T> xs;
  std::vector<T> ys;
  std::vector<T> mu_w;
  std::vector<T> nu_w;
  std::vector<std::vector<T>> reward;  // reward[i][j] = f(xs[i], ys[j])
  ConstraintKind constraint = ConstraintKind::DriftLeqZero;
  Sense sense = Sense::Maximize;

  int sense_sign() const { return sense == Sense::Maximize ? 1 : -1; }
};

/// Builds the LP on the supports of mu and nu; the reward is evaluated once.
template <Scalar T, class Reward>
TransportLp<T> make_transport_lp(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu, Reward&& f,
                                 ConstraintKind constraint, Sense sense = Sense::Maximize) {
  TransportLp<T> lp;
  lp.constraint = constraint;
  lp.sense = sense;
  for (const auto& a : mu.atoms()) {
    lp.xs.push_back(a.x);
    lp.mu_w.push_back(a.w);
  }
  for (const auto& a : nu.atoms()) {
    lp.ys.push_back(a.x);
    lp.nu_w.push_back(a.w);
  }
  for (const auto& x : lp.xs) {
    std::vector<T> row;
    for (const auto& y : lp.ys) {
      auto v = f(x, y);
      if constexpr (std::is_same_v<std::decay_t<decltype(v)>, T>) {
        row.push_back(v);
      } else {
        row.push_back(scalar_from_double<T>(static_cast<double>(v)));
      }
    }
    lp.reward.push_back(std::move(row));
  }
  return lp;
}

template <Scalar To = double, Scalar From>
TransportLp<To> convert_lp(const TransportLp<From>& lp) {
  auto conv = [](const std::vector<From>& v) {
    std::vector<To> out;
    for (const auto& e : v) out.push_back(convert_scalar<To>(e));
    return out;
  };
  TransportLp<To> out{conv(lp.xs), conv(lp.ys), conv(lp.mu_w), conv(lp.nu_w), {}, lp.constraint, lp.sense};
  for (const auto& row : lp.reward) out.reward.push_back(conv(row));
  return out;
}

template <Scalar T>
struct DualCertificate {
  std::vector<T> phi;
  std::vector<T> psi;
  std::vector<T> h;
};

template <Scalar T>
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Coupling<T> plan;
  T value{};
  DualCertificate<T> dual;
  bool uniqueness_hint = false;
  std::size_t pivots = 0;
};

/// Plan weights at or below this level are treated as zero in float mode.
template <Scalar T>
T plan_cutoff(const TransportLp<T>& lp) {
  if constexpr (ScalarTraits<T>::exact) {
    return T(0);
  } else {
    T total(0);
    for (const auto& w : lp.mu_w) total += w;
    return T(1e-12) * std::max(T(1), total);
  }
}

template <Scalar T>
StandardLp<T> to_standard_form(const TransportLp<T>& lp) {
  const std::size_t nx = lp.xs.size();
  const std::size_t ny = lp.ys.size();
  const bool drift = lp.constraint != ConstraintKind::None;
  const bool slack = lp.constraint == ConstraintKind::DriftLeqZero;
  const std::size_t n = nx * ny + (slack ? nx : 0);
  const std::size_t m = nx + ny + (drift ? nx : 0);

  StandardLp<T> out;
  out.a.assign(m, std::vector<T>(n, T(0)));
  out.b.assign(m, T(0));
  out.c.assign(n, T(0));
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t col = i * ny + j;
      out.c[col] = lp.sense == Sense::Maximize ? lp.reward[i][j] : T(-lp.reward[i][j]);
      out.a[i][col] = T(1);
      out.a[nx + j][col] = T(1);
      if (drift) out.a[nx + ny + i][col] = lp.ys[j] - lp.xs[i];
    }
    out.b[i] = lp.mu_w[i];
    if (slack) out.a[nx + ny + i][nx * ny + i] = T(1);
  }
  for (std::size_t j = 0; j < ny; ++j) out.b[nx + j] = lp.nu_w[j];
  return out;
}

template <Scalar T>
LpSolution<T> solve_transport(const TransportLp<T>& lp) {
  const std::size_t nx = lp.xs.size();
  const std::size_t ny = lp.ys.size();
  T mu_total(0);
  T nu_total(0);
  for (const auto& w : lp.mu_w) mu_total += w;
  for (const auto& w : lp.nu_w) nu_total += w;
  if (!approx_eq(mu_total, nu_total)) {
    throw Error(ErrorCode::MassMismatch,
                "transport LP needs equal masses, got " + format_scalar(mu_total) + " and " + format_scalar(nu_total));
  }

  SimplexResult<T> raw = simplex_solve(to_standard_form(lp));
  LpSolution<T> sol;
  sol.status = raw.status;
  sol.pivots = raw.pivots;
  if (raw.status != LpStatus::Optimal) return sol;

  const T cutoff = plan_cutoff(lp);
  std::vector<Cell<T>> cells;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const T& w = raw.x[i * ny + j];
      if (w > cutoff) cells.push_back({lp.xs[i], lp.ys[j], w});
    }
  }
  sol.plan = Coupling<T>::from_cells(cells);
  sol.value = lp.sense == Sense::Maximize ? raw.value : T(-raw.value);
  sol.uniqueness_hint = raw.unique_hint;

  const T sign = T(lp.sense_sign());
  DualCertificate<T>& d = sol.dual;
  for (std::size_t i = 0; i < nx; ++i) d.phi.push_back(sign * raw.y[i]);
  for (std::size_t j = 0; j < ny; ++j) d.psi.push_back(sign * raw.y[nx + j]);
  if (lp.constraint == ConstraintKind::None) {
    d.h.assign(nx, T(0));
  } else {
    for (std::size_t i = 0; i < nx; ++i) d.h.push_back(sign * raw.y[nx + ny + i]);
  }

  // With a martingale constraint the certificate is only defined up to
  // h -> h - b, phi -> phi - b x, psi -> psi + b y. Fix b so that h has zero
  // mu-mean.
  if (lp.constraint == ConstraintKind::DriftEqZero && mu_total > T(0)) {
    T b(0);
    for (std::size_t i = 0; i < nx; ++i) b += lp.mu_w[i] * d.h[i];
    b /= mu_total;
    for (std::size_t i = 0; i < nx; ++i) {
      d.h[i] -= b;
      d.phi[i] -= b * lp.xs[i];
    }
    for (std::size_t j = 0; j < ny; ++j) d.psi[j] += b * lp.ys[j];
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Certificate verification

template <Scalar T>
struct CertificateReport {
  CheckReport summary;
  bool primal_feasible = false;
  bool dual_feasible_grid = false;
  std::optional<bool> dual_feasible_sigma;  // inequality restricted to a caller-given set
  bool objective_match = false;
  bool complementary_slackness = false;
  T primal_value{};
  T dual_value{};
  std::vector<std::pair<T, T>> gamma;          // tight cells, zero-mass ones included
  std::vector<std::pair<T, T>> gamma_support;  // tight cells carrying plan mass
  std::vector<T> m0;                           // x_i with h_i strictly signed as the constraint binds
  std::vector<std::string> failures;
};

/// Checks primal feasibility, the dual inequality on the grid (and on the set
/// `sigma` when given), equal objectives and complementary slackness. Also
/// extracts the tight set and M0 = {h > eps} (sign-adjusted for minimization).
template <Scalar T>
CertificateReport<T> verify_certificate(const TransportLp<T>& lp, const Coupling<T>& plan, const DualCertificate<T>& dual,
                                        double eps = epsilon(),
                                        const std::function<bool(const T&, const T&)>& sigma = nullptr) {
  const std::size_t nx = lp.xs.size();
  const std::size_t ny = lp.ys.size();
  const T s = T(lp.sense_sign());
  CertificateReport<T> rep;
  auto fail = [&](std::string msg) { rep.failures.push_back(std::move(msg)); };

  if (dual.phi.size() != nx || dual.psi.size() != ny || dual.h.size() != nx) {
    rep.summary = CheckReport::fail("certificate", "dual vectors do not match the grid");
    return rep;
  }

  // Primal feasibility.
  rep.primal_feasible = true;
  std::vector<Atom<T>> mu_atoms;
  for (std::size_t i = 0; i < nx; ++i) mu_atoms.push_back({lp.xs[i], lp.mu_w[i]});
  DiscreteMeasure<T> mu(std::move(mu_atoms));
  std::vector<Atom<T>> nu_atoms;
  for (std::size_t j = 0; j < ny; ++j) nu_atoms.push_back({lp.ys[j], lp.nu_w[j]});
  DiscreteMeasure<T> nu(std::move(nu_atoms));
  if (!(plan.first_marginal() == mu) || !(plan.second_marginal() == nu)) {
    rep.primal_feasible = false;
    fail("primal: plan marginals differ from the LP marginals");
  }
  for (const auto& cell : plan.cells()) {
    if (cell.w < T(0)) {
      rep.primal_feasible = false;
      fail("primal: negative cell weight at x=" + format_scalar(cell.x) + ", y=" + format_scalar(cell.y));
    }
  }
  auto row_drift = [&](const T& x) {
    for (const auto& r : plan.rows()) {
      if (approx_eq(r.x, x)) return T(r.kernel.first_moment() - r.mass() * x);
    }
    return T(0);
  };
  for (std::size_t i = 0; i < nx; ++i) {
    T d = row_drift(lp.xs[i]);
    bool ok = lp.constraint == ConstraintKind::None ||
              (lp.constraint == ConstraintKind::DriftLeqZero ? at_most(d, T(0), eps, lp.xs[i])
                                                             : within(d, T(0), eps, lp.xs[i]));
    if (!ok) {
      rep.primal_feasible = false;
      fail("primal: drift constraint violated at x=" + format_scalar(lp.xs[i]) + " (drift " + format_scalar(d) + ")");
    }
  }

  // Dual feasibility: s * (phi + psi + h (y - x) - f) >= 0.
  rep.dual_feasible_grid = true;
  bool sigma_ok = true;
  for (std::size_t i = 0; i < nx; ++i) {
    if (lp.constraint == ConstraintKind::DriftLeqZero && !at_most(T(-s * dual.h[i]), T(0), eps, dual.h[i])) {
      rep.dual_feasible_grid = false;
      fail("dual: multiplier h has the wrong sign at x=" + format_scalar(lp.xs[i]));
    }
    for (std::size_t j = 0; j < ny; ++j) {
      const T lhs = dual.phi[i] + dual.psi[j] + dual.h[i] * (lp.ys[j] - lp.xs[i]);
      const T& f = lp.reward[i][j];
      const T scale = std::max({T(1), abs_value(f), abs_value(lhs)});
      const T gap = s * (lhs - f);
      const bool ok = at_most(T(-gap), T(0), eps, scale);
      const bool tight = within(gap, T(0), eps, scale);
      if (!ok) {
        rep.dual_feasible_grid = false;
        fail("dual: inequality fails at x=" + format_scalar(lp.xs[i]) + ", y=" + format_scalar(lp.ys[j]));
        if (sigma && sigma(lp.xs[i], lp.ys[j])) sigma_ok = false;
      }
      if (tight) {
        rep.gamma.emplace_back(lp.xs[i], lp.ys[j]);
        if (plan.mass_at(lp.xs[i], lp.ys[j]) > T(0)) rep.gamma_support.emplace_back(lp.xs[i], lp.ys[j]);
      }
    }
  }
  if (sigma) rep.dual_feasible_sigma = sigma_ok;

  // Objectives.
  rep.primal_value = T(0);
  for (const auto& cell : plan.cells()) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (!approx_eq(lp.xs[i], cell.x)) continue;
      for (std::size_t j = 0; j < ny; ++j) {
        if (approx_eq(lp.ys[j], cell.y)) rep.primal_value += cell.w * lp.reward[i][j];
      }
    }
  }
  rep.dual_value = T(0);
  for (std::size_t i = 0; i < nx; ++i) rep.dual_value += lp.mu_w[i] * dual.phi[i];
  for (std::size_t j = 0; j < ny; ++j) rep.dual_value += lp.nu_w[j] * dual.psi[j];
  rep.objective_match = within(rep.primal_value, rep.dual_value, eps, rep.primal_value);
  if (!rep.objective_match) {
    fail("objective: primal " + format_scalar(rep.primal_value) + " vs dual " + format_scalar(rep.dual_value));
  }

  // Complementary slackness.
  rep.complementary_slackness = true;
  for (const auto& cell : plan.cells()) {
    bool tight = std::any_of(rep.gamma.begin(), rep.gamma.end(), [&](const std::pair<T, T>& g) {
      return approx_eq(g.first, cell.x) && approx_eq(g.second, cell.y);
    });
    if (!tight) {
      rep.complementary_slackness = false;
      fail("slackness: plan charges the slack cell x=" + format_scalar(cell.x) + ", y=" + format_scalar(cell.y));
    }
  }
  for (std::size_t i = 0; i < nx; ++i) {
    const T sh = s * dual.h[i];
    if (within(sh, T(0), eps, T(1))) continue;
    if (lp.constraint == ConstraintKind::DriftLeqZero) {
      rep.m0.push_back(lp.xs[i]);
      if (!within(row_drift(lp.xs[i]), T(0), eps, lp.xs[i])) {
        rep.complementary_slackness = false;
        fail("slackness: h > 0 at x=" + format_scalar(lp.xs[i]) + " but the row has drift");
      }
    }
  }

  bool pass = rep.primal_feasible && rep.dual_feasible_grid && rep.objective_match && rep.complementary_slackness;
  rep.summary = pass ? CheckReport::ok("certificate") : CheckReport::fail("certificate", rep.failures.front());
  return rep;
}

}  // namespace smt
