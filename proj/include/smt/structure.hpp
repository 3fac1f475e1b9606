#pragma once

// Barriers and the irreducible decomposition of a pair mu <=cd nu.
//
// D = p_nu - p_mu is piecewise linear with kinks on the joint atom grid, zero
// left of the grid, and constant right of it with value mu(R) (bary(mu) -
// bary(nu)) >= 0. Hence the maximal barrier x* is +inf when the barycenters
// agree and otherwise the last grid point where D vanishes. Martingale
// components are the gaps between consecutive zeros of D below x*; each gets
// nu on the open gap plus endpoint atoms fixed by mass and barycenter balance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "smt/coupling.hpp"
#include "smt/error.hpp"
#include "smt/measure.hpp"
#include "smt/report.hpp"
#include "smt/transport_lp.hpp"

namespace smt {

enum class ComponentKind { Supermartingale, Martingale, Identity };

inline const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Supermartingale:
      return "supermartingale";
    case ComponentKind::Martingale:
      return "martingale";
    case ComponentKind::Identity:
      return "identity";
  }
  return "unknown";
}

template <Scalar T>
struct Component {
  int index = 0;  // 0 supermartingale, 1.. martingale from left to right, -1 identity
  Interval<T> I;  // for the identity part: hull of its support (only the diagonal enters Sigma)
  Interval<T> J;
  DiscreteMeasure<T> mu;
  DiscreteMeasure<T> nu;
  ComponentKind kind = ComponentKind::Martingale;
};

template <Scalar T>
struct ComponentDecomposition {
  Extended<T> x_star;
  std::vector<Component<T>> components;

  /// (x, y) on the diagonal or in some I_k x J_k with k >= 0.
  bool sigma_contains(const T& x, const T& y) const {
    if (approx_eq(x, y)) return true;
    return std::any_of(components.begin(), components.end(), [&](const Component<T>& c) {
      return c.kind != ComponentKind::Identity && c.I.contains(x) && c.J.contains(y);
    });
  }
};

template <Scalar T>
bool sigma_contains(const ComponentDecomposition<T>& dec, const T& x, const T& y) {
  return dec.sigma_contains(x, y);
}

namespace detail {

template <Scalar T>
T put_gap(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu, const T& t) {
  return put_value(nu, t) - put_value(mu, t);
}

template <Scalar T>
void require_cd(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  if (auto v = convex_decreasing_violation(mu, nu)) {
    throw OrderViolationError(v->first, "mu <=cd nu fails: " + v->second);
  }
}

/// Grid points plus midpoints between consecutive ones.
template <Scalar T>
std::vector<T> refined_grid(const std::vector<T>& grid) {
  std::vector<T> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.push_back(grid[i]);
    if (i + 1 < grid.size()) out.push_back((grid[i] + grid[i + 1]) / T(2));
  }
  return out;
}

}  // namespace detail

/// sup{x : p_mu(x) = p_nu(x)}.
template <Scalar T>
Extended<T> maximal_barrier(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  detail::require_cd(mu, nu);
  if (approx_eq(mu.first_moment(), nu.first_moment())) return Extended<T>::pos_inf();
  std::vector<T> grid = breakpoints(mu, nu);
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    if (approx_zero(detail::put_gap(mu, nu, *it))) return Extended<T>::finite(*it);
  }
  return Extended<T>::neg_inf();
}

/// I_k = {p_mu_k < p_nu_k}, rechecked on the atom grid and its midpoints.
template <Scalar T>
CheckReport check_irreducible(const Component<T>& c) {
  const char* name = "irreducible";
  if (c.kind == ComponentKind::Identity) {
    return c.mu == c.nu ? CheckReport::ok(name) : CheckReport::fail(name, "identity part has mu != nu");
  }
  if (c.kind == ComponentKind::Martingale ? !leq_convex(c.mu, c.nu) : !leq_convex_decreasing(c.mu, c.nu)) {
    return CheckReport::fail(name, "component " + std::to_string(c.index) + " violates its order");
  }
  for (const auto& t : detail::refined_grid(breakpoints(c.mu, c.nu))) {
    T gap = detail::put_gap(c.mu, c.nu, t);
    bool inside = c.I.contains(t);
    if (inside != approx_positive(gap)) {
      return CheckReport::fail(name,
                               "component " + std::to_string(c.index) + ": p-gap " + format_scalar(gap) + " at t=" +
                                   format_scalar(t) + (inside ? " inside I" : " outside I"),
                               {{to_double(t), to_double(gap)}});
    }
  }
  if (c.kind == ComponentKind::Supermartingale && !approx_lt(barycenter(c.nu), barycenter(c.mu))) {
    return CheckReport::fail(name, "supermartingale component is not proper");
  }
  return CheckReport::ok(name);
}

template <Scalar T>
ComponentDecomposition<T> decompose(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  ComponentDecomposition<T> dec;
  dec.x_star = maximal_barrier(mu, nu);
  const std::vector<T> grid = breakpoints(mu, nu);

  std::vector<Component<T>> martingales;
  const T* last_zero = nullptr;
  bool positive_between = false;
  for (const auto& g : grid) {
    if (dec.x_star.is_finite() && g > dec.x_star.value) break;
    if (!approx_zero(detail::put_gap(mu, nu, g))) {
      positive_between = true;
      continue;
    }
    if (last_zero && positive_between) {
      const T& a = *last_zero;
      const T& b = g;
      Component<T> c;
      c.index = static_cast<int>(martingales.size()) + 1;
      c.kind = ComponentKind::Martingale;
      c.I = Interval<T>::open(a, b);
      c.mu = restrict(mu, c.I);
      DiscreteMeasure<T> inner = restrict(nu, c.I);
      T mass_gap = c.mu.mass() - inner.mass();
      T moment_gap = c.mu.first_moment() - inner.first_moment();
      T at_b = (moment_gap - a * mass_gap) / (b - a);
      T at_a = mass_gap - at_b;
      if (approx_lt(at_a, T(0)) || approx_lt(at_b, T(0))) {
        throw Error(ErrorCode::DecompositionError,
                    "negative endpoint mass on component (" + format_scalar(a) + ", " + format_scalar(b) + ")");
      }
      std::vector<Atom<T>> ends;
      if (approx_positive(at_a)) ends.push_back({a, at_a});
      if (approx_positive(at_b)) ends.push_back({b, at_b});
      c.nu = add(inner, DiscreteMeasure<T>(std::move(ends)));
      c.J = c.I;
      c.J.lo_closed = approx_positive(at_a);
      c.J.hi_closed = approx_positive(at_b);
      martingales.push_back(std::move(c));
    }
    last_zero = &g;
    positive_between = false;
  }

  DiscreteMeasure<T> mu_left = mu;
  DiscreteMeasure<T> nu_left = nu;
  try {
    if (dec.x_star.is_finite()) {
      const T& xs = dec.x_star.value;
      Component<T> c;
      c.index = 0;
      c.kind = ComponentKind::Supermartingale;
      c.I = Interval<T>::greater_than(xs);
      c.mu = restrict(mu, c.I);
      DiscreteMeasure<T> right = restrict(nu, c.I);
      T extra = c.mu.mass() - right.mass();
      if (approx_lt(extra, T(0))) {
        throw Error(ErrorCode::DecompositionError, "nu has more mass than mu right of x*");
      }
      c.nu = approx_positive(extra) ? add(right, DiscreteMeasure<T>::dirac(xs, extra)) : right;
      c.J = approx_positive(extra) ? Interval<T>::at_least(xs) : Interval<T>::greater_than(xs);
      mu_left = subtract(mu_left, c.mu);
      nu_left = subtract(nu_left, c.nu);
      dec.components.push_back(std::move(c));
    }
    for (auto& c : martingales) {
      mu_left = subtract(mu_left, c.mu);
      nu_left = subtract(nu_left, c.nu);
      dec.components.push_back(std::move(c));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DecompositionError) throw;
    throw Error(ErrorCode::DecompositionError, std::string("component bookkeeping failed: ") + e.what());
  }

  if (!(mu_left == nu_left)) {
    throw Error(ErrorCode::DecompositionError, "remaining parts of mu and nu differ");
  }
  if (!mu_left.empty()) {
    Component<T> c;
    c.index = -1;
    c.kind = ComponentKind::Identity;
    c.I = Interval<T>::closed(mu_left[0].x, mu_left[mu_left.size() - 1].x);
    c.J = c.I;
    c.mu = mu_left;
    c.nu = mu_left;
    dec.components.push_back(std::move(c));
  }
  for (const auto& c : dec.components) {
    CheckReport r = check_irreducible(c);
    if (!r.pass) throw Error(ErrorCode::DecompositionError, r.message);
  }
  return dec;
}

// ---------------------------------------------------------------------------
// Extremal decomposition

struct ExtremalReport {
  CheckReport summary;
  bool martingale_part_optimal = true;
  bool unconstrained_part_optimal = true;
  double martingale_value = 0.0;
  double martingale_optimum = 0.0;
  double unconstrained_value = 0.0;
  double unconstrained_optimum = 0.0;
};

/// Splits P into its rows over M and over the rest, and compares each part
/// with the martingale (resp. unconstrained) LP optimum between its own
/// marginals.
template <Scalar T, class Reward>
ExtremalReport extremal_decomposition_check(const Coupling<T>& p, const std::vector<T>& m_set, Reward&& f,
                                            double eps = 1e-8, Sense sense = Sense::Maximize) {
  auto in_m = [&](const T& x) {
    return std::any_of(m_set.begin(), m_set.end(), [&](const T& m) { return approx_eq(m, x); });
  };
  Coupling<double> on_m = convert_coupling<double>(p.restrict_rows(in_m));
  Coupling<double> off_m = convert_coupling<double>(p.restrict_rows([&](const T& x) { return !in_m(x); }));
  auto reward = [&](double x, double y) { return static_cast<double>(f(x, y)); };

  ExtremalReport rep;
  auto compare = [&](const Coupling<double>& part, ConstraintKind kind, double& value, double& optimum) {
    if (part.empty()) return true;
    auto lp = make_transport_lp(part.first_marginal(), part.second_marginal(), reward, kind, sense);
    auto sol = solve_transport(lp);
    if (sol.status != LpStatus::Optimal) {
      throw Error(ErrorCode::SolverError, std::string("restricted LP is ") + to_string(sol.status));
    }
    value = plan_value(part, reward);
    optimum = sol.value;
    double slack = eps * std::max(1.0, std::fabs(optimum));
    return sense == Sense::Maximize ? value >= optimum - slack : value <= optimum + slack;
  };
  rep.martingale_part_optimal = compare(on_m, ConstraintKind::DriftEqZero, rep.martingale_value, rep.martingale_optimum);
  rep.unconstrained_part_optimal =
      compare(off_m, ConstraintKind::None, rep.unconstrained_value, rep.unconstrained_optimum);
  if (rep.martingale_part_optimal && rep.unconstrained_part_optimal) {
    rep.summary = CheckReport::ok("extremal-decomposition");
  } else if (!rep.martingale_part_optimal) {
    rep.summary = CheckReport::fail("extremal-decomposition", "martingale part value " +
                                                                  shortest_repr(rep.martingale_value) + " vs optimum " +
                                                                  shortest_repr(rep.martingale_optimum));
  } else {
    rep.summary = CheckReport::fail("extremal-decomposition", "unconstrained part value " +
                                                                  shortest_repr(rep.unconstrained_value) +
                                                                  " vs optimum " + shortest_repr(rep.unconstrained_optimum));
  }
  return rep;
}

}  // namespace smt
