#pragma once

// Geometry of supports: Spence-Mirrlees checks for rewards, first- and
// second-order monotonicity and nondegeneracy of (Gamma, M), local
// competitors, and identification of the canonical couplings.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smt/coupling.hpp"
#include "smt/error.hpp"
#include "smt/report.hpp"
#include "smt/scalar.hpp"

namespace smt {

enum class SmOrder { First, Second };
enum class SmSign { Plus, Minus };
enum class Side { Left, Right };

inline const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

/// Checks that D = s (f(x2,.) - f(x1,.)) is increasing (first order) or
/// convex (second order) on ys for every x1 < x2 in xs, with s = -1 for
/// SmSign::Minus. Relaxed mode accepts ties within eps.
template <class Reward>
CheckReport check_spence_mirrlees(const Reward& f, std::vector<double> xs, std::vector<double> ys, SmOrder order,
                                  SmSign sign, bool strict, double eps = epsilon()) {
  std::string name = std::string(order == SmOrder::First ? "first" : "second") + "-order spence-mirrlees" +
                     (sign == SmSign::Minus ? " (negated)" : "") + (strict ? "" : " (relaxed)");
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  if (order == SmOrder::Second && ys.size() < 3) {
    throw Error(ErrorCode::OutOfRange, "second-order check needs at least 3 y values");
  }
  const double s = sign == SmSign::Plus ? 1.0 : -1.0;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    for (std::size_t b = a + 1; b < xs.size(); ++b) {
      auto d = [&](std::size_t j) { return s * (f(xs[b], ys[j]) - f(xs[a], ys[j])); };
      auto holds = [&](double increment, double scale) {
        double tol = eps * std::max(1.0, std::fabs(scale));
        return strict ? increment > tol : increment >= -tol;
      };
      if (order == SmOrder::First) {
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
          double inc = d(j + 1) - d(j);
          if (!holds(inc, std::max(std::fabs(d(j)), std::fabs(d(j + 1))))) {
            return CheckReport::fail(name,
                                     "difference for x1=" + shortest_repr(xs[a]) + ", x2=" + shortest_repr(xs[b]) +
                                         " does not increase between y=" + shortest_repr(ys[j]) + " and y=" +
                                         shortest_repr(ys[j + 1]),
                                     {{xs[a], ys[j]}, {xs[b], ys[j + 1]}});
          }
        }
      } else {
        for (std::size_t j = 0; j + 2 < ys.size(); ++j) {
          double left = (d(j + 1) - d(j)) / (ys[j + 1] - ys[j]);
          double right = (d(j + 2) - d(j + 1)) / (ys[j + 2] - ys[j + 1]);
          if (!holds(right - left, std::max(std::fabs(left), std::fabs(right)))) {
            return CheckReport::fail(name,
                                     "difference for x1=" + shortest_repr(xs[a]) + ", x2=" + shortest_repr(xs[b]) +
                                         " is not convex at y=" + shortest_repr(ys[j + 1]),
                                     {{xs[a], ys[j + 1]}, {xs[b], ys[j + 1]}});
          }
        }
      }
    }
  }
  return CheckReport::ok(name);
}

// ---------------------------------------------------------------------------
// Support graphs

template <Scalar T>
struct SupportGraph {
  std::vector<std::pair<T, T>> points;  // Gamma
  std::vector<T> m_set;                 // M
  std::vector<T> m0;
  std::vector<T> m1;

  static bool member(const std::vector<T>& set, const T& x) {
    return std::any_of(set.begin(), set.end(), [&](const T& m) { return approx_eq(m, x); });
  }
  bool in_m(const T& x) const { return member(m_set, x); }

  /// Gamma^1, sorted.
  std::vector<T> projection() const {
    std::vector<T> xs;
    for (const auto& p : points) {
      if (!member(xs, p.first)) xs.push_back(p.first);
    }
    std::sort(xs.begin(), xs.end());
    return xs;
  }

  /// Gamma_x, sorted.
  std::vector<T> section(const T& x) const {
    std::vector<T> ys;
    for (const auto& p : points) {
      if (approx_eq(p.first, x)) ys.push_back(p.second);
    }
    std::sort(ys.begin(), ys.end());
    return ys;
  }
};

/// Gamma = support of P, M = rows with zero drift, M1 = M, M0 empty.
template <Scalar T>
SupportGraph<T> support_graph(const Coupling<T>& p, double eps = epsilon()) {
  SupportGraph<T> sg;
  sg.points = p.support();
  sg.m_set = classify_martingale_points(p, eps).martingale_points;
  sg.m1 = sg.m_set;
  return sg;
}

namespace detail {

template <Scalar T>
std::string point_text(const std::pair<T, T>& p) {
  return "(" + format_scalar(p.first) + ", " + format_scalar(p.second) + ")";
}

template <Scalar T>
std::vector<std::pair<double, double>> witness(std::initializer_list<std::pair<T, T>> pts) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : pts) out.emplace_back(to_double(p.first), to_double(p.second));
  return out;
}

template <Scalar T>
std::vector<std::pair<T, T>> sorted_points(const SupportGraph<T>& sg) {
  auto pts = sg.points;
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace detail

/// Left: y1 <= y2 whenever x2 is not in M. Right: y2 <= y1 whenever x1 is
/// not in M. Pairs range over Gamma with x1 < x2.
template <Scalar T>
CheckReport check_first_order(const SupportGraph<T>& sg, Side side) {
  std::string name = std::string("first-order ") + to_string(side) + "-monotone";
  auto pts = detail::sorted_points(sg);
  for (const auto& p1 : pts) {
    for (const auto& p2 : pts) {
      if (!approx_lt(p1.first, p2.first)) continue;
      bool bad = side == Side::Left ? (!sg.in_m(p2.first) && approx_lt(p2.second, p1.second))
                                    : (!sg.in_m(p1.first) && approx_lt(p1.second, p2.second));
      if (bad) {
        return CheckReport::fail(name, "pair " + detail::point_text(p1) + ", " + detail::point_text(p2),
                                 detail::witness({p1, p2}));
      }
    }
  }
  return CheckReport::ok(name);
}

/// For (x, y1), (x, y2), (x', y') in Gamma with y1 < y2: y' is not in
/// (y1, y2) whenever x < x' (left) or x' < x (right).
template <Scalar T>
CheckReport check_second_order(const SupportGraph<T>& sg, Side side) {
  std::string name = std::string("second-order ") + to_string(side) + "-monotone";
  auto pts = detail::sorted_points(sg);
  for (const T& x : sg.projection()) {
    std::vector<T> ys = sg.section(x);
    if (ys.size() < 2) continue;
    for (const auto& q : pts) {
      bool applies = side == Side::Left ? approx_lt(x, q.first) : approx_lt(q.first, x);
      if (!applies) continue;
      // Some pair of section points brackets y' iff the extreme ones do.
      if (approx_lt(ys.front(), q.second) && approx_lt(q.second, ys.back())) {
        std::pair<T, T> a{x, ys.front()};
        std::pair<T, T> b{x, ys.back()};
        return CheckReport::fail(name,
                                 "point " + detail::point_text(q) + " lies between " + detail::point_text(a) + " and " +
                                     detail::point_text(b),
                                 detail::witness({a, b, q}));
      }
    }
  }
  return CheckReport::ok(name);
}

/// (i) an up-point at x needs a down-point at x; (ii) for x in M a down-point
/// needs an up-point. The implied (i'), (ii') are checked as well.
template <Scalar T>
CheckReport check_nondegenerate(const SupportGraph<T>& sg) {
  const char* name = "nondegenerate";
  for (const T& x : sg.projection()) {
    std::vector<T> ys = sg.section(x);
    bool up = std::any_of(ys.begin(), ys.end(), [&](const T& y) { return approx_lt(x, y); });
    bool down = std::any_of(ys.begin(), ys.end(), [&](const T& y) { return approx_lt(y, x); });
    bool at_or_below = std::any_of(ys.begin(), ys.end(), [&](const T& y) { return approx_le(y, x); });
    bool at_or_above = std::any_of(ys.begin(), ys.end(), [&](const T& y) { return approx_le(x, y); });
    if (up && !down) {
      return CheckReport::fail(name, "x=" + format_scalar(x) + " has an up-point but no down-point",
                               {{to_double(x), to_double(ys.back())}});
    }
    if (sg.in_m(x) && down && !up) {
      return CheckReport::fail(name, "x=" + format_scalar(x) + " in M has a down-point but no up-point",
                               {{to_double(x), to_double(ys.front())}});
    }
    if (!at_or_below) return CheckReport::fail(name, "x=" + format_scalar(x) + " has no point y <= x");
    if (sg.in_m(x) && !at_or_above) return CheckReport::fail(name, "x=" + format_scalar(x) + " in M has no point y >= x");
  }
  return CheckReport::ok(name);
}

struct MonotonicityReport {
  CheckReport first_left;
  CheckReport first_right;
  CheckReport second_left;
  CheckReport second_right;
  CheckReport nondegenerate;
};

template <Scalar T>
MonotonicityReport monotonicity_report(const SupportGraph<T>& sg) {
  return {check_first_order(sg, Side::Left), check_first_order(sg, Side::Right), check_second_order(sg, Side::Left),
          check_second_order(sg, Side::Right), check_nondegenerate(sg)};
}

// ---------------------------------------------------------------------------
// Local competitors

struct CompetitorReport {
  CheckReport summary;
  std::size_t pairs_admitted = 0;
  std::size_t triples_admitted = 0;
  double best_gain = 0.0;
};

/// Enumerates pair swaps and triple splits over the support of P and reports
/// the first admissible competitor that improves the reward by more than eps.
/// A pair swap moves the barycenter of both rows, so it is admitted only when
/// neither row is in M1 and rows in M0 do not gain barycenter. Triple splits
/// keep every barycenter. Competitors must lie in sigma (all of R^2 if null).
template <Scalar T, class Reward>
CompetitorReport verify_local_optimality(const Coupling<T>& p, const Reward& f, const std::vector<T>& m0,
                                         const std::vector<T>& m1,
                                         const std::function<bool(const T&, const T&)>& sigma = nullptr,
                                         double eps = 1e-9) {
  const char* name = "local-optimality";
  auto in = [](const std::vector<T>& set, const T& x) { return SupportGraph<T>::member(set, x); };
  auto ok_sigma = [&](const T& x, const T& y) { return !sigma || sigma(x, y); };
  auto F = [&](const T& x, const T& y) { return static_cast<double>(f(to_double(x), to_double(y))); };
  auto pts = p.support();
  std::sort(pts.begin(), pts.end());
  CompetitorReport rep;

  // Pair swaps: (x1,y1), (x2,y2) -> (x1,y2), (x2,y1), each with mass 1/2.
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const auto& [x1, y1] = pts[a];
      const auto& [x2, y2] = pts[b];
      if (approx_eq(x1, x2) || approx_eq(y1, y2)) continue;
      if (in(m1, x1) || in(m1, x2)) continue;
      // Row x1 moves its barycenter by y2 - y1, row x2 by y1 - y2.
      if (in(m0, x1) && approx_lt(y1, y2)) continue;
      if (in(m0, x2) && approx_lt(y2, y1)) continue;
      if (!ok_sigma(x1, y2) || !ok_sigma(x2, y1)) continue;
      ++rep.pairs_admitted;
      double gain = 0.5 * (F(x1, y2) + F(x2, y1) - F(x1, y1) - F(x2, y2));
      rep.best_gain = std::max(rep.best_gain, gain);
      double scale = std::max({1.0, std::fabs(F(x1, y1)), std::fabs(F(x2, y2))});
      if (gain > eps * scale) {
        rep.summary = CheckReport::fail(name,
                                        "pair swap of " + detail::point_text(pts[a]) + " and " +
                                            detail::point_text(pts[b]) + " gains " + shortest_repr(gain),
                                        detail::witness({pts[a], pts[b]}));
        return rep;
      }
    }
  }

  // Triple splits: (x,y1), (x,y2), (x',y') with y1 < y' < y2. Weight
  // lambda = (y'-y1)/(y2-y1) sits on y2 so that both kernels average to y'.
  std::vector<T> xs;
  for (const auto& pt : pts) {
    if (!in(xs, pt.first)) xs.push_back(pt.first);
  }
  for (const T& x : xs) {
    std::vector<T> ys;
    for (const auto& pt : pts) {
      if (approx_eq(pt.first, x)) ys.push_back(pt.second);
    }
    for (std::size_t i = 0; i < ys.size(); ++i) {
      for (std::size_t j = i + 1; j < ys.size(); ++j) {
        const T& y1 = ys[i];
        const T& y2 = ys[j];
        for (const auto& q : pts) {
          const auto& [xp, yp] = q;
          if (approx_eq(xp, x) || !approx_lt(y1, yp) || !approx_lt(yp, y2)) continue;
          if (!ok_sigma(xp, y1) || !ok_sigma(xp, y2) || !ok_sigma(x, yp)) continue;
          ++rep.triples_admitted;
          double lambda = to_double(T((yp - y1) / (y2 - y1)));
          double before = (1 - lambda) / 2 * F(x, y1) + lambda / 2 * F(x, y2) + 0.5 * F(xp, yp);
          double after = (1 - lambda) / 2 * F(xp, y1) + lambda / 2 * F(xp, y2) + 0.5 * F(x, yp);
          double gain = after - before;
          rep.best_gain = std::max(rep.best_gain, gain);
          if (gain > eps * std::max({1.0, std::fabs(before), std::fabs(after)})) {
            std::pair<T, T> a{x, y1};
            std::pair<T, T> b{x, y2};
            rep.summary = CheckReport::fail(name,
                                            "triple split of " + detail::point_text(a) + ", " + detail::point_text(b) +
                                                " around " + detail::point_text(q) + " gains " + shortest_repr(gain),
                                            detail::witness({a, b, q}));
            return rep;
          }
        }
      }
    }
  }
  rep.summary = CheckReport::ok(name);
  return rep;
}

// ---------------------------------------------------------------------------
// Identification of the canonical couplings

struct IdentificationReport {
  CheckReport summary;
  CheckReport nondegenerate;
  CheckReport first_order;
  CheckReport second_order;
  bool premises = false;  // all three checks pass with M from drift classification
  bool matches = false;   // P equals the canonical coupling atomwise
};

/// Increasing: nondegenerate + first-order right + second-order left.
/// Decreasing: nondegenerate + first-order left + second-order right.
/// With M the martingale rows of P, these premises should force P to be the
/// corresponding canonical coupling; the report fails only if the premises
/// hold and P differs from it.
template <Scalar T>
IdentificationReport identify_canonical(const Coupling<T>& p, const DiscreteMeasure<T>& mu,
                                        const DiscreteMeasure<T>& nu, Direction direction,
                                        double eps = epsilon()) {
  IdentificationReport rep;
  SupportGraph<T> sg = support_graph(p, eps);
  const bool inc = direction == Direction::Increasing;
  rep.nondegenerate = check_nondegenerate(sg);
  rep.first_order = check_first_order(sg, inc ? Side::Right : Side::Left);
  rep.second_order = check_second_order(sg, inc ? Side::Left : Side::Right);
  rep.premises = rep.nondegenerate.pass && rep.first_order.pass && rep.second_order.pass;
  Coupling<T> canonical = canonical_transport(mu, nu, direction);
  rep.matches = p == canonical;
  std::string name = std::string("identify-") + to_string(direction);
  if (!rep.premises || rep.matches) {
    rep.summary = CheckReport::ok(name);
  } else {
    rep.summary = CheckReport::fail(name, "support passes the monotonicity premises but the coupling differs from the " +
                                              std::string(to_string(direction)) + " transport (max cell gap " +
                                              shortest_repr(max_plan_difference(p, canonical)) + ")");
  }
  return rep;
}

}  // namespace smt
