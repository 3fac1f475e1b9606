#pragma once

// Transport plans stored row-major: one kernel per source atom.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "smt/error.hpp"
#include "smt/measure.hpp"
#include "smt/report.hpp"
#include "smt/shadow.hpp"

namespace smt {

template <Scalar T>
struct CouplingRow {
  T x;
  DiscreteMeasure<T> kernel;  // unnormalized: total mass = mu({x})

  T mass() const { return kernel.mass(); }
  T drift() const { return barycenter(kernel) - x; }
};

template <Scalar T>
struct Cell {
  T x;
  T y;
  T w;
};

template <Scalar T>
class Coupling {
 public:
  Coupling() = default;

  /// Rows are sorted by source location; rows at the same location are merged
  /// and rows without mass are dropped.
  explicit Coupling(std::vector<CouplingRow<T>> rows) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const CouplingRow<T>& a, const CouplingRow<T>& b) { return a.x < b.x; });
    for (auto& row : rows) {
      if (row.kernel.empty()) continue;
      if (!rows_.empty() && approx_eq(rows_.back().x, row.x)) {
        rows_.back().kernel = add(rows_.back().kernel, row.kernel);
        continue;
      }
      rows_.push_back(std::move(row));
    }
  }

  static Coupling from_cells(const std::vector<Cell<T>>& cells) {
    std::map<T, std::vector<Atom<T>>> grouped;
    for (const auto& c : cells) grouped[c.x].push_back({c.y, c.w});
    std::vector<CouplingRow<T>> rows;
    for (auto& [x, atoms] : grouped) rows.push_back({x, DiscreteMeasure<T>(std::move(atoms))});
    return Coupling(std::move(rows));
  }

  const std::vector<CouplingRow<T>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  DiscreteMeasure<T> first_marginal() const {
    std::vector<Atom<T>> atoms;
    for (const auto& r : rows_) atoms.push_back({r.x, r.mass()});
    return DiscreteMeasure<T>(std::move(atoms));
  }

  DiscreteMeasure<T> second_marginal() const {
    std::vector<Atom<T>> atoms;
    for (const auto& r : rows_) atoms.insert(atoms.end(), r.kernel.atoms().begin(), r.kernel.atoms().end());
    return DiscreteMeasure<T>(std::move(atoms));
  }

  std::vector<Cell<T>> cells() const {
    std::vector<Cell<T>> out;
    for (const auto& r : rows_) {
      for (const auto& a : r.kernel.atoms()) out.push_back({r.x, a.x, a.w});
    }
    return out;
  }

  std::vector<std::pair<T, T>> support() const {
    std::vector<std::pair<T, T>> out;
    for (const auto& r : rows_) {
      for (const auto& a : r.kernel.atoms()) out.emplace_back(r.x, a.x);
    }
    return out;
  }

  /// Mass at the cell (x, y).
  T mass_at(const T& x, const T& y) const {
    for (const auto& r : rows_) {
      if (approx_eq(r.x, x)) return r.kernel.mass_at(y);
    }
    return T(0);
  }

  template <class Pred>
  Coupling restrict_rows(Pred&& keep) const {
    std::vector<CouplingRow<T>> rows;
    for (const auto& r : rows_) {
      if (keep(r.x)) rows.push_back(r);
    }
    return Coupling(std::move(rows));
  }

 private:
  std::vector<CouplingRow<T>> rows_;
};

template <Scalar To, Scalar From>
Coupling<To> convert_coupling(const Coupling<From>& p) {
  std::vector<CouplingRow<To>> rows;
  for (const auto& r : p.rows()) rows.push_back({convert_scalar<To>(r.x), convert_measure<To>(r.kernel)});
  return Coupling<To>(std::move(rows));
}

template <Scalar T>
bool operator==(const Coupling<T>& a, const Coupling<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!approx_eq(a.rows()[i].x, b.rows()[i].x) || !(a.rows()[i].kernel == b.rows()[i].kernel)) return false;
  }
  return true;
}

/// Largest absolute difference of cell masses, over the union of supports.
template <Scalar T>
double max_plan_difference(const Coupling<T>& a, const Coupling<T>& b) {
  double worst = 0.0;
  for (const auto& c : a.cells()) worst = std::max(worst, std::fabs(to_double(T(c.w - b.mass_at(c.x, c.y)))));
  for (const auto& c : b.cells()) worst = std::max(worst, std::fabs(to_double(T(c.w - a.mass_at(c.x, c.y)))));
  return worst;
}

template <Scalar T>
T plan_value(const Coupling<T>& p, const auto& reward) {
  T total(0);
  for (const auto& c : p.cells()) total += c.w * T(reward(c.x, c.y));
  return total;
}

template <Scalar T>
Coupling<T> identity_coupling(const DiscreteMeasure<T>& m) {
  std::vector<CouplingRow<T>> rows;
  for (const auto& a : m.atoms()) rows.push_back({a.x, DiscreteMeasure<T>::dirac(a.x, a.w)});
  return Coupling<T>(std::move(rows));
}

// ---------------------------------------------------------------------------
// Canonical supermartingale transports

enum class Direction { Increasing, Decreasing };

inline const char* to_string(Direction d) { return d == Direction::Increasing ? "increasing" : "decreasing"; }

/// Maps each atom of mu, in the given direction, to its shadow in what is
/// left of nu.
template <Scalar T>
Coupling<T> canonical_transport(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu, Direction direction) {
  if (auto violation = convex_decreasing_violation(mu, nu)) {
    throw OrderViolationError(violation->first, "mu <=cd nu fails: " + violation->second);
  }
  std::vector<std::size_t> order(mu.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (direction == Direction::Decreasing) std::reverse(order.begin(), order.end());

  DiscreteMeasure<T> remaining = nu;
  std::vector<CouplingRow<T>> rows;
  for (std::size_t idx : order) {
    const Atom<T>& atom = mu[idx];
    ShadowResult<T> r = shadow_dirac(atom.x, atom.w, remaining);
    remaining = subtract(remaining, r.shadow);
    rows.push_back({atom.x, std::move(r.shadow)});
  }
  return Coupling<T>(std::move(rows));
}

/// Increasing Supermartingale Transport: atoms processed left to right.
template <Scalar T>
Coupling<T> increasing_transport(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  return canonical_transport(mu, nu, Direction::Increasing);
}

/// Decreasing Supermartingale Transport: atoms processed right to left.
template <Scalar T>
Coupling<T> decreasing_transport(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  return canonical_transport(mu, nu, Direction::Decreasing);
}

// ---------------------------------------------------------------------------
// Drift bookkeeping and validation

template <Scalar T>
struct MartingaleClassification {
  std::vector<T> martingale_points;
  std::vector<std::pair<T, T>> drifts;  // (x, bary(kernel(x)) - x) for every row

  bool contains(const T& x) const {
    return std::any_of(martingale_points.begin(), martingale_points.end(),
                       [&](const T& m) { return approx_eq(m, x); });
  }
};

/// Rows whose drift is zero within eps * max(1, |x|) (exact in rational mode).
template <Scalar T>
MartingaleClassification<T> classify_martingale_points(const Coupling<T>& p, double eps = epsilon()) {
  MartingaleClassification<T> out;
  for (const auto& r : p.rows()) {
    T d = r.drift();
    out.drifts.emplace_back(r.x, d);
    if (within(d, T(0), eps, r.x)) out.martingale_points.push_back(r.x);
  }
  return out;
}

/// Checks the marginals against mu, nu and the supermartingale drift sign.
template <Scalar T>
CheckReport validate(const Coupling<T>& p, const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                     double eps = epsilon()) {
  const char* name = "validity";
  DiscreteMeasure<T> first = p.first_marginal();
  if (!(first == mu)) {
    return CheckReport::fail(name, "marginal: first marginal differs from mu (max mass gap " +
                                       shortest_repr(max_mass_difference(first, mu)) + ")");
  }
  DiscreteMeasure<T> second = p.second_marginal();
  if (!(second == nu)) {
    std::vector<std::pair<double, double>> witness;
    for (const auto& y : breakpoints(second, nu)) {
      if (!approx_eq(second.mass_at(y), nu.mass_at(y))) {
        witness.emplace_back(to_double(y), to_double(T(second.mass_at(y) - nu.mass_at(y))));
        break;
      }
    }
    return CheckReport::fail(name, "marginal: second marginal differs from nu (max mass gap " +
                                       shortest_repr(max_mass_difference(second, nu)) + ")",
                             witness);
  }
  for (const auto& r : p.rows()) {
    T d = r.drift();
    if (!at_most(d, T(0), eps, r.x)) {
      return CheckReport::fail(name, "drift: row x=" + format_scalar(r.x) + " has positive drift " + format_scalar(d),
                               {{to_double(r.x), to_double(d)}});
    }
  }
  return CheckReport::ok(name);
}

}  // namespace smt
