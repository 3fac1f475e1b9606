#pragma once

// Finite atomic measures on the real line.
//
// Order tests on a finite grid. For atomic a, b the put functions p_a, p_b
// are piecewise linear with kinks only at atoms, both vanish left of the
// smallest atom, and right of the largest atom
//
//     p_b(t) - p_a(t) = (b(R) - a(R)) t - (b(R) bary(b) - a(R) bary(a)),
//
// which is affine with slope b(R) - a(R). Hence
//
//   * p_a <= p_b everywhere  <=>  p_a <= p_b at every atom of a and b, given
//     a(R) <= b(R) (the tail is then nondecreasing from its value at the last
//     atom);
//   * for a(R) = b(R) the tail is the constant a(R) [bary(a) - bary(b)], so
//     a <=cd b  <=>  equal masses, p_a <= p_b on the atom grid, and
//     bary(a) >= bary(b).
//
// For <=pcd the test functions are the nonnegative convex decreasing phi.
// Each such phi on an interval containing all atoms is a nonnegative
// combination of the constant 1 and hinges (t - .)^+, so a <=pcd b reduces to
// a(R) <= b(R) together with p_a <= p_b, again decided on the atom grid.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smt/error.hpp"
#include "smt/scalar.hpp"

namespace smt {

template <Scalar T>
struct Atom {
  T x;
  T w;
};

/// Extended real: -inf, a finite value, or +inf.
template <Scalar T>
struct Extended {
  enum class Kind { NegInf, Finite, PosInf };
  Kind kind = Kind::Finite;
  T value{};

  static Extended neg_inf() { return {Kind::NegInf, T(0)}; }
  static Extended pos_inf() { return {Kind::PosInf, T(0)}; }
  static Extended finite(T v) { return {Kind::Finite, std::move(v)}; }

  bool is_finite() const { return kind == Kind::Finite; }
  bool is_neg_inf() const { return kind == Kind::NegInf; }
  bool is_pos_inf() const { return kind == Kind::PosInf; }

  bool less_than(const T& x) const {
    return kind == Kind::NegInf || (kind == Kind::Finite && value < x);
  }
  bool greater_than(const T& x) const {
    return kind == Kind::PosInf || (kind == Kind::Finite && value > x);
  }

  std::string to_string() const {
    if (kind == Kind::NegInf) return "-inf";
    if (kind == Kind::PosInf) return "inf";
    return format_scalar(value);
  }
};

/// Interval with optional (infinite) endpoints; infinite endpoints are open.
template <Scalar T>
struct Interval {
  std::optional<T> lo;  // nullopt: -inf
  std::optional<T> hi;  // nullopt: +inf
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval all() { return {}; }
  static Interval open(T a, T b) { return {std::move(a), std::move(b), false, false}; }
  static Interval closed(T a, T b) { return {std::move(a), std::move(b), true, true}; }
  static Interval at_most(T b) { return {std::nullopt, std::move(b), false, true}; }
  static Interval less_than(T b) { return {std::nullopt, std::move(b), false, false}; }
  static Interval at_least(T a) { return {std::move(a), std::nullopt, true, false}; }
  static Interval greater_than(T a) { return {std::move(a), std::nullopt, false, false}; }

  bool contains(const T& x) const {
    if (lo) {
      if (lo_closed ? x < *lo : x <= *lo) return false;
    }
    if (hi) {
      if (hi_closed ? x > *hi : x >= *hi) return false;
    }
    return true;
  }

  bool empty() const {
    if (!lo || !hi) return false;
    if (*lo < *hi) return false;
    return !(*lo == *hi && lo_closed && hi_closed);
  }

  std::string to_string() const {
    std::string s = lo_closed && lo ? "[" : "(";
    s += lo ? format_scalar(*lo) : "-inf";
    s += ", ";
    s += hi ? format_scalar(*hi) : "inf";
    s += hi_closed && hi ? "]" : ")";
    return s;
  }
};

/// Finite nonnegative atomic measure. Atoms are kept sorted by location with
/// strictly positive masses; in float mode locations closer than the
/// tolerance are merged at construction.
template <Scalar T>
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  explicit DiscreteMeasure(std::vector<Atom<T>> atoms) {
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom<T>& a, const Atom<T>& b) { return a.x < b.x; });
    for (auto& atom : atoms) {
      if (atom.w < T(0)) {
        if (approx_zero(atom.w)) continue;
        throw Error(ErrorCode::NegativeMass, "atom at " + format_scalar(atom.x) + " has mass " +
                                                 format_scalar(atom.w));
      }
      if (!atoms_.empty() && approx_eq(atoms_.back().x, atom.x)) {
        Atom<T>& last = atoms_.back();
        T total = last.w + atom.w;
        if constexpr (!ScalarTraits<T>::exact) {
          if (total > 0) last.x = (last.x * last.w + atom.x * atom.w) / total;
        }
        last.w = total;
        continue;
      }
      atoms_.push_back(std::move(atom));
    }
    std::erase_if(atoms_, [](const Atom<T>& a) {
      if constexpr (ScalarTraits<T>::exact) {
        return a.w == 0;
      } else {
        return a.w <= 0.0;
      }
    });
  }

  static DiscreteMeasure dirac(T x, T w = T(1)) {
    return DiscreteMeasure(std::vector<Atom<T>>{{std::move(x), std::move(w)}});
  }

  /// Equal masses w on each location.
  static DiscreteMeasure uniform(const std::vector<T>& xs, T total = T(1)) {
    std::vector<Atom<T>> atoms;
    T w = total / T(static_cast<long>(xs.size()));
    for (const auto& x : xs) atoms.push_back({x, w});
    return DiscreteMeasure(std::move(atoms));
  }

  std::span<const Atom<T>> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Atom<T>& operator[](std::size_t i) const { return atoms_[i]; }

  T mass() const {
    T total(0);
    for (const auto& a : atoms_) total += a.w;
    return total;
  }

  T first_moment() const {
    T total(0);
    for (const auto& a : atoms_) total += a.x * a.w;
    return total;
  }

  /// Mass of the atom at x (zero if x is not an atom).
  T mass_at(const T& x) const {
    for (const auto& a : atoms_) {
      if (approx_eq(a.x, x)) return a.w;
    }
    return T(0);
  }

  std::vector<T> locations() const {
    std::vector<T> xs;
    xs.reserve(atoms_.size());
    for (const auto& a : atoms_) xs.push_back(a.x);
    return xs;
  }

 private:
  std::vector<Atom<T>> atoms_;
};

template <Scalar T>
bool operator==(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!approx_eq(a[i].x, b[i].x) || !approx_eq(a[i].w, b[i].w)) return false;
  }
  return true;
}

template <Scalar To, Scalar From>
DiscreteMeasure<To> convert_measure(const DiscreteMeasure<From>& m) {
  std::vector<Atom<To>> atoms;
  for (const auto& a : m.atoms()) {
    atoms.push_back({convert_scalar<To>(a.x), convert_scalar<To>(a.w)});
  }
  return DiscreteMeasure<To>(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Functions of a single measure

/// p(t) = sum_i w_i (t - x_i)^+.
template <Scalar T>
T put_value(const DiscreteMeasure<T>& m, const T& t) {
  T total(0);
  for (const auto& a : m.atoms()) {
    if (a.x < t) total += a.w * (t - a.x);
  }
  return total;
}

/// u(t) = sum_i w_i |t - x_i|.
template <Scalar T>
T potential_u(const DiscreteMeasure<T>& m, const T& t) {
  T total(0);
  for (const auto& a : m.atoms()) total += a.w * abs_value(T(t - a.x));
  return total;
}

/// Mass-weighted mean; 0 for the zero measure.
template <Scalar T>
T barycenter(const DiscreteMeasure<T>& m) {
  T mass = m.mass();
  if (m.empty() || mass == T(0)) return T(0);
  return m.first_moment() / mass;
}

/// Left-continuous inverse of the cumulative mass function. s = 0 returns the
/// smallest atom.
template <Scalar T>
T quantile(const DiscreteMeasure<T>& m, const T& s) {
  if (m.empty()) throw Error(ErrorCode::OutOfRange, "quantile of the zero measure");
  if (s <= T(0)) return m[0].x;
  T cumulative(0);
  for (const auto& a : m.atoms()) {
    cumulative += a.w;
    if (approx_le(s, cumulative)) return a.x;
  }
  throw Error(ErrorCode::OutOfRange,
              "quantile level " + format_scalar(s) + " exceeds total mass " + format_scalar(cumulative));
}

// ---------------------------------------------------------------------------
// Measure algebra

template <Scalar T>
DiscreteMeasure<T> restrict(const DiscreteMeasure<T>& m, const Interval<T>& interval) {
  std::vector<Atom<T>> atoms;
  for (const auto& a : m.atoms()) {
    if (interval.contains(a.x)) atoms.push_back(a);
  }
  return DiscreteMeasure<T>(std::move(atoms));
}

template <Scalar T>
DiscreteMeasure<T> add(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  std::vector<Atom<T>> atoms(a.atoms().begin(), a.atoms().end());
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  return DiscreteMeasure<T>(std::move(atoms));
}

template <Scalar T>
DiscreteMeasure<T> scale(const DiscreteMeasure<T>& m, const T& factor) {
  std::vector<Atom<T>> atoms;
  for (const auto& a : m.atoms()) atoms.push_back({a.x, a.w * factor});
  return DiscreteMeasure<T>(std::move(atoms));
}

namespace detail {

// Walks the atoms of a and b in location order, calling fn(x, wa, wb) once per
// distinct location (a zero weight where a measure has no atom).
template <Scalar T, class Fn>
void merge_walk(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b, Fn&& fn) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && !approx_eq(a[i].x, b[j].x) && a[i].x < b[j].x)) {
      fn(a[i].x, a[i].w, T(0));
      ++i;
    } else if (i == a.size() || (!approx_eq(a[i].x, b[j].x) && b[j].x < a[i].x)) {
      fn(b[j].x, T(0), b[j].w);
      ++j;
    } else {
      fn(a[i].x, a[i].w, b[j].w);
      ++i;
      ++j;
    }
  }
}

}  // namespace detail

/// a - b; requires b <= a atomwise (float mode tolerates and clamps tiny
/// negatives).
template <Scalar T>
DiscreteMeasure<T> subtract(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  std::vector<Atom<T>> atoms;
  detail::merge_walk(a, b, [&](const T& x, const T& wa, const T& wb) {
    T diff = wa - wb;
    if (diff < T(0)) {
      if (!approx_le(wb, wa)) {
        throw Error(ErrorCode::NegativeMass, "subtraction leaves mass " + format_scalar(diff) +
                                                 " at " + format_scalar(x));
      }
      return;
    }
    if constexpr (!ScalarTraits<T>::exact) {
      if (approx_eq(wa, wb)) return;
    }
    atoms.push_back({x, diff});
  });
  return DiscreteMeasure<T>(std::move(atoms));
}

/// Atomwise minimum a ^ b.
template <Scalar T>
DiscreteMeasure<T> min(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  std::vector<Atom<T>> atoms;
  detail::merge_walk(a, b, [&](const T& x, const T& wa, const T& wb) {
    T w = wa < wb ? wa : wb;
    if (w > T(0)) atoms.push_back({x, w});
  });
  return DiscreteMeasure<T>(std::move(atoms));
}

/// a <= b atomwise (setwise order of measures).
template <Scalar T>
bool leq_setwise(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  bool ok = true;
  detail::merge_walk(a, b, [&](const T&, const T& wa, const T& wb) {
    if (!approx_le(wa, wb)) ok = false;
  });
  return ok;
}

/// Largest absolute difference in mass over all locations, as a double.
template <Scalar T>
double max_mass_difference(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  double worst = 0.0;
  detail::merge_walk(a, b, [&](const T&, const T& wa, const T& wb) {
    worst = std::max(worst, std::fabs(to_double(T(wa - wb))));
  });
  return worst;
}

/// Sorted union of the atom locations of a and b.
template <Scalar T>
std::vector<T> breakpoints(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  std::vector<T> grid;
  detail::merge_walk(a, b, [&](const T& x, const T&, const T&) { grid.push_back(x); });
  return grid;
}

// ---------------------------------------------------------------------------
// Stochastic orders

/// First grid location t with p_a(t) > p_b(t), if any.
template <Scalar T>
std::optional<T> put_dominance_violation(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  for (const auto& t : breakpoints(a, b)) {
    if (!approx_le(put_value(a, t), put_value(b, t))) return t;
  }
  return std::nullopt;
}

/// Why a <=cd b fails, or nullopt when it holds.
template <Scalar T>
std::optional<std::pair<double, std::string>> convex_decreasing_violation(const DiscreteMeasure<T>& a,
                                                                          const DiscreteMeasure<T>& b) {
  if (!approx_eq(a.mass(), b.mass())) {
    return std::pair{0.0, "total masses differ: " + format_scalar(a.mass()) + " vs " + format_scalar(b.mass())};
  }
  if (auto t = put_dominance_violation(a, b)) {
    return std::pair{to_double(*t), "p_mu(" + format_scalar(*t) + ") = " + format_scalar(put_value(a, *t)) +
                                        " > p_nu(" + format_scalar(*t) + ") = " + format_scalar(put_value(b, *t))};
  }
  if (!approx_le(barycenter(b), barycenter(a))) {
    return std::pair{to_double(barycenter(a)), "bary(mu) = " + format_scalar(barycenter(a)) +
                                                   " < bary(nu) = " + format_scalar(barycenter(b))};
  }
  return std::nullopt;
}

/// a <=cd b: a(phi) <= b(phi) for every convex nonincreasing phi.
template <Scalar T>
bool leq_convex_decreasing(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  return !convex_decreasing_violation(a, b).has_value();
}

/// a <=c b: convex-decreasing order plus equal barycenters.
template <Scalar T>
bool leq_convex(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  return leq_convex_decreasing(a, b) && approx_eq(barycenter(a), barycenter(b));
}

/// a <=pcd b: a(phi) <= b(phi) for every nonnegative convex nonincreasing phi.
template <Scalar T>
bool leq_pcd(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  if (!approx_le(a.mass(), b.mass())) return false;
  return !put_dominance_violation(a, b).has_value();
}

/// Kantorovich distance between measures of equal mass, integrating the
/// absolute quantile difference over the merged cdf breakpoints.
template <Scalar T>
T wasserstein1(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  if (!approx_eq(a.mass(), b.mass())) {
    throw Error(ErrorCode::MassMismatch,
                "wasserstein1 needs equal masses, got " + format_scalar(a.mass()) + " and " + format_scalar(b.mass()));
  }
  T total(0);
  std::size_t i = 0;
  std::size_t j = 0;
  T left_a = a.empty() ? T(0) : a[0].w;
  T left_b = b.empty() ? T(0) : b[0].w;
  while (i < a.size() && j < b.size()) {
    T step = left_a < left_b ? left_a : left_b;
    total += step * abs_value(T(a[i].x - b[j].x));
    left_a -= step;
    left_b -= step;
    if (approx_zero(left_a)) {
      if (++i < a.size()) left_a = a[i].w;
    }
    if (approx_zero(left_b)) {
      if (++j < b.size()) left_b = b[j].w;
    }
  }
  return total;
}

}  // namespace smt
