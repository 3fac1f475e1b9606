#pragma once

// Shadow S^nu(mu): the <=cd-least theta with mu <=cd theta <= nu.
//
// For a Dirac k delta_x the candidates are the quantile windows
//
//     theta_s = nu restricted to the mass slice (s, s + k],   s in [0, nu(R) - k],
//
// whose first moment m(s) = int_s^{s+k} G_nu(u) du is nondecreasing and
// piecewise linear in s, with kinks where either end of the slice crosses a
// cumulative mass of nu. The shadow is theta_{s*} for the largest s* with
// m(s*) <= k x; s* is found by a search over the kinks followed by one linear
// solve on the last segment. General atomic mu is handled by peeling off one
// atom at a time and taking shadows in the remainder of nu.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "smt/error.hpp"
#include "smt/measure.hpp"

namespace smt {

template <Scalar T>
struct ShadowResult {
  DiscreteMeasure<T> shadow;
  T s_star{};
  Interval<T> window;  // (a, b) with a <= x <= b; shadow = nu on (a, b) plus atoms at a and b
};

namespace detail {

template <Scalar T>
class QuantileSlices {
 public:
  QuantileSlices(const DiscreteMeasure<T>& nu, T k) : nu_(nu), k_(std::move(k)) {
    cumulative_.reserve(nu.size() + 1);
    cumulative_.push_back(T(0));
    for (const auto& a : nu.atoms()) cumulative_.push_back(cumulative_.back() + a.w);
  }

  const T& total() const { return cumulative_.back(); }

  T overlap(std::size_t j, const T& s) const {
    const T& lo = cumulative_[j];
    const T& hi = cumulative_[j + 1];
    T end = s + k_;
    T left = lo > s ? lo : s;
    T right = hi < end ? hi : end;
    return right > left ? T(right - left) : T(0);
  }

  /// First moment of the slice (s, s + k].
  T moment(const T& s) const {
    T total(0);
    for (std::size_t j = 0; j < nu_.size(); ++j) {
      T w = overlap(j, s);
      if (w > T(0)) total += w * nu_[j].x;
    }
    return total;
  }

  DiscreteMeasure<T> slice(const T& s) const {
    std::vector<Atom<T>> atoms;
    for (std::size_t j = 0; j < nu_.size(); ++j) {
      T w = overlap(j, s);
      if (approx_positive(w)) atoms.push_back({nu_[j].x, w});
    }
    return DiscreteMeasure<T>(std::move(atoms));
  }

  /// Offsets in [0, total - k] where m(s) has a kink, plus both ends.
  std::vector<T> kinks() const {
    T last = total() - k_;
    std::vector<T> points{T(0), last};
    for (const auto& c : cumulative_) {
      if (c > T(0) && c < last) points.push_back(c);
      T shifted = c - k_;
      if (shifted > T(0) && shifted < last) points.push_back(shifted);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
  }

 private:
  const DiscreteMeasure<T>& nu_;
  T k_;
  std::vector<T> cumulative_;
};

}  // namespace detail

/// Shadow of k delta_x in nu. Throws ShadowInfeasibleError unless
/// k delta_x <=pcd nu.
template <Scalar T>
ShadowResult<T> shadow_dirac(const T& x, const T& k, const DiscreteMeasure<T>& nu) {
  if (k < T(0)) throw Error(ErrorCode::NegativeMass, "negative Dirac mass " + format_scalar(k));
  if (approx_zero(k)) return {DiscreteMeasure<T>{}, T(0), Interval<T>::open(x, x)};

  T available = nu.mass();
  if (!approx_le(k, available)) {
    throw ShadowInfeasibleError(to_double(T(k - available)),
                                "mass " + format_scalar(k) + " exceeds available mass " + format_scalar(available));
  }
  T kk = k < available ? k : available;

  detail::QuantileSlices<T> slices(nu, kk);
  const T target = kk * x;
  std::vector<T> kinks = slices.kinks();

  T start_moment = slices.moment(kinks.front());
  if (!approx_le(start_moment, target)) {
    T slack = start_moment / kk - x;
    throw ShadowInfeasibleError(to_double(slack), "leftmost slice has barycenter " +
                                                      format_scalar(T(start_moment / kk)) + " > " + format_scalar(x) +
                                                      " (slack " + format_scalar(slack) + ")");
  }

  T s_star;
  if (approx_le(slices.moment(kinks.back()), target)) {
    s_star = kinks.back();
  } else {
    // Largest kink with moment <= target; the next one exceeds it.
    std::size_t lo = 0;
    std::size_t hi = kinks.size() - 1;
    while (hi - lo > 1) {
      std::size_t mid = lo + (hi - lo) / 2;
      if (approx_le(slices.moment(kinks[mid]), target)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    T m_lo = slices.moment(kinks[lo]);
    T m_hi = slices.moment(kinks[hi]);
    T slope = (m_hi - m_lo) / (kinks[hi] - kinks[lo]);
    s_star = kinks[lo] + (target - m_lo) / slope;
    if (s_star < kinks[lo]) s_star = kinks[lo];
    if (s_star > kinks[hi]) s_star = kinks[hi];
  }

  ShadowResult<T> result;
  result.shadow = slices.slice(s_star);
  result.s_star = s_star;
  T a = quantile(nu, s_star);
  T b = quantile(nu, T(s_star + kk));
  // Only possible when nu has no mass right of b; the window is widened for
  // reporting, the measure is unchanged.
  if (b < x) b = x;
  result.window = Interval<T>::open(a, b);
  return result;
}

/// Shadow of mu in nu, processing the atoms of mu in the given index order.
template <Scalar T>
DiscreteMeasure<T> shadow_in_order(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                                   const std::vector<std::size_t>& order) {
  DiscreteMeasure<T> remaining = nu;
  std::vector<Atom<T>> collected;
  for (std::size_t idx : order) {
    const Atom<T>& atom = mu[idx];
    ShadowResult<T> r = shadow_dirac(atom.x, atom.w, remaining);
    remaining = subtract(remaining, r.shadow);
    collected.insert(collected.end(), r.shadow.atoms().begin(), r.shadow.atoms().end());
  }
  return DiscreteMeasure<T>(std::move(collected));
}

/// Shadow of mu in nu; atoms of mu are processed by increasing location.
template <Scalar T>
DiscreteMeasure<T> shadow(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  if (!leq_pcd(mu, nu)) {
    auto t = put_dominance_violation(mu, nu);
    double where = t ? to_double(*t) : 0.0;
    throw ShadowInfeasibleError(where, "mu is not <=pcd nu" +
                                           (t ? " (put functions cross at " + format_scalar(*t) + ")"
                                              : std::string(" (mass exceeds nu)")));
  }
  std::vector<std::size_t> order(mu.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return shadow_in_order(mu, nu, order);
}

}  // namespace smt
