#pragma once

// Numeric modes. Every algorithm in the library is a template over the scalar
// type; two instantiations are supported:
//
//   Rational  exact arithmetic, all comparisons exact
//   double    binary64 with a process-wide relative tolerance (default 1e-9)
//
// Comparisons go through the approx_* helpers below so that the same code is
// exact in rational mode and tolerant in float mode.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

#include "smt/error.hpp"

namespace smt {

using Rational = boost::multiprecision::cpp_rational;

namespace detail {
inline double& epsilon_storage() {
  static double eps = 1e-9;
  return eps;
}
}  // namespace detail

/// Float-mode tolerance. Set once at startup (the CLI reads SMT_EPS).
inline double epsilon() { return detail::epsilon_storage(); }

inline void set_epsilon(double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::ParseError, "tolerance must be positive");
  detail::epsilon_storage() = eps;
}

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static const char* name() { return "rational"; }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static const char* name() { return "float"; }
  static double to_double(double v) { return v; }
  static double abs(double v) { return std::fabs(v); }
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <Scalar T>
double to_double(const T& v) {
  return ScalarTraits<T>::to_double(v);
}

template <Scalar T>
T abs_value(const T& v) {
  return ScalarTraits<T>::abs(v);
}

/// Absolute slack allowed when comparing a and b in float mode.
inline double tolerance_for(double a, double b, double eps = epsilon()) {
  return eps * std::max({1.0, std::fabs(a), std::fabs(b)});
}

template <Scalar T>
bool approx_eq(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::exact) {
    return a == b;
  } else {
    return std::fabs(a - b) <= tolerance_for(a, b);
  }
}

template <Scalar T>
bool approx_le(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::exact) {
    return a <= b;
  } else {
    return a <= b + tolerance_for(a, b);
  }
}

/// a < b by more than the tolerance.
template <Scalar T>
bool approx_lt(const T& a, const T& b) {
  return !approx_le(b, a);
}

template <Scalar T>
bool approx_zero(const T& a) {
  return approx_eq(a, T(0));
}

template <Scalar T>
bool approx_positive(const T& a) {
  return approx_lt(T(0), a);
}

/// Comparison with an explicit relative tolerance, eps * max(1, |scale|).
/// Exact in rational mode regardless of eps.
template <Scalar T>
bool within(const T& a, const T& b, double eps, const T& scale = T(1)) {
  if constexpr (ScalarTraits<T>::exact) {
    return a == b;
  } else {
    return std::fabs(a - b) <= eps * std::max(1.0, std::fabs(scale));
  }
}

template <Scalar T>
bool at_most(const T& a, const T& b, double eps, const T& scale = T(1)) {
  if constexpr (ScalarTraits<T>::exact) {
    return a <= b;
  } else {
    return a <= b + eps * std::max(1.0, std::fabs(scale));
  }
}

// ---------------------------------------------------------------------------
// Parsing and formatting

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Decimal literal with optional sign, fraction and exponent, read exactly.
inline Rational parse_decimal(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty number");
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  boost::multiprecision::cpp_int digits = 0;
  long exponent = 0;
  bool seen_digit = false;
  bool in_fraction = false;
  std::size_t i = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      seen_digit = true;
      if (in_fraction) --exponent;
    } else if (c == '.' && !in_fraction) {
      in_fraction = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw Error(ErrorCode::ParseError, "malformed number '" + std::string(text) + "'");
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') {
      throw Error(ErrorCode::ParseError, "malformed number '" + std::string(text) + "'");
    }
    std::string_view e = s.substr(i + 1);
    long value = 0;
    auto [ptr, ec] = std::from_chars(e.data() + (!e.empty() && e.front() == '+' ? 1 : 0),
                                     e.data() + e.size(), value);
    if (ec != std::errc() || ptr != e.data() + e.size()) {
      throw Error(ErrorCode::ParseError, "malformed exponent in '" + std::string(text) + "'");
    }
    exponent += value;
  }
  Rational result(digits);
  boost::multiprecision::cpp_int power = 1;
  for (long k = 0; k < std::labs(exponent); ++k) power *= 10;
  if (exponent >= 0) {
    result *= Rational(power);
  } else {
    result /= Rational(power);
  }
  return negative ? Rational(-result) : result;
}

}  // namespace detail

/// Parses "p/q", integers and decimal literals ("-2.5", "1e-3") exactly.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = detail::trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return detail::parse_decimal(s);
  Rational num = detail::parse_decimal(s.substr(0, slash));
  Rational den = detail::parse_decimal(s.substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  return num / den;
}

/// Shortest decimal text that round-trips the double.
inline std::string shortest_repr(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

/// Exact rational for the decimal a user most plausibly meant (0.1 -> 1/10).
inline Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::ParseError, "non-finite number");
  return parse_rational(shortest_repr(v));
}

template <Scalar T>
T parse_scalar(std::string_view text) {
  if constexpr (std::is_same_v<T, Rational>) {
    return parse_rational(text);
  } else {
    Rational r = parse_rational(text);
    return r.convert_to<double>();
  }
}

template <Scalar T>
T scalar_from_double(double v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return rational_from_double(v);
  } else {
    return v;
  }
}

inline std::string format_scalar(const Rational& v) {
  if (denominator(v) == 1) return numerator(v).str();
  return numerator(v).str() + "/" + denominator(v).str();
}

inline std::string format_scalar(double v) { return shortest_repr(v); }

template <Scalar To, Scalar From>
To convert_scalar(const From& v) {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else if constexpr (std::is_same_v<To, double>) {
    return to_double(v);
  } else {
    return rational_from_double(to_double(v));
  }
}

}  // namespace smt
