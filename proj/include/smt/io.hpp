#pragma once

// Text formats.
//
//   measure   {"atoms":[{"x": -1, "w": "1/3"}, ...]}   or CSV lines  x,w
//   coupling  {"rows":[{"x": -1, "kernel":[{"y": 2, "w": "1/9"}, ...]}, ...]}
//             or CSV lines  x,y,w
//   density   {"density":[{"a": -1, "b": 1, "mass": "1/2"}, ...], "n": 200}
//
// Numbers may be JSON numbers or rational strings ("7/27", "-2.5"). Output
// is deterministic: keys in a fixed order, rationals as integers or "p/q"
// strings, floats with 17 significant digits.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "smt/coupling.hpp"
#include "smt/error.hpp"
#include "smt/measure.hpp"
#include "smt/report.hpp"
#include "smt/scalar.hpp"

namespace smt::io {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scalars

template <Scalar T>
Json to_json(const T& v) {
  if constexpr (ScalarTraits<T>::exact) {
    if (denominator(v) == 1 && boost::multiprecision::abs(numerator(v)) < (std::int64_t{1} << 53)) {
      return Json(numerator(v).template convert_to<std::int64_t>());
    }
    return Json(format_scalar(v));
  } else {
    return Json(v);
  }
}

template <Scalar T>
T scalar_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) return parse_scalar<T>(j.get<std::string>());
  if (j.is_number_integer()) return T(j.get<std::int64_t>());
  if (j.is_number_float()) return scalar_from_double<T>(j.get<double>());
  throw Error(ErrorCode::ParseError, where + ": expected a number or a rational string");
}

inline std::string format_double17(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <Scalar T>
std::string format_value(const T& v) {
  if constexpr (ScalarTraits<T>::exact) {
    return format_scalar(v);
  } else {
    return format_double17(v);
  }
}

namespace detail {

inline void dump(const Json& j, std::string& out, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump(e, out, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_double17(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

/// Serializes with fixed key order and 17-digit floats.
inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::dump(j, out, indent, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

inline bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' || c == '[';
  }
  return false;
}

inline Json parse_json(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, where + ": " + e.what());
  }
}

/// Non-empty, non-comment CSV lines split on commas. A first line whose
/// first field is not numeric is taken as a header and skipped.
inline std::vector<std::vector<std::string>> csv_records(const std::string& text, std::size_t fields,
                                                         const std::string& where) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view t = smt::detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> rec;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = t.find(',', start);
      rec.emplace_back(smt::detail::trim(t.substr(start, comma == std::string_view::npos ? t.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (out.empty() && !rec.empty() && !rec[0].empty() &&
        !(std::isdigit(static_cast<unsigned char>(rec[0][0])) || rec[0][0] == '-' || rec[0][0] == '+' ||
          rec[0][0] == '.')) {
      continue;
    }
    if (rec.size() != fields) {
      throw Error(ErrorCode::ParseError, where + ":" + std::to_string(lineno) + ": expected " +
                                             std::to_string(fields) + " fields");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Measures

template <Scalar T>
Json measure_to_json(const DiscreteMeasure<T>& m) {
  Json atoms = Json::array();
  for (const auto& a : m.atoms()) atoms.push_back(Json{{"x", to_json(a.x)}, {"w", to_json(a.w)}});
  return Json{{"atoms", atoms}};
}

template <Scalar T>
DiscreteMeasure<T> measure_from_json(const Json& j, const std::string& where = "measure") {
  const Json* list = &j;
  if (j.is_object()) {
    if (!j.contains("atoms")) throw Error(ErrorCode::ParseError, where + ": missing \"atoms\"");
    list = &j.at("atoms");
  }
  if (!list->is_array()) throw Error(ErrorCode::ParseError, where + ": \"atoms\" must be an array");
  std::vector<Atom<T>> atoms;
  for (const auto& a : *list) {
    if (!a.is_object() || !a.contains("x") || !a.contains("w")) {
      throw Error(ErrorCode::ParseError, where + ": every atom needs \"x\" and \"w\"");
    }
    atoms.push_back({scalar_from_json<T>(a.at("x"), where), scalar_from_json<T>(a.at("w"), where)});
  }
  return DiscreteMeasure<T>(std::move(atoms));
}

template <Scalar T>
DiscreteMeasure<T> measure_from_csv(const std::string& text, const std::string& where = "measure") {
  std::vector<Atom<T>> atoms;
  for (const auto& rec : csv_records(text, 2, where)) atoms.push_back({parse_scalar<T>(rec[0]), parse_scalar<T>(rec[1])});
  return DiscreteMeasure<T>(std::move(atoms));
}

template <Scalar T>
std::string measure_to_csv(const DiscreteMeasure<T>& m) {
  std::string out = "x,w\n";
  for (const auto& a : m.atoms()) out += format_value(a.x) + "," + format_value(a.w) + "\n";
  return out;
}

template <Scalar T>
DiscreteMeasure<T> measure_from_text(const std::string& text, const std::string& where = "measure") {
  if (looks_like_json(text)) return measure_from_json<T>(parse_json(text, where), where);
  return measure_from_csv<T>(text, where);
}

// ---------------------------------------------------------------------------
// Piecewise-uniform densities

template <Scalar T>
struct UniformPiece {
  T a;
  T b;
  T mass;
};

template <Scalar T>
struct DensitySpec {
  std::vector<UniformPiece<T>> pieces;
  int n = 0;
};

template <Scalar T>
DensitySpec<T> density_from_json(const Json& j, const std::string& where = "density") {
  if (!j.is_object() || !j.contains("density")) throw Error(ErrorCode::ParseError, where + ": missing \"density\"");
  DensitySpec<T> spec;
  for (const auto& p : j.at("density")) {
    if (!p.contains("a") || !p.contains("b") || !p.contains("mass")) {
      throw Error(ErrorCode::ParseError, where + ": every piece needs \"a\", \"b\" and \"mass\"");
    }
    spec.pieces.push_back(
        {scalar_from_json<T>(p.at("a"), where), scalar_from_json<T>(p.at("b"), where), scalar_from_json<T>(p.at("mass"), where)});
  }
  if (j.contains("n")) spec.n = j.at("n").get<int>();
  return spec;
}

/// n atoms of equal mass, each at the barycenter of its mass slice. Pieces
/// are uniform on [a, b] with the given total mass and must not overlap.
template <Scalar T>
DiscreteMeasure<T> discretize(std::vector<UniformPiece<T>> pieces, int n) {
  if (n <= 0) throw Error(ErrorCode::OutOfRange, "discretization count must be positive");
  std::sort(pieces.begin(), pieces.end(), [](const auto& p, const auto& q) { return p.a < q.a; });
  T total(0);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (p.mass < T(0)) throw Error(ErrorCode::NegativeMass, "piece mass " + format_scalar(p.mass));
    if (!(p.a < p.b)) throw Error(ErrorCode::OutOfRange, "piece [" + format_scalar(p.a) + ", " + format_scalar(p.b) + "] is empty");
    if (i > 0 && pieces[i - 1].b > p.a) throw Error(ErrorCode::OutOfRange, "density pieces overlap");
    total += p.mass;
  }
  if (!(total > T(0))) return {};
  const T slice = total / T(n);
  std::vector<Atom<T>> atoms;
  std::size_t k = 0;
  T used(0);  // mass of piece k already assigned
  for (int s = 0; s < n; ++s) {
    T need = slice;
    T moment(0);
    while (need > T(0) && k < pieces.size()) {
      const auto& p = pieces[k];
      T left = p.mass - used;
      T take = left < need ? left : need;
      if (take > T(0)) {
        T width = p.b - p.a;
        T u = p.a + width * used / p.mass;
        T v = p.a + width * (used + take) / p.mass;
        moment += take * (u + v) / T(2);
        used += take;
        need -= take;
      }
      if (!(used < p.mass) || approx_zero(T(p.mass - used))) {
        ++k;
        used = T(0);
      }
    }
    T got = slice - need;
    if (got > T(0)) atoms.push_back({moment / got, got});
  }
  return DiscreteMeasure<T>(std::move(atoms));
}

template <Scalar T>
DiscreteMeasure<T> discretize(const DensitySpec<T>& spec, int n_override = 0) {
  return discretize(spec.pieces, n_override > 0 ? n_override : spec.n);
}

/// A measure file, or a density file discretized with `n` atoms (or its own n).
template <Scalar T>
DiscreteMeasure<T> load_marginal(const std::string& path, int n = 0) {
  std::string text = read_file(path);
  if (looks_like_json(text)) {
    Json j = parse_json(text, path);
    if (j.is_object() && j.contains("density")) return discretize(density_from_json<T>(j, path), n);
    return measure_from_json<T>(j, path);
  }
  return measure_from_csv<T>(text, path);
}

// ---------------------------------------------------------------------------
// Couplings

template <Scalar T>
Json coupling_to_json(const Coupling<T>& p, double eps = epsilon()) {
  Json rows = Json::array();
  for (const auto& r : p.rows()) {
    Json kernel = Json::array();
    for (const auto& a : r.kernel.atoms()) kernel.push_back(Json{{"y", to_json(a.x)}, {"w", to_json(a.w)}});
    T d = r.drift();
    rows.push_back(Json{{"x", to_json(r.x)},
                        {"drift", to_json(d)},
                        {"martingale", within(d, T(0), eps, r.x)},
                        {"kernel", kernel}});
  }
  return Json{{"rows", rows}};
}

template <Scalar T>
Coupling<T> coupling_from_json(const Json& j, const std::string& where = "coupling") {
  if (j.is_object() && !j.contains("rows") && j.contains("coupling")) return coupling_from_json<T>(j.at("coupling"), where);
  if (!j.is_object() || !j.contains("rows") || !j.at("rows").is_array()) {
    throw Error(ErrorCode::ParseError, where + ": missing \"rows\"");
  }
  std::vector<CouplingRow<T>> rows;
  for (const auto& r : j.at("rows")) {
    if (!r.contains("x") || !r.contains("kernel")) throw Error(ErrorCode::ParseError, where + ": row needs \"x\" and \"kernel\"");
    std::vector<Atom<T>> atoms;
    for (const auto& a : r.at("kernel")) {
      if (!a.contains("y") || !a.contains("w")) throw Error(ErrorCode::ParseError, where + ": kernel entry needs \"y\" and \"w\"");
      atoms.push_back({scalar_from_json<T>(a.at("y"), where), scalar_from_json<T>(a.at("w"), where)});
    }
    rows.push_back({scalar_from_json<T>(r.at("x"), where), DiscreteMeasure<T>(std::move(atoms))});
  }
  return Coupling<T>(std::move(rows));
}

template <Scalar T>
std::string coupling_to_csv(const Coupling<T>& p) {
  std::string out = "x,y,w\n";
  for (const auto& c : p.cells()) out += format_value(c.x) + "," + format_value(c.y) + "," + format_value(c.w) + "\n";
  return out;
}

template <Scalar T>
Coupling<T> coupling_from_text(const std::string& text, const std::string& where = "coupling") {
  if (looks_like_json(text)) return coupling_from_json<T>(parse_json(text, where), where);
  std::vector<Cell<T>> cells;
  for (const auto& rec : csv_records(text, 3, where)) {
    cells.push_back({parse_scalar<T>(rec[0]), parse_scalar<T>(rec[1]), parse_scalar<T>(rec[2])});
  }
  return Coupling<T>::from_cells(cells);
}

// ---------------------------------------------------------------------------
// Reports

inline Json report_to_json(const CheckReport& r) {
  Json j{{"check", r.check}, {"pass", r.pass}};
  if (!r.pass) {
    j["message"] = r.message;
    Json w = Json::array();
    for (const auto& [a, b] : r.witness) w.push_back(Json::array({a, b}));
    j["witness"] = w;
  }
  return j;
}

template <Scalar T>
Json interval_to_json(const Interval<T>& i) {
  Json j = Json::object();
  j["lo"] = i.lo ? to_json(*i.lo) : Json(nullptr);
  j["hi"] = i.hi ? to_json(*i.hi) : Json(nullptr);
  j["lo_closed"] = i.lo_closed;
  j["hi_closed"] = i.hi_closed;
  j["text"] = i.to_string();
  return j;
}

}  // namespace smt::io
