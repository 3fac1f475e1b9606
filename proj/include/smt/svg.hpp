#pragma once

// Support plots: source atoms on the top axis, targets on the bottom axis,
// one segment per support pair. Martingale rows are drawn solid black, rows
// with strict drift dashed gray. Coordinates are printed with two decimals so
// the output is byte-stable.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "smt/coupling.hpp"

namespace smt::svg {

struct Style {
  double width = 1200.0;
  double height = 300.0;
  double margin = 40.0;
  double top = 60.0;
  double bottom = 240.0;
  std::string martingale_stroke = "#000000";
  std::string drift_stroke = "#888888";
  std::string dash = "4 3";
  double stroke_width = 0.8;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

}  // namespace detail

template <Scalar T>
std::string render_coupling(const Coupling<T>& p, const std::string& title = "", const Style& style = {},
                            double eps = epsilon()) {
  std::vector<double> all;
  for (const auto& c : p.cells()) {
    all.push_back(to_double(c.x));
    all.push_back(to_double(c.y));
  }
  double lo = all.empty() ? 0.0 : *std::min_element(all.begin(), all.end());
  double hi = all.empty() ? 1.0 : *std::max_element(all.begin(), all.end());
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double span = style.width - 2 * style.margin;
  auto X = [&](double v) { return style.margin + (v - lo) / (hi - lo) * span; };
  using detail::num;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + num(style.width) + " " + num(style.height) +
         "\" width=\"" + num(style.width) + "\" height=\"" + num(style.height) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(style.width) + "\" height=\"" + num(style.height) +
         "\" fill=\"#ffffff\"/>\n";
  if (!title.empty()) {
    out += "<text x=\"" + num(style.margin) + "\" y=\"24.00\" font-family=\"sans-serif\" font-size=\"14\">" + title +
           "</text>\n";
  }
  out += "<text x=\"" + num(style.width - style.margin + 8) + "\" y=\"" + num(style.top + 4) +
         "\" font-family=\"sans-serif\" font-size=\"12\">x</text>\n";
  out += "<text x=\"" + num(style.width - style.margin + 8) + "\" y=\"" + num(style.bottom + 4) +
         "\" font-family=\"sans-serif\" font-size=\"12\">y</text>\n";
  for (double y : {style.top, style.bottom}) {
    out += "<line x1=\"" + num(style.margin) + "\" y1=\"" + num(y) + "\" x2=\"" + num(style.width - style.margin) +
           "\" y2=\"" + num(y) + "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  }

  out += "<g id=\"ticks\" stroke=\"#000000\" stroke-width=\"0.5\">\n";
  for (const auto& r : p.rows()) {
    double x = X(to_double(r.x));
    out += "<line x1=\"" + num(x) + "\" y1=\"" + num(style.top - 5) + "\" x2=\"" + num(x) + "\" y2=\"" +
           num(style.top) + "\"/>\n";
  }
  const DiscreteMeasure<T> targets = p.second_marginal();
  for (const auto& a : targets.atoms()) {
    double y = X(to_double(a.x));
    out += "<line x1=\"" + num(y) + "\" y1=\"" + num(style.bottom) + "\" x2=\"" + num(y) + "\" y2=\"" +
           num(style.bottom + 5) + "\"/>\n";
  }
  out += "</g>\n";

  std::string solid;
  std::string dashed;
  for (const auto& r : p.rows()) {
    const bool martingale = within(r.drift(), T(0), eps, r.x);
    std::string& target = martingale ? solid : dashed;
    double x = X(to_double(r.x));
    for (const auto& a : r.kernel.atoms()) {
      target += "<line x1=\"" + num(x) + "\" y1=\"" + num(style.top) + "\" x2=\"" + num(X(to_double(a.x))) +
                "\" y2=\"" + num(style.bottom) + "\"/>\n";
    }
  }
  out += "<g id=\"drift\" stroke=\"" + style.drift_stroke + "\" stroke-width=\"" + num(style.stroke_width) +
         "\" stroke-dasharray=\"" + style.dash + "\">\n" + dashed + "</g>\n";
  out += "<g id=\"martingale\" stroke=\"" + style.martingale_stroke + "\" stroke-width=\"" + num(style.stroke_width) +
         "\">\n" + solid + "</g>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace smt::svg
