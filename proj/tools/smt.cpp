// smt: supermartingale transport from the command line.
//
// Machine-readable JSON goes to stdout, prose to stderr.
// Exit codes: 0 pass, 1 check failed, 2 input error, 3 solver error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smt/coupling.hpp"
#include "smt/geometry.hpp"
#include "smt/io.hpp"
#include "smt/measure.hpp"
#include "smt/reward.hpp"
#include "smt/shadow.hpp"
#include "smt/structure.hpp"
#include "smt/svg.hpp"
#include "smt/transport_lp.hpp"

namespace fs = std::filesystem;
using smt::io::Json;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFail = 1;
constexpr int kInputError = 2;
constexpr int kSolverError = 3;

struct Options {
  bool use_float = false;
  double eps = 0.0;
  int n = 0;
  int indent = 2;

  std::string mu_path;
  std::string nu_path;
  bool increasing = false;
  bool decreasing = false;
  std::string svg_path;
  std::string json_path;
  std::string csv_path;

  std::optional<std::string> x_text;
  std::optional<std::string> k_text;

  std::string reward = "canonical_sm";
  std::string constraint = "sm";
  std::string sense = "max";
  bool exact_lp = false;

  std::string coupling_path;
  std::string what = "validity";
  std::vector<std::string> require;
  std::string identify;

  std::string density_path;
  std::string batch_dir;
};

void emit(const Json& j, const Options& opt) { std::cout << smt::io::dump(j, opt.indent) << "\n"; }

template <smt::Scalar T>
std::vector<Json> values_json(const std::vector<T>& v) {
  std::vector<Json> out;
  for (const auto& e : v) out.push_back(smt::io::to_json(e));
  return out;
}

template <smt::Scalar T>
smt::DiscreteMeasure<T> load(const std::string& path, const Options& opt, const char* what) {
  if (path.empty()) throw smt::Error(smt::ErrorCode::ParseError, std::string("missing --") + what);
  return smt::io::load_marginal<T>(path, opt.n);
}

template <smt::Scalar T>
void write_outputs(const smt::Coupling<T>& p, const Options& opt, const std::string& title) {
  if (!opt.json_path.empty()) smt::io::write_file(opt.json_path, smt::io::dump(smt::io::coupling_to_json(p), 2) + "\n");
  if (!opt.csv_path.empty()) smt::io::write_file(opt.csv_path, smt::io::coupling_to_csv(p));
  if (!opt.svg_path.empty()) smt::io::write_file(opt.svg_path, smt::svg::render_coupling(p, title));
}

template <smt::Scalar T>
void print_rows(const smt::Coupling<T>& p) {
  for (const auto& r : p.rows()) {
    std::cerr << "  x=" << smt::format_scalar(r.x) << " ->";
    for (const auto& a : r.kernel.atoms()) std::cerr << " " << smt::format_scalar(a.x) << ":" << smt::format_scalar(a.w);
    std::cerr << "   drift " << smt::format_scalar(r.drift()) << "\n";
  }
}

// ---------------------------------------------------------------------------

template <smt::Scalar T>
int cmd_couple(const Options& opt) {
  auto mu = load<T>(opt.mu_path, opt, "mu");
  auto nu = load<T>(opt.nu_path, opt, "nu");
  auto dir = opt.decreasing ? smt::Direction::Decreasing : smt::Direction::Increasing;
  auto p = smt::canonical_transport(mu, nu, dir);
  auto cls = smt::classify_martingale_points(p);
  Json out{{"direction", smt::to_string(dir)},
           {"mode", smt::ScalarTraits<T>::name()},
           {"martingale_points", values_json(cls.martingale_points)},
           {"coupling", smt::io::coupling_to_json(p)}};
  emit(out, opt);
  std::cerr << smt::to_string(dir) << " transport, " << p.size() << " rows, " << cls.martingale_points.size()
            << " martingale\n";
  if (p.size() <= 40) print_rows(p);
  write_outputs(p, opt, std::string(smt::to_string(dir)) + " supermartingale transport");
  return kPass;
}

template <smt::Scalar T>
Json component_json(const smt::Component<T>& c) {
  return Json{{"index", c.index},
              {"kind", smt::to_string(c.kind)},
              {"I", smt::io::interval_to_json(c.I)},
              {"J", smt::io::interval_to_json(c.J)},
              {"mu", smt::io::measure_to_json(c.mu)},
              {"nu", smt::io::measure_to_json(c.nu)},
              {"irreducible", smt::io::report_to_json(smt::check_irreducible(c))}};
}

template <smt::Scalar T>
Json decomposition_json(const smt::ComponentDecomposition<T>& dec) {
  Json comps = Json::array();
  for (const auto& c : dec.components) comps.push_back(component_json(c));
  Json x_star = dec.x_star.is_finite() ? smt::io::to_json(dec.x_star.value) : Json(dec.x_star.to_string());
  return Json{{"x_star", x_star}, {"components", comps}};
}

template <smt::Scalar T>
int cmd_decompose(const Options& opt) {
  auto mu = load<T>(opt.mu_path, opt, "mu");
  auto nu = load<T>(opt.nu_path, opt, "nu");
  auto dec = smt::decompose(mu, nu);
  emit(decomposition_json(dec), opt);
  std::cerr << "x* = " << dec.x_star.to_string() << ", " << dec.components.size() << " component(s)\n";
  for (const auto& c : dec.components) {
    std::cerr << "  [" << c.index << "] " << smt::to_string(c.kind) << "  I=" << c.I.to_string()
              << "  J=" << c.J.to_string() << "  mass " << smt::format_scalar(c.mu.mass()) << "\n";
  }
  return kPass;
}

template <smt::Scalar T>
int cmd_shadow(const Options& opt) {
  auto nu = load<T>(opt.nu_path, opt, "nu");
  if (opt.x_text) {
    if (!opt.k_text) throw smt::Error(smt::ErrorCode::ParseError, "--x needs --k");
    T x = smt::parse_scalar<T>(*opt.x_text);
    T k = smt::parse_scalar<T>(*opt.k_text);
    auto r = smt::shadow_dirac(x, k, nu);
    emit(Json{{"shadow", smt::io::measure_to_json(r.shadow)},
              {"s_star", smt::io::to_json(r.s_star)},
              {"window", smt::io::interval_to_json(r.window)},
              {"barycenter", smt::io::to_json(smt::barycenter(r.shadow))}},
         opt);
    std::cerr << "shadow of " << smt::format_scalar(k) << " at " << smt::format_scalar(x) << ": window "
              << r.window.to_string() << ", s* = " << smt::format_scalar(r.s_star) << "\n";
    return kPass;
  }
  auto mu = load<T>(opt.mu_path, opt, "mu (or --x/--k)");
  auto s = smt::shadow(mu, nu);
  emit(Json{{"shadow", smt::io::measure_to_json(s)}, {"barycenter", smt::io::to_json(smt::barycenter(s))}}, opt);
  std::cerr << "shadow with " << s.size() << " atoms, mass " << smt::format_scalar(s.mass()) << "\n";
  return kPass;
}

smt::ConstraintKind parse_constraint(const std::string& s) {
  if (s == "sm") return smt::ConstraintKind::DriftLeqZero;
  if (s == "mg") return smt::ConstraintKind::DriftEqZero;
  if (s == "none") return smt::ConstraintKind::None;
  throw smt::Error(smt::ErrorCode::ParseError, "unknown constraint '" + s + "' (sm|mg|none)");
}

smt::Sense parse_sense(const std::string& s) {
  if (s == "max") return smt::Sense::Maximize;
  if (s == "min") return smt::Sense::Minimize;
  throw smt::Error(smt::ErrorCode::ParseError, "unknown sense '" + s + "' (max|min)");
}

template <smt::Scalar L, smt::Scalar T>
Json solve_json(const smt::DiscreteMeasure<T>& mu_in, const smt::DiscreteMeasure<T>& nu_in, const smt::RewardSpec& f,
                const Options& opt, int& status) {
  auto mu = smt::convert_measure<L>(mu_in);
  auto nu = smt::convert_measure<L>(nu_in);
  auto reward = [&](const L& x, const L& y) { return f(smt::to_double(x), smt::to_double(y)); };
  auto lp = smt::make_transport_lp(mu, nu, reward, parse_constraint(opt.constraint), parse_sense(opt.sense));
  auto sol = smt::solve_transport(lp);
  Json out{{"reward", f.name()},
           {"constraint", smt::to_string(lp.constraint)},
           {"sense", smt::to_string(lp.sense)},
           {"arithmetic", smt::ScalarTraits<L>::name()},
           {"status", smt::to_string(sol.status)}};
  if (sol.status != smt::LpStatus::Optimal) {
    status = kSolverError;
    std::cerr << "LP is " << smt::to_string(sol.status) << "\n";
    return out;
  }
  auto dec = smt::decompose(mu, nu);
  std::function<bool(const L&, const L&)> sigma = [&](const L& x, const L& y) { return dec.sigma_contains(x, y); };
  auto cert = smt::verify_certificate(lp, sol.plan, sol.dual, smt::epsilon(), sigma);
  out["value"] = smt::io::to_json(sol.value);
  out["unique_hint"] = sol.uniqueness_hint;
  out["pivots"] = sol.pivots;
  out["plan"] = smt::io::coupling_to_json(sol.plan);
  out["dual"] = Json{{"phi", values_json(sol.dual.phi)}, {"psi", values_json(sol.dual.psi)}, {"h", values_json(sol.dual.h)}};
  Json gamma = Json::array();
  for (const auto& [x, y] : cert.gamma) gamma.push_back(Json::array({smt::io::to_json(x), smt::io::to_json(y)}));
  Json gamma_support = Json::array();
  for (const auto& [x, y] : cert.gamma_support) {
    gamma_support.push_back(Json::array({smt::io::to_json(x), smt::io::to_json(y)}));
  }
  out["certificate"] = Json{{"summary", smt::io::report_to_json(cert.summary)},
                            {"primal_value", smt::io::to_json(cert.primal_value)},
                            {"dual_value", smt::io::to_json(cert.dual_value)},
                            {"dual_feasible_sigma", cert.dual_feasible_sigma.value_or(false)},
                            {"m0", values_json(cert.m0)},
                            {"gamma", gamma},
                            {"gamma_support", gamma_support}};
  std::cerr << "LP optimal, value " << smt::format_scalar(sol.value) << " (" << sol.pivots << " pivots), certificate "
            << (cert.summary.pass ? "verified" : "FAILED: " + cert.summary.message) << "\n";
  if (sol.plan.size() <= 40) print_rows(sol.plan);
  write_outputs(sol.plan, opt, f.name());
  status = cert.summary.pass ? kPass : kSolverError;
  return out;
}

template <smt::Scalar T>
int cmd_solve(const Options& opt) {
  auto mu = load<T>(opt.mu_path, opt, "mu");
  auto nu = load<T>(opt.nu_path, opt, "nu");
  auto f = smt::parse_reward(opt.reward);
  int status = kPass;
  Json out = opt.exact_lp ? solve_json<smt::Rational>(mu, nu, f, opt, status) : solve_json<double>(mu, nu, f, opt, status);
  emit(out, opt);
  return status;
}

const std::vector<std::string> kProperties = {"first-left", "first-right", "second-left", "second-right",
                                              "nondegenerate"};

template <smt::Scalar T>
int cmd_check(const Options& opt) {
  if (opt.coupling_path.empty()) throw smt::Error(smt::ErrorCode::ParseError, "missing --coupling");
  auto p = smt::io::coupling_from_text<T>(smt::io::read_file(opt.coupling_path), opt.coupling_path);
  std::optional<smt::DiscreteMeasure<T>> mu;
  std::optional<smt::DiscreteMeasure<T>> nu;
  if (!opt.mu_path.empty()) mu = load<T>(opt.mu_path, opt, "mu");
  if (!opt.nu_path.empty()) nu = load<T>(opt.nu_path, opt, "nu");
  auto cls = smt::classify_martingale_points(p);
  Json out{{"what", opt.what}, {"martingale_points", values_json(cls.martingale_points)}};
  bool pass = true;

  if (opt.what == "validity") {
    auto rep = smt::validate(p, mu ? *mu : p.first_marginal(), nu ? *nu : p.second_marginal());
    out["report"] = smt::io::report_to_json(rep);
    pass = rep.pass;
    std::cerr << "validity: " << (rep.pass ? "pass" : rep.message) << "\n";
  } else if (opt.what == "monotonicity") {
    auto sg = smt::support_graph(p);
    auto m = smt::monotonicity_report(sg);
    std::vector<std::pair<std::string, const smt::CheckReport*>> items = {{"first-left", &m.first_left},
                                                                          {"first-right", &m.first_right},
                                                                          {"second-left", &m.second_left},
                                                                          {"second-right", &m.second_right},
                                                                          {"nondegenerate", &m.nondegenerate}};
    Json reports = Json::object();
    for (const auto& [key, rep] : items) {
      reports[key] = smt::io::report_to_json(*rep);
      std::cerr << "  " << key << ": " << (rep->pass ? "pass" : rep->message) << "\n";
    }
    out["reports"] = reports;
    for (const auto& req : opt.require) {
      auto it = std::find_if(items.begin(), items.end(), [&](const auto& e) { return e.first == req; });
      if (it == items.end()) throw smt::Error(smt::ErrorCode::ParseError, "unknown property '" + req + "'");
      if (!it->second->pass) pass = false;
    }
    out["required"] = opt.require;
    if (!opt.identify.empty()) {
      if (!mu || !nu) throw smt::Error(smt::ErrorCode::ParseError, "--identify needs --mu and --nu");
      smt::Direction dir;
      if (opt.identify == "increasing") {
        dir = smt::Direction::Increasing;
      } else if (opt.identify == "decreasing") {
        dir = smt::Direction::Decreasing;
      } else {
        throw smt::Error(smt::ErrorCode::ParseError, "--identify takes increasing|decreasing");
      }
      auto id = smt::identify_canonical(p, *mu, *nu, dir);
      out["identification"] = Json{{"summary", smt::io::report_to_json(id.summary)},
                                   {"premises", id.premises},
                                   {"matches", id.matches}};
      std::cerr << "  identification (" << opt.identify << "): premises " << (id.premises ? "hold" : "fail")
                << ", coupling " << (id.matches ? "equals" : "differs from") << " the canonical transport\n";
      if (!id.summary.pass) pass = false;
    }
  } else if (opt.what == "local-optimality") {
    auto f = smt::parse_reward(opt.reward);
    std::vector<T> m0 = cls.martingale_points;
    std::vector<T> m1;
    std::function<bool(const T&, const T&)> sigma;
    std::optional<smt::ComponentDecomposition<T>> dec;
    if (mu && nu) {
      dec = smt::decompose(*mu, *nu);
      const smt::Component<T>* proper = nullptr;
      for (const auto& c : dec->components) {
        if (c.index == 0) proper = &c;
      }
      m0.clear();
      for (const auto& x : cls.martingale_points) {
        if (proper && proper->I.contains(x)) {
          m0.push_back(x);
        } else {
          m1.push_back(x);
        }
      }
      sigma = [&](const T& x, const T& y) { return dec->sigma_contains(x, y); };
    }
    auto rep = smt::verify_local_optimality(p, f, m0, m1, sigma);
    out["reward"] = f.name();
    out["m0"] = values_json(m0);
    out["m1"] = values_json(m1);
    out["report"] = smt::io::report_to_json(rep.summary);
    out["pairs_admitted"] = rep.pairs_admitted;
    out["triples_admitted"] = rep.triples_admitted;
    out["best_gain"] = rep.best_gain;
    pass = rep.summary.pass;
    std::cerr << "local optimality under " << f.name() << ": " << (pass ? "no improving competitor" : rep.summary.message)
              << " (" << rep.pairs_admitted << " pairs, " << rep.triples_admitted << " triples admitted)\n";
  } else {
    throw smt::Error(smt::ErrorCode::ParseError, "unknown --what '" + opt.what + "'");
  }
  out["pass"] = pass;
  emit(out, opt);
  return pass ? kPass : kCheckFail;
}

template <smt::Scalar T>
int cmd_discretize(const Options& opt) {
  if (opt.density_path.empty()) throw smt::Error(smt::ErrorCode::ParseError, "missing --density");
  Json j = smt::io::parse_json(smt::io::read_file(opt.density_path), opt.density_path);
  auto spec = smt::io::density_from_json<T>(j, opt.density_path);
  auto m = smt::io::discretize(spec, opt.n);
  emit(smt::io::measure_to_json(m), opt);
  std::cerr << m.size() << " atoms, mass " << smt::format_scalar(m.mass()) << ", barycenter "
            << smt::format_scalar(smt::barycenter(m)) << "\n";
  return kPass;
}

// Each instance file holds {"mu": measure, "nu": measure}.
template <smt::Scalar T>
Json batch_instance(const fs::path& path, const Options& opt) {
  Json out{{"instance", path.filename().string()}};
  try {
    Json j = smt::io::parse_json(smt::io::read_file(path.string()), path.string());
    if (!j.contains("mu") || !j.contains("nu")) throw smt::Error(smt::ErrorCode::ParseError, "needs \"mu\" and \"nu\"");
    auto read = [&](const Json& m) {
      if (m.is_object() && m.contains("density")) return smt::io::discretize(smt::io::density_from_json<T>(m), opt.n);
      return smt::io::measure_from_json<T>(m, path.string());
    };
    auto mu = read(j.at("mu"));
    auto nu = read(j.at("nu"));
    auto dec = smt::decompose(mu, nu);
    auto inc = smt::increasing_transport(mu, nu);
    auto dcr = smt::decreasing_transport(mu, nu);
    out["status"] = "ok";
    out["x_star"] = dec.x_star.is_finite() ? smt::io::to_json(dec.x_star.value) : Json(dec.x_star.to_string());
    out["components"] = dec.components.size();
    out["increasing"] = smt::io::coupling_to_json(inc);
    out["decreasing"] = smt::io::coupling_to_json(dcr);
    out["increasing_valid"] = smt::validate(inc, mu, nu).pass;
    out["decreasing_valid"] = smt::validate(dcr, mu, nu).pass;
  } catch (const smt::Error& e) {
    out["status"] = "error";
    out["error"] = e.what();
  }
  return out;
}

template <smt::Scalar T>
int cmd_batch(const Options& opt) {
  if (!fs::is_directory(opt.batch_dir)) throw smt::Error(smt::ErrorCode::ParseError, "not a directory: " + opt.batch_dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(opt.batch_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::future<Json>> jobs;
  for (const auto& f : files) jobs.push_back(std::async(std::launch::async, [f, &opt] { return batch_instance<T>(f, opt); }));
  Json results = Json::array();
  int errors = 0;
  for (auto& j : jobs) {
    Json r = j.get();
    if (r["status"] != "ok") {
      ++errors;
      std::cerr << r["instance"].get<std::string>() << ": " << r["error"].get<std::string>() << "\n";
    }
    results.push_back(std::move(r));
  }
  emit(Json{{"instances", results}}, opt);
  std::cerr << files.size() << " instance(s), " << errors << " error(s)\n";
  return errors == 0 ? kPass : kInputError;
}

template <smt::Scalar T>
int dispatch(const std::string& cmd, const Options& opt) {
  if (cmd == "couple") return cmd_couple<T>(opt);
  if (cmd == "decompose") return cmd_decompose<T>(opt);
  if (cmd == "shadow") return cmd_shadow<T>(opt);
  if (cmd == "solve") return cmd_solve<T>(opt);
  if (cmd == "check") return cmd_check<T>(opt);
  if (cmd == "discretize") return cmd_discretize<T>(opt);
  if (cmd == "batch") return cmd_batch<T>(opt);
  throw smt::Error(smt::ErrorCode::ParseError, "unknown command " + cmd);
}

int exit_code_for(const smt::Error& e) {
  switch (e.code()) {
    case smt::ErrorCode::SolverError:
    case smt::ErrorCode::DecompositionError:
      return kSolverError;
    default:
      return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Supermartingale transport: canonical couplings, decomposition, LP and support checks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--float", opt.use_float, "Binary64 arithmetic instead of exact rationals");
  app.add_option("--eps", opt.eps, "Float tolerance (default: SMT_EPS or 1e-9)")->check(CLI::PositiveNumber);
  app.add_option("--n", opt.n, "Atom count when a marginal file holds a density")->check(CLI::PositiveNumber);
  app.add_option("--indent", opt.indent, "JSON indentation, -1 for a single line");

  auto add_marginals = [&](CLI::App* sub) {
    sub->add_option("--mu", opt.mu_path, "First marginal (measure JSON/CSV or density JSON)");
    sub->add_option("--nu", opt.nu_path, "Second marginal");
  };
  auto add_outputs = [&](CLI::App* sub) {
    sub->add_option("--svg", opt.svg_path, "Write the support plot");
    sub->add_option("--json", opt.json_path, "Write the coupling as JSON");
    sub->add_option("--csv", opt.csv_path, "Write the coupling as CSV x,y,w");
  };

  auto* couple = app.add_subcommand("couple", "Increasing or decreasing supermartingale transport");
  add_marginals(couple);
  add_outputs(couple);
  auto* inc_flag = couple->add_flag("--increasing", opt.increasing, "Process atoms left to right (default)");
  couple->add_flag("--decreasing", opt.decreasing, "Process atoms right to left")->excludes(inc_flag);

  auto* decompose = app.add_subcommand("decompose", "Maximal barrier and irreducible components");
  add_marginals(decompose);

  auto* shadow = app.add_subcommand("shadow", "Shadow of a Dirac (--x, --k) or of a measure (--mu) in --nu");
  add_marginals(shadow);
  shadow->add_option("--x", opt.x_text, "Dirac location");
  shadow->add_option("--k", opt.k_text, "Dirac mass");

  auto* solve = app.add_subcommand("solve", "Optimal transport LP with a dual certificate");
  add_marginals(solve);
  add_outputs(solve);
  solve->add_option("--reward", opt.reward, "Catalog name or expression in x, y");
  solve->add_option("--constraint", opt.constraint, "sm (drift <= 0), mg (drift = 0) or none")
      ->check(CLI::IsMember({"sm", "mg", "none"}));
  solve->add_option("--sense", opt.sense, "max or min")->check(CLI::IsMember({"max", "min"}));
  solve->add_flag("--exact-lp", opt.exact_lp, "Run the simplex in exact rationals");

  auto* check = app.add_subcommand("check", "Validity, monotonicity or local optimality of a coupling");
  add_marginals(check);
  check->add_option("--coupling", opt.coupling_path, "Coupling JSON or CSV")->required();
  check->add_option("--what", opt.what, "validity | monotonicity | local-optimality")
      ->check(CLI::IsMember({"validity", "monotonicity", "local-optimality"}));
  check->add_option("--require", opt.require, "Monotonicity properties that must hold")
      ->delimiter(',')
      ->check(CLI::IsMember(kProperties));
  check->add_option("--identify", opt.identify, "Also test identification with increasing|decreasing")
      ->check(CLI::IsMember({"increasing", "decreasing"}));
  check->add_option("--reward", opt.reward, "Reward for local optimality");

  auto* discretize = app.add_subcommand("discretize", "Equal-mass discretization of a piecewise-uniform density");
  discretize->add_option("--density", opt.density_path, "Density JSON")->required();

  auto* batch = app.add_subcommand("batch", "Canonical couplings for every *.json instance in a directory");
  batch->add_option("--batch", opt.batch_dir, "Directory of instance files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kInputError;
  }

  try {
    if (opt.eps > 0) {
      smt::set_epsilon(opt.eps);
    } else if (const char* env = std::getenv("SMT_EPS")) {
      smt::set_epsilon(std::stod(env));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: bad tolerance: " << e.what() << "\n";
    return kInputError;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return opt.use_float ? dispatch<double>(cmd, opt) : dispatch<smt::Rational>(cmd, opt);
  } catch (const smt::OrderViolationError& e) {
    std::cerr << "error: " << e.what() << " (put functions checked at " << smt::io::format_double17(e.point())
              << ")\n";
    return kInputError;
  } catch (const smt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return kInputError;
  }
}
