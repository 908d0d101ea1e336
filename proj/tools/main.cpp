// Batch front door: runs the verification suites and experiments and emits
// machine-readable reports (JSON summary + CSV tables per subcommand).
//
// Exit code 0 iff every assertion is within tolerance. Output files are only
// written after a run completes, so a failed parse leaves no partial output.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "proplab/cocycle.hpp"
#include "proplab/serialization.hpp"

using nlohmann::json;
using namespace proplab;
using halfplane::Complex;
using halfplane::Moebius;
using halfplane::Point;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Assertion {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  std::string command;
  json config;
  std::vector<Assertion> assertions;
  std::string csv;  // main table
  json extra;       // command-specific payload

  bool pass() const {
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }

  void assert_le(const std::string& name, double value, double tol) {
    assertions.push_back({name, value, tol, value <= tol});
  }
  void assert_ge(const std::string& name, double value, double bound) {
    assertions.push_back({name, value, bound, value >= bound});
  }

  int write(const std::string& out_dir) const {
    std::filesystem::create_directories(out_dir);
    json summary;
    summary["tool"] = "proplab";
    summary["version"] = kVersion;
    summary["command"] = command;
    summary["config"] = config;
    summary["assertions"] = json::array();
    for (const auto& a : assertions)
      summary["assertions"].push_back(
          {{"name", a.name}, {"value", a.value}, {"tolerance", a.tolerance}, {"pass", a.pass}});
    summary["pass"] = pass();
    for (auto& [key, value] : extra.items()) summary[key] = value;

    const auto base = std::filesystem::path(out_dir) / (command + "_");
    std::ofstream js(base.string() + "summary.json");
    js << summary.dump(2) << "\n";
    if (!csv.empty()) {
      std::ofstream cs(base.string() + "table.csv");
      cs << csv;
    }
    std::fprintf(stdout, "%s: %s (%s)\n", command.c_str(), pass() ? "pass" : "FAIL",
                 (base.string() + "summary.json").c_str());
    for (const auto& a : assertions)
      std::fprintf(stdout, "  %-42s %.3e vs %.3e  %s\n", a.name.c_str(), a.value, a.tolerance,
                   a.pass ? "ok" : "FAIL");
    return pass() ? 0 : 1;
  }
};

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Moebius random_hyperbolic(std::mt19937_64& rng, double spread = 0.8) {
  std::uniform_real_distribution<double> U(-spread, spread);
  for (;;) {
    const double theta = U(rng) * 4.0, t = U(rng), s = U(rng);
    const Moebius k(std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta));
    const Moebius a(std::exp(t), 0.0, 0.0, std::exp(-t));
    const Moebius n(1.0, s, 0.0, 1.0);
    const Moebius g = (k * a * n).normalized();
    if (std::abs(g.trace()) > 2.05) return g;
  }
}

fuchsian::GroupPresentation make_group(const std::string& kind, double t, double separation) {
  if (kind == "schottky") return fuchsian::schottky_group(t, separation);
  if (kind == "genus2") return fuchsian::genus2_group();
  throw CLI::ValidationError("--group", "unknown group kind: " + kind);
}

std::vector<fuchsian::Word> parse_words(const std::string& csv, int rank) {
  std::vector<fuchsian::Word> words;
  std::string token;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!token.empty()) words.push_back(fuchsian::parse_word(token, rank));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (words.empty()) throw CLI::ValidationError("--words", "no words given");
  return words;
}

// --tau zero | seed:<K>: translation vectors for the affine extension.
std::vector<Eigen::VectorXd> make_translations(const std::string& spec, int count, int dim,
                                               double scale) {
  std::vector<Eigen::VectorXd> out;
  if (spec == "zero") {
    for (int i = 0; i < count; ++i) out.push_back(Eigen::VectorXd::Zero(dim));
    return out;
  }
  if (spec.rfind("seed:", 0) == 0) {
    std::mt19937_64 rng(std::stoull(spec.substr(5)));
    std::normal_distribution<double> N(0.0, scale);
    for (int i = 0; i < count; ++i) {
      Eigen::VectorXd v(dim);
      for (int j = 0; j < dim; ++j) v(j) = N(rng);
      out.push_back(v);
    }
    return out;
  }
  throw CLI::ValidationError("--tau", "expected 'zero' or 'seed:<K>'");
}

// ----------------------------------------------------------------------

int run_flatness(int n, double step, double side, const std::string& out_dir) {
  Report report;
  report.command = "flatness";
  report.config = {{"n", n}, {"step", step}, {"side", side}};

  const std::vector<Complex> basepoints{{0.0, 1.0}, {-0.7, 2.0}, {3.0, 0.8}};
  std::string csv = "basepoint;n;step;residual\n";
  double worst = 0.0;
  for (const Complex z : basepoints) {
    const auto loop = flatbundle::square_loop(Point(z), side, step);
    const double res = flatbundle::flatness_residual(n, loop);
    worst = std::max(worst, res);
    csv += format17(z.real()) + "+" + format17(z.imag()) + "i;" + std::to_string(n) + ";" +
           format17(step) + ";" + format17(res) + "\n";
  }
  report.assert_le("max holonomy residual", worst, 1e-6);

  // Integrator order, measured at coarse steps where truncation dominates.
  const double coarse =
      flatbundle::flatness_residual(n, flatbundle::square_loop(Point(0.0, 1.0), side, 1e-2));
  const double fine =
      flatbundle::flatness_residual(n, flatbundle::square_loop(Point(0.0, 1.0), side, 5e-3));
  report.assert_ge("step-halving reduction factor", coarse / std::max(fine, 1e-300), 8.0);

  // Control: the Levi-Civita connection alone is visibly curved.
  const auto loop = flatbundle::square_loop(Point(0.0, 1.0), side, step);
  const double area = flatbundle::polygon_area(loop);
  const double control = std::abs(flatbundle::levi_civita_holonomy(loop) - Complex(1.0, 0.0));
  report.assert_le("control: |LC residual - area| / area", std::abs(control - area) / area, 0.1);

  report.csv = csv;
  report.extra["loop_area"] = area;
  return report.write(out_dir);
}

int run_rep_check(int n, int count, std::uint64_t seed, double step, const std::string& out_dir) {
  Report report;
  report.command = "rep-check";
  report.config = {{"n", n}, {"count", count}, {"seed", seed}, {"step", step}};

  std::mt19937_64 rng(seed);
  const Point base(0.0, 1.0);
  std::string csv = "index;trace_holonomy;trace_character;diff\n";
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const Moebius g = random_hyperbolic(rng);
    const double tr = flatbundle::holonomy_rep(g, n, base, step).mat.trace();
    const double ch = symrep::character(g, n);
    worst = std::max(worst, std::abs(tr - ch));
    csv += std::to_string(i) + ";" + format17(tr) + ";" + format17(ch) + ";" +
           format17(std::abs(tr - ch)) + "\n";
  }
  report.assert_le("max |trace(holonomy) - character|", worst, 1e-6);

  double weight_worst = 0.0;
  const double theta = 0.3;
  const auto weights = flatbundle::circle_weights(theta, n, base);
  for (int k = -n; k <= n; ++k) {
    double best = 1e18;
    for (const Complex w : weights) best = std::min(best, std::abs(w - std::polar(1.0, k * theta)));
    weight_worst = std::max(weight_worst, best);
  }
  report.assert_le("circle weights vs e^{ik theta}", weight_worst, 1e-6);

  report.csv = csv;
  return report.write(out_dir);
}

int run_margulis(int n, const std::string& group, double t, double separation,
                 const std::string& words_csv, const std::string& tau, double scale,
                 const std::string& out_dir) {
  Report report;
  report.command = "margulis";
  report.config = {{"n", n},   {"group", group}, {"t", t},        {"separation", separation},
                   {"words", words_csv}, {"tau", tau},     {"scale", scale}};

  const auto grp = make_group(group, t, separation);
  const auto words = parse_words(words_csv, grp.rank());
  const auto taus = make_translations(tau, grp.rank(), 2 * n + 1, scale);
  const auto gens = margulis::fuchsian_affine_generators(grp, n, taus);
  const Eigen::MatrixXd gram = margulis::margulis_form(n);

  std::mt19937_64 rng(12);
  std::normal_distribution<double> N(0.0, 1.0);
  std::string csv = "word;mu;basepoint_residual\n";
  double worst_bp = 0.0, worst_form = 0.0;
  for (const auto& w : words) {
    const auto phi = margulis::affine_word(gens, w);
    worst_form = std::max(worst_form, margulis::form_residual(phi.linear, gram));
    const Eigen::VectorXd v = margulis::neutral_vector_fuchsian(evaluate(grp, w), n);
    const double mu = margulis::margulis_invariant(phi, gram, v);
    double bp = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd x(2 * n + 1);
      for (int j = 0; j < x.size(); ++j) x(j) = N(rng);
      bp = std::max(bp, std::abs(margulis::margulis_invariant_at(phi, gram, v, x) - mu));
    }
    worst_bp = std::max(worst_bp, bp / (1.0 + std::abs(mu)));
    csv += fuchsian::to_string(w) + ";" + format17(mu) + ";" + format17(bp) + "\n";
  }
  report.assert_le("base-point independence (relative)", worst_bp, 1e-10);
  report.assert_le("linear parts preserve the form", worst_form, 1e-8);

  report.csv = csv;
  return report.write(out_dir);
}

int run_obstruct(int n, const std::string& group, double t, double separation,
                 const std::string& words_csv, const std::string& tau, double scale,
                 const std::string& out_dir) {
  Report report;
  report.command = "obstruct";
  report.config = {{"n", n},   {"group", group}, {"t", t},        {"separation", separation},
                   {"words", words_csv}, {"tau", tau},     {"scale", scale}};

  const auto grp = make_group(group, t, separation);
  const auto words = parse_words(words_csv, grp.rank());
  const auto taus = make_translations(tau, grp.rank(), 2 * n + 1, scale);

  const auto cert = margulis::properness_obstruction(grp, n, taus, words, +1.0);
  const auto flipped = margulis::properness_obstruction(grp, n, taus, words, -1.0);
  const bool verdict_stable = cert.has_value() == flipped.has_value();
  report.assertions.push_back(
      {"verdict invariant under the global sign gauge", verdict_stable ? 0.0 : 1.0, 0.0,
       verdict_stable});

  margulis::ObstructionCertificate out_cert;
  if (cert) {
    out_cert = *cert;
  } else {
    // Inconclusive: record the first scanned pair for the report.
    out_cert.word1 = words.front();
    out_cert.word2 = words.back();
    out_cert.verdict = margulis::Verdict::Inconclusive;
  }
  report.extra["verdict"] =
      out_cert.verdict == margulis::Verdict::Obstructed ? "obstructed" : "inconclusive";
  report.extra["certificate"] = json::parse(serialization::certificate_to_json(out_cert));
  report.extra["tolerances"] = {{"loxodromic_gap", 1e-6}, {"general_position_rank", 1e-8}};

  std::string csv = "word1;word2;mu1;mu2;general_position;verdict\n";
  csv += fuchsian::to_string(out_cert.word1) + ";" + fuchsian::to_string(out_cert.word2) + ";" +
         format17(out_cert.mu1) + ";" + format17(out_cert.mu2) + ";" +
         (out_cert.general_position ? "true" : "false") + ";" +
         (out_cert.verdict == margulis::Verdict::Obstructed ? "obstructed" : "inconclusive") +
         "\n";
  report.csv = csv;
  return report.write(out_dir);
}

int run_survey(int maxlen, int depth, int seed_degree, int budget, int reports, int nodes,
               double step, const std::string& out_dir) {
  Report report;
  report.command = "survey";
  report.config = {{"maxlen", maxlen},   {"depth", depth}, {"seed_degree", seed_degree},
                   {"budget", budget},   {"reports", reports}, {"nodes_per_unit", nodes},
                   {"step", step}};

  const auto grp = fuchsian::genus2_group();
  const cocycle::PoincareSeries omega(grp, 2, seed_degree, depth);
  const auto survey =
      cocycle::geodesic_sign_survey(grp, omega, 1, maxlen, budget, reports, nodes, step);

  double worst_route = 0.0;
  double k2_lo = 1e18, k2_hi = -1e18;
  for (const auto& r : survey.reports) {
    worst_route = std::max(worst_route, std::abs(r.mu_direct - r.mu_integral));
    if (std::abs(r.integral_f) > 1e-6) {
      const double ratio = r.mu_integral / r.integral_f;
      k2_lo = std::min(k2_lo, ratio);
      k2_hi = std::max(k2_hi, ratio);
    }
  }
  report.assert_le("max |mu_direct - mu_integral|", worst_route, 1e-3);
  report.assert_le("K2 relative spread", (k2_hi - k2_lo) / std::abs(k2_hi), 1e-2);

  report.extra["both_signs"] = survey.both_signs;
  report.extra["classes_scanned"] = survey.classes_scanned;
  if (survey.both_signs) {
    const auto cert =
        cocycle::survey_obstruction(grp, omega, 1, survey, Point(0.0, 1.0), step);
    if (cert) {
      report.extra["certificate"] = json::parse(serialization::certificate_to_json(*cert));
      report.assertions.push_back({"sign pair is in general position",
                                   cert->general_position ? 0.0 : 1.0, 0.0,
                                   cert->general_position});
    }
  }

  report.csv = serialization::reports_to_csv(survey.reports);
  return report.write(out_dir);
}

int run_symmetry(int p, int depth, int samples, int mc_samples, std::uint64_t seed,
                 const std::string& out_dir) {
  Report report;
  report.command = "symmetry";
  report.config = {{"p", p},           {"depth", depth}, {"samples", samples},
                   {"mc_samples", mc_samples}, {"seed", seed}};

  const int q = 2 * p + 2;
  const auto grp = fuchsian::genus2_group();
  const cocycle::PoincareSeries omega(grp, q, 0, depth);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double beta_angle = std::acos(-1.0) / q;
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < samples; ++i) {
    const halfplane::UnitTangent u(Point(U(rng), 1.2 + 0.5 * U(rng)),
                                   std::polar(1.0, 3.0 * U(rng)));
    const double f = cocycle::f_observable(omega, u);
    const double fb = cocycle::f_observable(omega, halfplane::rotate(u, beta_angle));
    worst = std::max(worst, std::abs(f + fb));
    scale = std::max(scale, std::abs(f));
  }
  report.assert_le("max |f + f(beta u)|", worst, 1e-12 * std::max(1.0, scale));

  const auto stats = cocycle::f_zero_mean_monte_carlo(omega, mc_samples, seed + 1);
  report.assert_le("|monte carlo mean| / stderr", std::abs(stats.mean) / stats.standard_error,
                   3.0);
  report.extra["mc_mean"] = stats.mean;
  report.extra["mc_stderr"] = stats.standard_error;

  report.csv = "check;value\nmax_beta_defect;" + format17(worst) + "\nmc_mean;" +
               format17(stats.mean) + "\nmc_stderr;" + format17(stats.standard_error) + "\n";
  return report.write(out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proplab: numerical experiments on affine actions of Fuchsian groups"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON file with default flag values");

  std::string out_dir = ".";
  app.add_option("--out", out_dir, "output directory for reports")->capture_default_str();

  int n = 1;
  double step = 1e-3;
  double side = 0.5;
  auto* flatness = app.add_subcommand("flatness", "holonomy residuals of the flat connection");
  flatness->add_option("--n", n, "bundle weight (dimension 2n+1)")->check(CLI::PositiveNumber);
  flatness->add_option("--step", step, "RK4 step");
  flatness->add_option("--side", side, "loop side length");
  flatness->add_option("--out", out_dir, "output directory");

  int count = 50;
  std::uint64_t seed = 0;
  double rc_step = 1e-3;
  auto* rep_check = app.add_subcommand("rep-check", "holonomy traces vs the character oracle");
  rep_check->add_option("--n", n, "bundle weight")->check(CLI::PositiveNumber);
  rep_check->add_option("--count", count, "number of random elements");
  rep_check->add_option("--seed", seed, "RNG seed (mandatory, also via config)");
  rep_check->add_option("--step", rc_step, "RK4 step");
  rep_check->add_option("--out", out_dir, "output directory");

  std::string group = "schottky";
  double t_param = 4.0, separation = 1.0, scale = 1.0;
  std::string words_csv = "a,b";
  std::string tau = "zero";
  auto* margulis_cmd = app.add_subcommand("margulis", "Margulis invariants for a word list");
  margulis_cmd->add_option("--n", n, "representation weight")->check(CLI::PositiveNumber);
  margulis_cmd->add_option("--group", group, "schottky | genus2");
  margulis_cmd->add_option("--t", t_param, "schottky translation length");
  margulis_cmd->add_option("--separation", separation, "schottky axis separation");
  margulis_cmd->add_option("--words", words_csv, "comma-separated words (a..z, A..Z)");
  margulis_cmd->add_option("--tau", tau, "zero | seed:<K> translation vectors");
  margulis_cmd->add_option("--scale", scale, "translation scale for seeded tau");
  margulis_cmd->add_option("--out", out_dir, "output directory");

  auto* obstruct = app.add_subcommand("obstruct", "properness obstruction scan over word pairs");
  obstruct->add_option("--n", n, "representation weight")->check(CLI::PositiveNumber);
  obstruct->add_option("--group", group, "schottky | genus2");
  obstruct->add_option("--t", t_param, "schottky translation length");
  obstruct->add_option("--separation", separation, "schottky axis separation");
  obstruct->add_option("--words", words_csv, "comma-separated words");
  obstruct->add_option("--tau", tau, "zero | seed:<K> translation vectors");
  obstruct->add_option("--scale", scale, "translation scale for seeded tau");
  obstruct->add_option("--out", out_dir, "output directory");

  int maxlen = 8, depth = 6, seed_degree = 0, budget = 200, reports = 10, nodes = 1000;
  double survey_step = 1e-2;
  auto* survey = app.add_subcommand("survey", "closed-geodesic sign survey on the genus-2 group");
  survey->add_option("--maxlen", maxlen, "conjugacy class word-length bound");
  survey->add_option("--depth", depth, "Poincare series truncation depth");
  survey->add_option("--seed-degree", seed_degree, "series seed monomial degree");
  survey->add_option("--budget", budget, "max classes scanned for signs");
  survey->add_option("--reports", reports, "classes with full mu reports");
  survey->add_option("--nodes", nodes, "quadrature nodes per unit length");
  survey->add_option("--step", survey_step, "RK4 step for the direct route");
  survey->add_option("--out", out_dir, "output directory");

  int p = 0, samples = 10000, mc_samples = 100000;
  int sym_depth = 4;
  auto* symmetry = app.add_subcommand("symmetry", "f antisymmetry and zero-mean checks");
  symmetry->add_option("--p", p, "dimension parameter (q = 2p+2)");
  symmetry->add_option("--depth", sym_depth, "series depth");
  symmetry->add_option("--samples", samples, "pointwise antisymmetry samples");
  symmetry->add_option("--mc-samples", mc_samples, "Monte Carlo samples");
  symmetry->add_option("--seed", seed, "RNG seed (mandatory, also via config)");
  symmetry->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  // Values from an optional JSON config fill options the user left unset;
  // command-line flags always win.
  json cfg = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::fprintf(stderr, "error: cannot open config file %s\n", config_path.c_str());
      return 2;
    }
    try {
      in >> cfg;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: config parse failure: %s\n", e.what());
      return 2;
    }
  }
  CLI::App* active = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
  const auto fill = [&](const char* key, auto& var) {
    using T = std::decay_t<decltype(var)>;
    const CLI::Option* opt = active->get_option_no_throw(std::string("--") + key);
    if (opt && opt->count() == 0 && cfg.contains(key)) {
      try {
        var = cfg.at(key).get<T>();
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string("bad config value for ") + key + ": " + e.what());
      }
    }
  };
  const auto seed_present = [&] {
    const CLI::Option* opt = active->get_option_no_throw("--seed");
    return (opt && opt->count() > 0) || cfg.contains("seed");
  };
  try {
    fill("n", n);
    fill("out", out_dir);
    fill("group", group);
    fill("t", t_param);
    fill("separation", separation);
    fill("words", words_csv);
    fill("tau", tau);
    fill("scale", scale);
    fill("seed", seed);
    if (flatness->parsed()) {
      fill("step", step);
      fill("side", side);
    } else if (rep_check->parsed()) {
      fill("count", count);
      fill("step", rc_step);
    } else if (survey->parsed()) {
      fill("maxlen", maxlen);
      fill("depth", depth);
      fill("seed-degree", seed_degree);
      fill("budget", budget);
      fill("reports", reports);
      fill("nodes", nodes);
      fill("step", survey_step);
    } else if (symmetry->parsed()) {
      fill("p", p);
      fill("depth", sym_depth);
      fill("samples", samples);
      fill("mc-samples", mc_samples);
    }
    if ((rep_check->parsed() || symmetry->parsed()) && !seed_present()) {
      std::fprintf(stderr, "error: a seed is mandatory for randomized checks\n");
      return 2;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (flatness->parsed()) return run_flatness(n, step, side, out_dir);
    if (rep_check->parsed()) return run_rep_check(n, count, seed, rc_step, out_dir);
    if (margulis_cmd->parsed())
      return run_margulis(n, group, t_param, separation, words_csv, tau, scale, out_dir);
    if (obstruct->parsed())
      return run_obstruct(n, group, t_param, separation, words_csv, tau, scale, out_dir);
    if (survey->parsed())
      return run_survey(maxlen, depth, seed_degree, budget, reports, nodes, survey_step, out_dir);
    if (symmetry->parsed())
      return run_symmetry(p, sym_depth, samples, mc_samples, seed, out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
