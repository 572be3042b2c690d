#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgpipe/energystab.hpp"
#include "sgpipe/errors.hpp"
#include "sgpipe/linstab.hpp"
#include "sgpipe/transition.hpp"
#include "svg.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace sgpipe;
using cli::Series;

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitDegenerate = 4;

struct RunConfig {
  std::string command;
  std::vector<double> epsilon;
  std::optional<double> reynolds;
  int truncation = 10;
  int nodes = 200;
  std::optional<int> m_max;
  std::string format = "csv";
  bool plot = false;
  std::string out;
  std::string h_form = "vorticity";
  std::vector<double> times{0.0};
  int nr = 21;
  int ntheta = 48;
  double degenerate_tol = kDegenerateTol;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

json jnum(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(num(x).c_str(), nullptr);
}

json jcomplex(cdouble z) { return json{{"re", jnum(z.real())}, {"im", jnum(z.imag())}}; }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string s;
    for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
    s += "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
      s += "\n";
    }
    return s;
  }
};

struct Output {
  Table table;
  json doc;
  int exit_code = 0;
};

HForm parse_form(const std::string& s) { return s == "stated" ? HForm::StatedW : HForm::VorticityPsi; }

std::string plot_path(const RunConfig& cfg, const std::string& suffix) {
  std::string stem = cfg.out;
  const auto slash = stem.find_last_of('/');
  const auto dot = stem.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) stem.erase(dot);
  return stem + suffix + ".svg";
}

std::vector<double> eps_or(const RunConfig& cfg, std::vector<double> fallback) {
  return cfg.epsilon.empty() ? fallback : cfg.epsilon;
}

void require_positive_eps(const std::vector<double>& eps) {
  for (double e : eps)
    if (!(e > 0.0)) throw ConfigError("--epsilon: this command requires epsilon > 0 (got " + num(e) + ")");
}

Output cmd_linstab(const RunConfig& cfg) {
  const std::vector<double> eps = eps_or(cfg, {0.01});
  require_positive_eps(eps);
  Output out;
  out.table.header = {"epsilon", "m", "lambda_m1", "sqrt_lambda_over_m", "R_m1", "R_c", "critical_m", "beta_m1_at_Rc",
                      "pes_slope", "pes_reference", "beta_31_below", "beta_31_above"};
  json table1 = json::array();
  for (int m = 1; m <= 6; ++m) {
    const double lam = solve_lambda_m1(m);
    table1.push_back({{"m", m}, {"lambda_m1", jnum(lam)}, {"sqrt_lambda_over_m", jnum(std::sqrt(lam / m))}});
  }
  json results = json::array();
  std::vector<Series> chart;
  for (double e : eps) {
    const CriticalPoint cp = critical_reynolds(e);
    const FluidParams at{e, cp.reynolds};
    const double slope = pes_slope(e);
    const double ref = 0.12 * std::sqrt(e) / (0.02 + e);
    const double below = solve_beta(3, 1, {e, 0.99 * cp.reynolds});
    const double above = solve_beta(3, 1, {e, 1.01 * cp.reynolds});
    json betas = json::array();
    for (int m = 1; m <= 6; ++m) {
      const double lam = solve_lambda_m1(m);
      const double beta = solve_beta(m, 1, at);
      betas.push_back({{"m", m}, {"beta", jnum(beta)}});
      out.table.rows.push_back({num(e), std::to_string(m), num(lam), num(std::sqrt(lam / m)),
                                num(std::pow(e, -0.25) * std::sqrt(lam / m)), num(cp.reynolds), std::to_string(cp.m),
                                num(beta), num(slope), num(ref), num(below), num(above)});
    }
    json chart_pts = json::array();
    Series s{"eps=" + num(e), {}, {}};
    for (int k = -3; k <= 3; ++k) {
      const double R = cp.reynolds * (1.0 + 0.01 * k);
      const double b = solve_beta(3, 1, {e, R});
      chart_pts.push_back({{"reynolds", jnum(R)}, {"beta_31", jnum(b)}});
      s.x.push_back(R / cp.reynolds);
      s.y.push_back(b);
    }
    chart.push_back(s);
    results.push_back({{"epsilon", jnum(e)},
                       {"R_c", jnum(cp.reynolds)},
                       {"R_c_scaled", jnum(cp.reynolds * std::pow(e, 0.25))},
                       {"critical_m", cp.m},
                       {"pes_slope", jnum(slope)},
                       {"pes_reference", jnum(ref)},
                       {"beta_m1_at_Rc", betas},
                       {"sign_chart", chart_pts}});
  }
  out.doc = {{"command", "linstab"}, {"table1", table1}, {"results", results}};
  if (cfg.plot)
    cli::write_file(plot_path(cfg, ""), cli::line_chart({"beta_{3,1} near R_c", "R / R_c", "beta_{3,1}"}, chart));
  return out;
}

Output cmd_transition(const RunConfig& cfg) {
  const std::vector<double> eps = eps_or(cfg, {0.001});
  require_positive_eps(eps);
  const HForm form = parse_form(cfg.h_form);
  Output out;
  out.table.header = {"epsilon", "n",       "A0_re",         "A0_im",           "A6_re",         "A6_im",
                      "AN_re",   "AN_im",   "scaled_re_AN",  "B_n",             "classification", "amplitude_coeff",
                      "period_coeff", "R_c"};
  json results = json::array();
  std::vector<Series> profiles, ratios;
  for (double e : eps) {
    const TransitionReport rep = transition_number(e, cfg.truncation, cfg.nodes, form, cfg.degenerate_tol);
    if (rep.classification == TransitionType::Degenerate) out.exit_code = kExitDegenerate;
    const std::string cls = to_string(rep.classification);
    json t0 = json::array(), t6 = json::array(), part = json::array(), prof = json::array(), bprof = json::array();
    Series sp{"eps=" + num(e), {}, {}}, sb{"eps=" + num(e), {}, {}};
    for (int n = 1; n <= rep.N; ++n) {
      const std::size_t i = n - 1;
      out.table.rows.push_back({num(e), std::to_string(n), num(rep.terms_0[i].real()), num(rep.terms_0[i].imag()),
                                num(rep.terms_6[i].real()), num(rep.terms_6[i].imag()), num(rep.partial[i].real()),
                                num(rep.partial[i].imag()), num(rep.scaled_profile[i]), num(rep.b_profile[i]), cls,
                                num(rep.amplitude_coeff), num(rep.period_coeff), num(rep.reynolds)});
      t0.push_back(jcomplex(rep.terms_0[i]));
      t6.push_back(jcomplex(rep.terms_6[i]));
      part.push_back(jcomplex(rep.partial[i]));
      prof.push_back(jnum(rep.scaled_profile[i]));
      bprof.push_back(jnum(rep.b_profile[i]));
      sp.x.push_back(n);
      sp.y.push_back(rep.scaled_profile[i]);
      sb.x.push_back(n);
      sb.y.push_back(rep.b_profile[i]);
    }
    profiles.push_back(sp);
    ratios.push_back(sb);
    results.push_back({{"epsilon", jnum(e)},
                       {"N", rep.N},
                       {"R_c", jnum(rep.reynolds)},
                       {"terms_0", t0},
                       {"terms_6", t6},
                       {"partial", part},
                       {"A_N", jcomplex(rep.A_N)},
                       {"B_N", jnum(rep.B_N)},
                       {"scaled_profile", prof},
                       {"b_profile", bprof},
                       {"a1_error", jnum(rep.a1_error)},
                       {"classification", cls},
                       {"amplitude_coeff", jnum(rep.amplitude_coeff)},
                       {"period_coeff", jnum(rep.period_coeff)}});
  }
  out.doc = {{"command", "transition"}, {"h_form", cfg.h_form}, {"results", results}};
  if (cfg.plot) {
    cli::write_file(plot_path(cfg, "_profile"),
                    cli::line_chart({"Re(A^N) scaled by |Re(A^1)|", "N", "Re(A^N)"}, profiles));
    cli::write_file(plot_path(cfg, "_ratio"), cli::line_chart({"Interaction ratio B^N", "N", "B^N"}, ratios));
  }
  return out;
}

Output cmd_energy(const RunConfig& cfg) {
  const std::vector<double> eps = eps_or(cfg, {0.0, 1e-4, 1e-3, 1e-2, 2e-2});
  const int m_max = cfg.m_max.value_or(8);
  if (m_max < 5) throw ConfigError("--m-max: energy requires a value in [5, 8]");
  Output out;
  out.table.header = {"epsilon", "m", "R_m", "R_E", "minimizing_m", "R_c", "decay_rate"};
  json results = json::array();
  Series se{"R_E", {}, {}}, sc{"R_c", {}, {}};
  for (double e : eps) {
    const EnergyReport rep = energy_threshold(e, m_max);
    const double Rc = e > 0.0 ? critical_reynolds(e).reynolds : std::numeric_limits<double>::infinity();
    std::optional<double> decay;
    if (cfg.reynolds) decay = decay_rate({e, *cfg.reynolds}, rep.R_E);
    json per_m = json::array();
    for (const auto& [m, Rm] : rep.per_m) {
      per_m.push_back({{"m", m}, {"R_m", jnum(Rm)}});
      out.table.rows.push_back({num(e), std::to_string(m), num(Rm), num(rep.R_E), std::to_string(rep.minimizing_m),
                                num(Rc), decay ? num(*decay) : ""});
    }
    if (rep.at_window_edge) std::cerr << "warning: epsilon = " << num(e) << ": " << rep.warning << "\n";
    json item = {{"epsilon", jnum(e)},
                 {"per_m", per_m},
                 {"R_E", jnum(rep.R_E)},
                 {"minimizing_m", rep.minimizing_m},
                 {"R_c", jnum(Rc)},
                 {"warning", rep.at_window_edge ? json(rep.warning) : json(nullptr)}};
    if (decay) {
      item["reynolds"] = jnum(*cfg.reynolds);
      item["decay_rate"] = jnum(*decay);
    }
    results.push_back(item);
    se.x.push_back(e);
    se.y.push_back(rep.R_E);
    sc.x.push_back(e);
    sc.y.push_back(Rc);
  }
  out.doc = {{"command", "energy"}, {"m_max", m_max}, {"results", results}};
  if (cfg.plot)
    cli::write_file(plot_path(cfg, ""), cli::line_chart({"Energy and linear thresholds", "epsilon", "R", true}, {se, sc}));
  return out;
}

Output cmd_sweep(const RunConfig& cfg) {
  std::vector<double> eps = cfg.epsilon;
  if (eps.empty())
    for (int i = 0; i < 20; ++i) eps.push_back(1e-4 + i * (0.05 - 1e-4) / 19.0);
  const int m_max = cfg.m_max.value_or(3);
  Output out;
  out.table.header = {"epsilon", "m", "R_m"};
  std::vector<Series> curves;
  for (int m = 1; m <= m_max; ++m) curves.push_back({"m=" + std::to_string(m), {}, {}});
  json points = json::array();
  for (double e : eps) {
    json rs = json::array();
    for (int m = 1; m <= m_max; ++m) {
      const double Rm = solve_Rm(m, e);
      out.table.rows.push_back({num(e), std::to_string(m), num(Rm)});
      rs.push_back(jnum(Rm));
      curves[m - 1].x.push_back(e);
      curves[m - 1].y.push_back(Rm);
    }
    points.push_back({{"epsilon", jnum(e)}, {"R_m", rs}});
  }
  json crossings = json::array();
  for (int m = 1; m < m_max; ++m) {
    const auto& a = curves[m - 1].y;
    const auto& b = curves[m].y;
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
      if (((a[i] - b[i]) > 0) != ((a[i + 1] - b[i + 1]) > 0)) {
        const double lo = std::min(eps[i], eps[i + 1]), hi = std::max(eps[i], eps[i + 1]);
        crossings.push_back({{"m_a", m}, {"m_b", m + 1}, {"epsilon", jnum(mode_crossing(m, m + 1, lo, hi))}});
      }
    }
  }
  out.doc = {{"command", "sweep"}, {"m_max", m_max}, {"points", points}, {"crossings", crossings}};
  if (cfg.plot) cli::write_file(plot_path(cfg, ""), cli::line_chart({"R_m against epsilon", "epsilon", "R_m"}, curves));
  return out;
}

Output cmd_field(const RunConfig& cfg) {
  if (cfg.epsilon.size() != 1) throw ConfigError("--epsilon: field requires exactly one value");
  if (!cfg.reynolds) throw ConfigError("--reynolds: field requires a Reynolds number");
  require_positive_eps(cfg.epsilon);
  const double e = cfg.epsilon.front();
  const BifurcatedSolution sol(e, *cfg.reynolds, cfg.truncation, cfg.nodes, parse_form(cfg.h_form));
  const PolarGrid grid = PolarGrid::uniform(cfg.nr, cfg.ntheta);
  Output out;
  out.table.header = {"time", "r", "theta", "w_per", "psi_per"};
  json snaps = json::array();
  for (std::size_t k = 0; k < cfg.times.size(); ++k) {
    const double t = cfg.times[k];
    const PolarField f = sol.evaluate(t, grid);
    json w = json::array(), psi = json::array();
    for (int i = 0; i < f.w.rows(); ++i) {
      json wr = json::array(), pr = json::array();
      for (int j = 0; j < f.w.cols(); ++j) {
        out.table.rows.push_back({num(t), num(grid.r[i]), num(grid.theta[j]), num(f.w(i, j)), num(f.psi(i, j))});
        wr.push_back(jnum(f.w(i, j)));
        pr.push_back(jnum(f.psi(i, j)));
      }
      w.push_back(wr);
      psi.push_back(pr);
    }
    snaps.push_back({{"time", jnum(t)}, {"w_per", w}, {"psi_per", psi}});
    if (cfg.plot)
      cli::write_file(plot_path(cfg, "_t" + std::to_string(k)),
                      cli::polar_map("w_per at t = " + num(t) + " T", grid.r, grid.theta, f.w));
  }
  json r = json::array(), th = json::array();
  for (double x : grid.r) r.push_back(jnum(x));
  for (double x : grid.theta) th.push_back(jnum(x));
  out.doc = {{"command", "field"},
             {"epsilon", jnum(e)},
             {"reynolds", jnum(*cfg.reynolds)},
             {"h_form", cfg.h_form},
             {"beta_31", jnum(sol.beta())},
             {"transition_number", jcomplex(sol.transition_number())},
             {"amplitude", jnum(sol.amplitude())},
             {"period", jnum(sol.period())},
             {"r", r},
             {"theta", th},
             {"snapshots", snaps}};
  return out;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--epsilon", cfg.epsilon, "material constant(s), comma separated")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--truncation", cfg.truncation, "truncation order N")->check(CLI::Range(1, 20));
  sub->add_option("--nodes", cfg.nodes, "radial quadrature nodes")->check(CLI::Range(16, 2000));
  sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--plot", cfg.plot, "also write SVG chart(s) next to --out");
  sub->add_option("--out", cfg.out, "output file (default: standard output)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability and transitions of second-grade-fluid pipe Poiseuille flow"};
  app.require_subcommand(1);
  RunConfig cfg;
  CLI::App* lin = app.add_subcommand("linstab", "lambda_{m,1} table, R_c, PES slope and beta_{3,1} sign chart");
  CLI::App* tr = app.add_subcommand("transition", "transition number A^N, B^N and classification at R_c");
  CLI::App* en = app.add_subcommand("energy", "energy thresholds R_m and R_E");
  CLI::App* sw = app.add_subcommand("sweep", "R_m against epsilon with mode crossings");
  CLI::App* fi = app.add_subcommand("field", "bifurcated pattern on a polar grid");
  for (CLI::App* sub : {lin, tr, en, sw, fi}) add_common(sub, cfg);
  for (CLI::App* sub : {en, fi})
    sub->add_option("--reynolds", cfg.reynolds, "Reynolds number")->check(CLI::PositiveNumber);
  for (CLI::App* sub : {en, sw}) sub->add_option("--m-max", cfg.m_max, "largest azimuthal wavenumber")->check(CLI::Range(1, 8));
  for (CLI::App* sub : {tr, fi})
    sub->add_option("--h-form", cfg.h_form, "bilinear form: vorticity or stated")
        ->check(CLI::IsMember({"vorticity", "stated"}));
  tr->add_option("--degenerate-tol", cfg.degenerate_tol, "relative threshold on |Re A| for a degenerate classification")
      ->check(CLI::NonNegativeNumber);
  fi->add_option("--time", cfg.times, "times as fractions of the period, comma separated")->delimiter(',');
  fi->add_option("--nr", cfg.nr, "radial grid points")->check(CLI::Range(2, 1000));
  fi->add_option("--ntheta", cfg.ntheta, "angular grid points")->check(CLI::Range(3, 2000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    for (double t : cfg.times)
      if (!std::isfinite(t)) throw ConfigError("--time: values must be finite");
    if (cfg.plot && cfg.out.empty()) throw ConfigError("--plot: requires --out to name the SVG files");
    if (!cfg.out.empty() && !std::ofstream(cfg.out, std::ios::app))
      throw ConfigError("--out: cannot open " + cfg.out + " for writing");
    Output out;
    if (lin->parsed()) out = cmd_linstab(cfg);
    else if (tr->parsed()) out = cmd_transition(cfg);
    else if (en->parsed()) out = cmd_energy(cfg);
    else if (sw->parsed()) out = cmd_sweep(cfg);
    else out = cmd_field(cfg);

    const std::string text = cfg.format == "json" ? out.doc.dump(2) + "\n" : out.table.csv();
    if (cfg.out.empty())
      std::cout << text;
    else
      cli::write_file(cfg.out, text);
    if (out.exit_code == kExitDegenerate) std::cerr << "degenerate classification: |Re A| is below the degenerate tolerance\n";
    return out.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const RangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DegenerateError& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
}
