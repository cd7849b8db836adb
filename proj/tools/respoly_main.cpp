#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "respoly/respoly.hpp"

namespace {

using respoly::io::JsonWriter;

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

/// Verbosity from the RESPOLY_LOG environment variable: unset or empty is
/// silent, a decimal value selects the level, any other nonempty value is 1.
int log_level() {
  static const int level = [] {
    const char* raw = std::getenv("RESPOLY_LOG");
    if (raw == nullptr || *raw == '\0') return 0;
    char* end = nullptr;
    const long parsed = std::strtol(raw, &end, 10);
    return (end != raw && *end == '\0') ? static_cast<int>(parsed) : 1;
  }();
  return level;
}

void log_line(int level, const std::string& text) {
  if (log_level() >= level)
    std::fprintf(stderr, "respoly: %s\n", text.c_str());
}

void write_set(JsonWriter& w, const respoly::RealSet& set) {
  w.key("intervals").begin_array();
  for (const respoly::Interval& iv : set.intervals)
    w.begin_array().value(iv.lo).value(iv.hi).end_array();
  w.end_array();
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
    std::fputc('\n', stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw respoly::InvalidInput("cannot write file: " + out_path);
  f << payload << '\n';
}

respoly::NormalizedProblem make_problem(const std::string& set_arg,
                                        std::optional<double> x0_flag) {
  const respoly::io::ProblemSpec spec = respoly::io::load_problem(set_arg);
  const std::optional<double> x0 = x0_flag ? x0_flag : spec.x0;
  if (!x0)
    throw respoly::InvalidInput(
        "x0 is required (either --x0 or an \"x0\" member in the set JSON)");
  return respoly::locate(spec.set, *x0);
}

int cmd_solve(const std::string& set_arg, std::optional<double> x0, int n,
              double tol, int grid, const std::string& out_path) {
  const respoly::NormalizedProblem prob = make_problem(set_arg, x0);
  respoly::SolverOptions opts;
  opts.tol = tol;
  const respoly::ResidualSolution sol = respoly::solve_residual(prob, n, opts);
  log_line(2, strf("solve: norm %.17g, degree %d, %d iterations, defect %.3g",
                   sol.norm, sol.effective_degree, sol.iterations,
                   sol.levelling_defect));

  JsonWriter w;
  w.begin_object();
  w.key("command").value("solve");
  w.key("set").begin_object();
  write_set(w, prob.set);
  w.end_object();
  w.key("x0").value(prob.x0);
  w.key("n").value(sol.n);
  w.key("solution").begin_object();
  w.key("norm").value(sol.norm);
  w.key("effective_degree").value(sol.effective_degree);
  w.key("degenerate").value(sol.degenerate);
  w.key("converged").value(sol.converged);
  w.key("iterations").value(sol.iterations);
  w.key("levelling_defect").value(sol.levelling_defect);
  w.key("sign_at_top").value(sol.sign_at_top);
  w.key("basis").begin_object();
  w.key("lo").value(sol.poly.basis().lo);
  w.key("hi").value(sol.poly.basis().hi);
  w.end_object();
  w.key("coefficients").begin_array();
  for (double c : sol.poly.coeffs()) w.value(c);
  w.end_array();
  w.key("monomial_coefficients").begin_array();
  for (double c : respoly::to_monomial(sol.poly)) w.value(c);
  w.end_array();
  w.key("reference").begin_object();
  w.key("points").begin_array();
  for (double p : sol.reference.points) w.value(p);
  w.end_array();
  w.key("split").value(sol.reference.split);
  w.end_object();
  if (!sol.diagnostic.empty()) w.key("diagnostic").value(sol.diagnostic);
  w.end_object();
  if (grid > 0) {
    const respoly::oracle::OracleResult lp =
        respoly::oracle::minimax(prob, n, grid);
    w.key("oracle").begin_object();
    w.key("t").value(lp.t);
    w.key("grid_points_per_band").value(grid);
    w.key("iterations").value(lp.iterations);
    w.end_object();
  } else {
    w.key("oracle").null();
  }
  w.end_object();
  emit(w.str(), out_path);
  return 0;
}

int cmd_green(const std::string& set_arg, std::optional<double> x0,
              std::optional<double> at_re, double at_im,
              const std::string& out_path) {
  const respoly::io::ProblemSpec spec = respoly::io::load_problem(set_arg);
  const respoly::GreenData gd = respoly::equilibrium(spec.set);
  const std::optional<double> pole = x0 ? x0 : spec.x0;

  JsonWriter w;
  w.begin_object();
  w.key("command").value("green");
  w.key("set").begin_object();
  write_set(w, spec.set);
  w.end_object();
  w.key("equilibrium").begin_object();
  w.key("capacity").value(gd.capacity);
  w.key("log_capacity").value(gd.log_capacity);
  w.key("band_measures").begin_array();
  for (double mu : gd.band_measure) w.value(mu);
  w.end_array();
  w.key("omega").begin_array();
  for (double om : respoly::character_vector(gd)) w.value(om);
  w.end_array();
  w.key("critical_points").begin_array();
  for (double r : gd.q_roots) w.value(r);
  w.end_array();
  w.key("pw_infinity").value(respoly::pw_constant(gd));
  w.end_object();
  if (at_re) {
    const std::complex<double> z(*at_re, at_im);
    w.key("at").begin_object();
    w.key("re").value(z.real());
    w.key("im").value(z.imag());
    w.key("green").value(respoly::green(gd, z));
    w.end_object();
  } else {
    w.key("at").null();
  }
  if (pole) {
    const respoly::PoleData pd = respoly::green_pole(spec.set, *pole);
    w.key("pole").begin_object();
    w.key("x0").value(*pole);
    w.key("g_at_x0").value(pd.g_at_x0);
    w.key("pw").value(pd.pw_constant);
    w.key("critical").begin_array();
    for (const respoly::CriticalPoint& cp : pd.critical) {
      w.begin_object();
      w.key("at_infinity").value(cp.at_infinity);
      if (cp.at_infinity)
        w.key("location").value("inf");
      else
        w.key("location").value(cp.location);
      w.key("value").value(cp.value);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  } else {
    w.key("pole").null();
  }
  w.end_object();
  emit(w.str(), out_path);
  return 0;
}

int cmd_bands(const std::string& set_arg, std::optional<double> x0, int n,
              double tol, const std::string& out_path) {
  const respoly::NormalizedProblem prob = make_problem(set_arg, x0);
  respoly::SolverOptions opts;
  opts.tol = tol;
  const respoly::ResidualSolution sol = respoly::solve_residual(prob, n, opts);
  const respoly::BandSet bs = respoly::band_set(prob, sol);
  log_line(2, strf("bands: %zu interval bands, %zu collapsed, %zu junctions",
                   bs.bands.intervals.size(), bs.collapsed.size(),
                   bs.junctions.size()));
  const std::vector<respoly::ZeroInfo> zeros = respoly::zero_report(prob, sol);
  // Quadrature measures are only meaningful when every band is carried as an
  // interval; collapsed point bands leave them undefined.
  std::vector<double> measures;
  if (bs.collapsed.empty())
    measures = respoly::equilibrium(bs.bands).band_measure;

  JsonWriter w;
  w.begin_object();
  w.key("command").value("bands");
  w.key("set").begin_object();
  write_set(w, prob.set);
  w.end_object();
  w.key("x0").value(prob.x0);
  w.key("n").value(sol.n);
  w.key("norm").value(sol.norm);
  w.key("effective_degree").value(sol.effective_degree);
  w.key("bands").begin_array();
  for (const respoly::Interval& iv : bs.bands.intervals)
    w.begin_array().value(iv.lo).value(iv.hi).end_array();
  w.end_array();
  w.key("junctions").begin_array();
  for (double j : bs.junctions) w.value(j);
  w.end_array();
  w.key("collapsed").begin_array();
  for (double z : bs.collapsed) w.value(z);
  w.end_array();
  w.key("split_band_count").value(bs.split_band_count);
  w.key("norm_identity_defect").value(respoly::norm_identity_defect(prob, sol));
  w.key("zeros").begin_array();
  for (const respoly::ZeroInfo& gz : zeros) {
    w.begin_object();
    w.key("x").value(gz.x);
    switch (gz.where) {
      case respoly::ZeroInfo::Where::band:
        w.key("location").value("band");
        w.key("index").value(static_cast<long>(gz.index));
        break;
      case respoly::ZeroInfo::Where::gap:
        w.key("location").value("gap");
        w.key("index").value(static_cast<long>(gz.index));
        break;
      case respoly::ZeroInfo::Where::unbounded:
        w.key("location").value("unbounded");
        break;
    }
    w.end_object();
  }
  w.end_array();
  w.key("band_measures").begin_array();
  for (double mu : measures) w.value(mu);
  w.end_array();
  w.end_object();
  emit(w.str(), out_path);
  return 0;
}

int cmd_widom(const std::string& set_arg, std::optional<double> x0, int n_max,
              double tol, int jobs, const std::string& format,
              const std::string& out_path) {
  const respoly::NormalizedProblem prob = make_problem(set_arg, x0);
  respoly::SolverOptions opts;
  opts.tol = tol;
  const respoly::WidomSweep sweep =
      respoly::widom_sweep(prob, n_max, opts, jobs);
  log_line(2, strf("widom-sweep: W in [%.17g, %.17g], bounds [%.17g, %.17g]",
                   sweep.min_widom, sweep.max_widom, sweep.lower_bound,
                   sweep.upper_bound));

  if (format == "csv") {
    std::string out = "# widom_sweep csv v1\n";
    out += "n,norm,effective_degree,degenerate,converged,widom,char_distance";
    for (const respoly::WidomRecord& rec : sweep.records) {
      out += '\n';
      out += std::to_string(rec.n) + ',';
      out += respoly::io::format_double(rec.norm) + ',';
      out += std::to_string(rec.effective_degree) + ',';
      out += (rec.degenerate ? "1," : "0,");
      out += (rec.converged ? "1," : "0,");
      out += respoly::io::format_double(rec.widom) + ',';
      out += respoly::io::format_double(rec.char_distance);
    }
    emit(out, out_path);
    return 0;
  }

  JsonWriter w;
  w.begin_object();
  w.key("command").value("widom_sweep");
  w.key("set").begin_object();
  write_set(w, prob.set);
  w.end_object();
  w.key("x0").value(prob.x0);
  w.key("n_max").value(n_max);
  w.key("omega").begin_array();
  for (double om : sweep.omega) w.value(om);
  w.end_array();
  w.key("g_at_x0").value(sweep.g_at_x0);
  w.key("pw").value(sweep.pw);
  w.key("lower_bound").value(sweep.lower_bound);
  w.key("upper_bound").value(sweep.upper_bound);
  w.key("single_band").value(sweep.single_band);
  w.key("min_widom").value(sweep.min_widom);
  w.key("max_widom").value(sweep.max_widom);
  w.key("liminf_estimate").value(sweep.liminf_estimate);
  w.key("limsup_estimate").value(sweep.limsup_estimate);
  w.key("records").begin_array();
  for (const respoly::WidomRecord& rec : sweep.records) {
    w.begin_object();
    w.key("n").value(rec.n);
    w.key("norm").value(rec.norm);
    w.key("effective_degree").value(rec.effective_degree);
    w.key("degenerate").value(rec.degenerate);
    w.key("converged").value(rec.converged);
    w.key("widom").value(rec.widom);
    w.key("char_distance").value(rec.char_distance);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  emit(w.str(), out_path);
  return 0;
}

int cmd_orbit(const std::string& set_arg, int n_max, double eps,
              const std::string& out_path) {
  const respoly::io::ProblemSpec spec = respoly::io::load_problem(set_arg);
  const respoly::GreenData gd = respoly::equilibrium(spec.set);
  const std::vector<double> omega = respoly::character_vector(gd);
  const std::vector<respoly::NearReturn> hits =
      respoly::near_returns(omega, n_max, eps);

  JsonWriter w;
  w.begin_object();
  w.key("command").value("orbit");
  w.key("set").begin_object();
  write_set(w, spec.set);
  w.end_object();
  w.key("n_max").value(n_max);
  w.key("eps").value(eps);
  w.key("omega").begin_array();
  for (double om : omega) w.value(om);
  w.end_array();
  w.key("near_returns").begin_array();
  for (const respoly::NearReturn& nr : hits) {
    w.begin_object();
    w.key("n").value(nr.n);
    w.key("distance").value(nr.distance);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  emit(w.str(), out_path);
  return 0;
}

int cmd_verify(bool full, const std::string& out_path) {
  const respoly::VerifyReport rep =
      full ? respoly::verify_full() : respoly::verify_quick();
  for (const respoly::VerifyCheck& c : rep.checks)
    log_line(2, strf("verify: %-32s %s", c.name.c_str(),
                     c.passed ? "pass" : "FAIL"));
  JsonWriter w;
  w.begin_object();
  w.key("command").value("verify");
  w.key("mode").value(full ? "full" : "quick");
  w.key("all_passed").value(rep.all_passed);
  w.key("checks").begin_array();
  for (const respoly::VerifyCheck& c : rep.checks) {
    w.begin_object();
    w.key("name").value(c.name);
    w.key("passed").value(c.passed);
    w.key("observed").value(c.observed);
    w.key("expected").value(c.expected);
    w.key("bound").value(c.bound);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  emit(w.str(), out_path);
  return rep.all_passed ? 0 : 3;
}

int cmd_examples() {
  struct Row {
    std::string label;
    double computed;
    double exact;
  };
  std::vector<Row> rows;

  const respoly::NormalizedProblem unit =
      respoly::locate(respoly::validate_set({{-1.0, 1.0}}), 2.0);
  // On a single interval the norm is the reciprocal of the Chebyshev
  // polynomial at the normalization point; track its values by recurrence.
  double cheb_prev = 1.0, cheb = 2.0;
  for (int k = 1; k <= 4; ++k) {
    rows.push_back({strf("r    [-1,1]  x0 = 2  n = %d", k),
                    respoly::solve_residual(unit, k).norm, 1.0 / cheb});
    const double cheb_next = 4.0 * cheb - cheb_prev;
    cheb_prev = cheb;
    cheb = cheb_next;
  }

  const respoly::NormalizedProblem sym =
      respoly::locate(respoly::validate_set({{-2.0, -1.0}, {1.0, 2.0}}), 0.0);
  const double exact_sym[4] = {1.0, 3.0 / 5.0, 3.0 / 5.0, 9.0 / 41.0};
  for (int k = 1; k <= 4; ++k)
    rows.push_back({strf("r    [-2,-1]u[1,2]  x0 = 0  n = %d", k),
                    respoly::solve_residual(sym, k).norm, exact_sym[k - 1]});

  const respoly::GreenData gd_unit = respoly::equilibrium(unit.set);
  const respoly::GreenData gd_sym = respoly::equilibrium(sym.set);
  rows.push_back({"cap  [-1,1]", gd_unit.capacity, 0.5});
  rows.push_back({"g    [-1,1]  at 2", respoly::green(gd_unit, 2.0),
                  std::log(2.0 + std::sqrt(3.0))});
  rows.push_back(
      {"cap  [-2,-1]u[1,2]", gd_sym.capacity, std::sqrt(3.0) / 2.0});
  rows.push_back({"g    [-2,-1]u[1,2]  at 0", respoly::green(gd_sym, 0.0),
                  0.5 * std::log(3.0)});
  rows.push_back({"PW   [-2,-1]u[1,2]", respoly::pw_constant(gd_sym),
                  0.5 * std::log(3.0)});

  std::fputs("closed-form instances\n\n", stdout);
  std::fprintf(stdout, "  %-34s %-24s %-24s %s\n", "instance", "computed",
               "exact", "defect");
  for (const Row& row : rows)
    std::fprintf(stdout, "  %-34s %.17e %.17e %.2e\n", row.label.c_str(),
                 row.computed, row.exact,
                 std::abs(row.computed - row.exact));

  std::fputs(
      "\nready-to-run commands\n"
      "\n"
      "  # norm and certificate for a two-band set\n"
      "  respoly solve --set '{\"intervals\": [[-2,-1],[1,2]], \"x0\": 0}'"
      " --n 4\n"
      "\n"
      "  # capacity, band masses, Green's function values\n"
      "  respoly green --set '[[-2,-1],[1,2]]' --x0 0 --at 1 --imag 0.5\n"
      "\n"
      "  # level set, junctions, and zeros of the degree-2 solution\n"
      "  respoly bands --set '[[-2,-1],[1,1.5]]' --x0 0 --n 2\n"
      "\n"
      "  # Widom factors for n = 1..24 as CSV, four worker threads\n"
      "  respoly widom-sweep --set '{\"intervals\": [[-2,-1],[1,2]],"
      " \"x0\": 0}' --n-max 24 --jobs 4 --format csv\n"
      "\n"
      "  # orbit near-returns of the band masses\n"
      "  respoly orbit --set '[[-2,-1],[1,2]]' --n-max 50 --eps 0.05\n"
      "\n"
      "  # built-in self checks, heavier suite\n"
      "  respoly verify --suite full\n",
      stdout);
  return 0;
}

void diagnostic(const char* type, const char* message) {
  JsonWriter w;
  w.begin_object();
  w.key("error").begin_object();
  w.key("type").value(type);
  w.key("message").value(message);
  w.end_object();
  w.end_object();
  std::fprintf(stderr, "%s\n", w.str().c_str());
}

int run(int argc, char** argv) {
  CLI::App app{"residual polynomials on unions of intervals"};
  app.require_subcommand(1);

  std::string set_arg, out_path, format = "json", suite = "quick";
  std::optional<double> x0, at_re;
  double at_im = 0.0, tol = 1e-12, eps = 0.01;
  int n = 0, n_max = 1, jobs = 1, grid = 2000;

  CLI::App* solve = app.add_subcommand("solve", "extremal polynomial and norm");
  solve->add_option("--set", set_arg, "set JSON (inline or file path)")
      ->required();
  solve->add_option("--x0", x0, "normalization point");
  solve->add_option("--n", n, "degree bound")->required();
  solve->add_option("--tol", tol, "levelling tolerance");
  solve->add_option(
      "--grid", grid,
      "grid points per band for the LP cross-check (default 2000, 0 = off)");
  solve->add_option("--out", out_path, "write output to this file");

  CLI::App* greenc = app.add_subcommand("green", "equilibrium and Green data");
  greenc->add_option("--set", set_arg, "set JSON (inline or file path)")
      ->required();
  greenc->add_option("--x0", x0, "pole for the shifted Green's function");
  greenc->add_option("--at", at_re, "evaluation point, real part");
  greenc->add_option("--imag", at_im, "evaluation point, imaginary part");
  greenc->add_option("--out", out_path, "write output to this file");

  CLI::App* bands = app.add_subcommand("bands", "level set of the solution");
  bands->add_option("--set", set_arg, "set JSON (inline or file path)")
      ->required();
  bands->add_option("--x0", x0, "normalization point");
  bands->add_option("--n", n, "degree bound")->required();
  bands->add_option("--tol", tol, "levelling tolerance");
  bands->add_option("--out", out_path, "write output to this file");

  CLI::App* widom = app.add_subcommand("widom-sweep", "Widom factors over n");
  widom->add_option("--set", set_arg, "set JSON (inline or file path)")
      ->required();
  widom->add_option("--x0", x0, "normalization point");
  widom->add_option("--n-max", n_max, "largest degree bound")->required();
  widom->add_option("--tol", tol, "levelling tolerance");
  widom->add_option("--jobs", jobs, "worker threads");
  widom->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  widom->add_option("--out", out_path, "write output to this file");

  CLI::App* orbit = app.add_subcommand("orbit", "near-returns of the orbit");
  orbit->add_option("--set", set_arg, "set JSON (inline or file path)")
      ->required();
  orbit->add_option("--n-max", n_max, "largest index")->required();
  orbit->add_option("--eps", eps, "return threshold");
  orbit->add_option("--out", out_path, "write output to this file");

  CLI::App* verify = app.add_subcommand("verify", "built-in self checks");
  verify->add_option("--suite", suite, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--out", out_path, "write output to this file");

  CLI::App* examples = app.add_subcommand(
      "examples", "closed-form defect table and ready-to-run command lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  log_line(1, strf("%s: tol = %g, grid = %d, jobs = %d", name.c_str(), tol,
                   grid, jobs));
  const auto started = std::chrono::steady_clock::now();
  int code = 1;
  if (solve->parsed()) code = cmd_solve(set_arg, x0, n, tol, grid, out_path);
  if (greenc->parsed()) code = cmd_green(set_arg, x0, at_re, at_im, out_path);
  if (bands->parsed()) code = cmd_bands(set_arg, x0, n, tol, out_path);
  if (widom->parsed())
    code = cmd_widom(set_arg, x0, n_max, tol, jobs, format, out_path);
  if (orbit->parsed()) code = cmd_orbit(set_arg, n_max, eps, out_path);
  if (verify->parsed()) code = cmd_verify(suite == "full", out_path);
  if (examples->parsed()) code = cmd_examples();
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - started)
                        .count();
  log_line(1, strf("%s: exit %d after %.1f ms", name.c_str(), code, ms));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const respoly::InvalidInput& e) {
    diagnostic("invalid_input", e.what());
    return 1;
  } catch (const respoly::InvariantViolation& e) {
    diagnostic("invariant_violation", e.what());
    return 3;
  } catch (const respoly::NumericalFailure& e) {
    diagnostic("numerical_failure", e.what());
    return 2;
  } catch (const std::exception& e) {
    diagnostic("numerical_failure", e.what());
    return 2;
  }
}
