#include "gaplab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>

#include <CLI11.hpp>

#include "gaplab/airy.hpp"
#include "gaplab/eigensolver.hpp"
#include "gaplab/errors.hpp"
#include "gaplab/parallel.hpp"
#include "gaplab/report.hpp"
#include "gaplab/spectral.hpp"

namespace gaplab {

namespace {

double real_or_throw(std::string_view tok, std::string_view what) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (tok.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ParseError(std::string(what) + ": bad number '" + std::string(tok) + "'");
  return v;
}

struct Settings {
  double p = 2.0;
  std::string alpha = "0";
  std::string potential;
  int index = 0;
  double tol = 0.0;
  int n = kDefaultGridSize;
  std::uint64_t seed = 1;
  int count = 10;
  std::string a_grid;
  std::string output = "-";
  std::string format = "json";
  bool samples = false;
};

Json alpha_json(const BoundaryCondition& bc) {
  if (bc.is_dirichlet()) return "dirichlet";
  return bc.alpha();
}

Json problem_inputs(const Problem& pr) {
  return {{"potential", pr.potential().serialize()}, {"p", pr.p()}, {"alpha", alpha_json(pr.bc())}};
}

SolverOptions solver_options(const Settings& s) {
  SolverOptions o;
  o.lambda_tol = s.tol;
  o.grid_n = s.n;
  return o;
}

void validate(const Settings& s) {
  if (!(s.p > 1.0) || !std::isfinite(s.p)) throw ValidationError("--p must exceed 1");
  if (s.tol < 0.0 || !std::isfinite(s.tol)) throw ValidationError("--tol must be non-negative");
  if (s.n < 3 || s.n % 2 == 0) throw ValidationError("--n must be odd and at least 3");
  if (s.index < 0 || s.index > 5) throw ValidationError("--index must lie in [0, 5]");
  if (s.count < 1) throw ValidationError("--count must be at least 1");
  if (s.format != "json" && s.format != "csv") throw ValidationError("--format is json or csv");
}

Json solve_record(const Problem& pr, const Settings& s) {
  const Eigenpair e = solve_eigenpair(pr, s.index, solver_options(s));
  Json j;
  j["kind"] = "eigenpair";
  j["inputs"] = problem_inputs(pr);
  j["index"] = e.index;
  j["lambda"] = e.lambda;
  j["bracket_width"] = e.bracket_width;
  j["iterations"] = e.iterations;
  j["interior_zeros"] = e.interior_zeros;
  j["rayleigh_quotient"] = rayleigh_quotient(e, pr);
  j["riccati_residual"] = riccati_residual(e, pr);
  if (s.samples) {
    j["x"] = e.x;
    j["u"] = e.u;
    j["du"] = e.du;
  }
  return j;
}

std::vector<Json> family_records(FamilyKind kind, const Settings& s, const BoundaryCondition& bc) {
  std::vector<Potential> family;
  if (!s.potential.empty())
    family.push_back(parse_potential(s.potential));
  else
    family = random_family(kind, s.seed, s.count);
  const SolverOptions opts = solver_options(s);
  std::vector<Json> out(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    out[i] = record_json(kind == FamilyKind::symmetric_single_well
                         ? verify_single_well_theorem(family[i], s.p, bc, opts)
                         : verify_convex_theorem(family[i], s.p, bc, opts));
  });
  return out;
}

Json critical_record(double alpha, const Settings& s) {
  const CriticalSlope c = critical_a_search(alpha, solver_options(s));
  VerificationRecord rec;
  rec.claim_id = "critical_slope";
  rec.tolerance = kMomentTol;
  rec.inputs = {{"p", 2.0}, {"alpha", alpha}};
  rec.quantities = {{"a_star", c.a_star},
                    {"gap", c.gap},
                    {"moment", c.moment},
                    {"checked", c.checked ? 1.0 : 0.0},
                    {"two_zero_check", c.two_zero_check ? 1.0 : 0.0},
                    {"interior_zeros", static_cast<double>(c.interior_zeros)},
                    {"psi_left", c.psi_left},
                    {"psi_right", c.psi_right},
                    {"evaluations", static_cast<double>(c.evaluations)}};
  rec.passed = c.checked && c.two_zero_check;
  return record_json(rec);
}

std::vector<Json> asymptotic_records(const BoundaryCondition& bc, const std::vector<double>& grid,
                                     const Settings& s) {
  for (double a : grid)
    if (!(a > 0.0)) throw ValidationError("asymptotics needs positive slopes");
  std::vector<GapReport> gaps(grid.size());
  const SolverOptions opts = solver_options(s);
  parallel_for(grid.size(), [&](std::size_t k) {
    gaps[k] = fundamental_gap(Problem(2.0, Potential::linear(grid[k]), bc), opts);
  });

  std::vector<Json> out;
  std::vector<double> errors;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double a = grid[k];
    const AsymptoticGap model = asymptotic_gap(a, bc);
    const double limit = model.lambda_hat1 - model.lambda_hat0;
    const double scaled = gaps[k].gap / std::cbrt(a * a);
    errors.push_back(std::abs(scaled - limit));
    VerificationRecord rec;
    rec.claim_id = "airy_scaled_gap";
    rec.inputs = {{"p", 2.0}, {"alpha", bc.is_dirichlet() ? InputValue("dirichlet") : bc.alpha()},
                  {"a", a}};
    rec.quantities = {{"gap", gaps[k].gap},
                      {"predicted_gap", model.predicted_gap},
                      {"scaled_gap", scaled},
                      {"limit", limit},
                      {"abs_error", errors.back()},
                      {"rel_error", errors.back() / limit}};
    rec.passed = true;
    out.push_back(record_json(rec));
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < errors.size(); ++k) decreasing = decreasing && errors[k] < errors[k - 1];
  VerificationRecord sum;
  sum.claim_id = "airy_convergence";
  sum.tolerance = 0.1;
  sum.inputs = {{"p", 2.0}, {"alpha", bc.is_dirichlet() ? InputValue("dirichlet") : bc.alpha()}};
  const auto last =
      static_cast<std::size_t>(std::max_element(grid.begin(), grid.end()) - grid.begin());
  const AsymptoticGap model = asymptotic_gap(grid[last], bc);
  const double final_rel = errors[last] / (model.lambda_hat1 - model.lambda_hat0);
  sum.quantities = {{"monotone_decreasing", decreasing ? 1.0 : 0.0},
                    {"largest_a", grid[last]},
                    {"final_rel_error", final_rel}};
  sum.passed = decreasing && final_rel <= sum.tolerance;
  out.push_back(record_json(sum));
  return out;
}

std::vector<Json> sweep_records(const Settings& s, const BoundaryCondition& bc,
                                const std::vector<double>& grid) {
  const Potential base = parse_potential(s.potential.empty() ? "linear:1" : s.potential);
  const SolverOptions opts = solver_options(s);
  std::vector<Json> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const Problem pr(s.p, base.scaled(grid[k]), bc);
    Json inputs = problem_inputs(pr);
    inputs["scale"] = grid[k];
    out[k] = record_json(fundamental_gap(pr, opts), inputs);
  });
  return out;
}

Json config_json(const std::string& command, const Settings& s) {
  Json c;
  c["command"] = command;
  c["p"] = s.p;
  c["alpha"] = s.alpha;
  c["potential"] = s.potential;
  c["index"] = s.index;
  c["tol"] = s.tol;
  c["n"] = s.n;
  c["count"] = s.count;
  c["a_grid"] = s.a_grid;
  c["format"] = s.format;
  return c;
}

}  // namespace

std::vector<double> parse_slope_grid(std::string_view text) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos)
      throw ParseError("a-grid: expected start:stop:step, got '" + std::string(text) + "'");
    const double start = real_or_throw(text.substr(0, c1), "a-grid start");
    const double stop = real_or_throw(text.substr(c1 + 1, c2 - c1 - 1), "a-grid stop");
    const double step = real_or_throw(text.substr(c2 + 1), "a-grid step");
    if (step == 0.0 || (stop - start) * step < 0.0)
      throw ParseError("a-grid: step does not move from start toward stop");
    const double span = (stop - start) / step;
    if (span > 1e6) throw ParseError("a-grid: more than a million points");
    const auto count = static_cast<long>(std::floor(span + 0.5));
    for (long k = 0; k <= count; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    out.push_back(real_or_throw(text.substr(pos, comma - pos), "a-grid value"));
    pos = comma + 1;
  }
  return out;
}

BoundaryCondition parse_boundary(std::string_view text) {
  if (text == "dirichlet") return BoundaryCondition::dirichlet();
  return BoundaryCondition::robin(real_or_throw(text, "--alpha"));
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenpairs and the fundamental gap of -Delta_p u + V|u|^{p-2}u on (-1, 1)",
               "gaplab"};
  app.require_subcommand(1);
  Settings s;

  auto common = [&](CLI::App* c, bool with_p, bool with_potential) {
    if (with_p) c->add_option("--p", s.p, "Exponent p > 1")->capture_default_str();
    c->add_option("--alpha", s.alpha, "Robin parameter or 'dirichlet'")->capture_default_str();
    if (with_potential)
      c->add_option("--potential", s.potential,
                    "const:<c> | linear:<a> | poly:<c0>,... | abs:<c> | samples:<path> | "
                    "pwl:<x>/<v>,...");
    c->add_option("--tol", s.tol, "Eigenvalue tolerance (0 = default)");
    c->add_option("--n", s.n, "Grid size for eigenfunctions")->capture_default_str();
    c->add_option("--output", s.output, "Report path, '-' for stdout")->capture_default_str();
    c->add_option("--format", s.format, "json or csv")->capture_default_str();
  };

  auto* solve = app.add_subcommand("solve", "Eigenpair of a given index");
  common(solve, true, true);
  solve->add_option("--index", s.index, "Eigenvalue index (0-5)")->capture_default_str();
  solve->add_flag("--samples", s.samples, "Include the sampled eigenfunction");
  auto* gap = app.add_subcommand("gap", "Fundamental gap");
  common(gap, true, true);
  auto* sw = app.add_subcommand("verify-single-well", "Symmetric single-well potentials vs V = 0");
  common(sw, true, true);
  auto* cv = app.add_subcommand("verify-convex", "Convex potentials vs their secant-slope line");
  common(cv, true, true);
  for (auto* c : {sw, cv}) {
    c->add_option("--seed", s.seed, "Family seed")->capture_default_str();
    c->add_option("--count", s.count, "Family size")->capture_default_str();
  }
  auto* lin = app.add_subcommand("verify-linear", "Gap of a x vs V = 0 over a slope grid (p = 2)");
  common(lin, false, false);
  lin->add_option("--a-grid", s.a_grid, "start:stop:step or a,b,c (default -20:20:1)");
  auto* crit = app.add_subcommand("critical-a", "Slope minimising the gap of a x (p = 2)");
  common(crit, false, false);
  auto* asym = app.add_subcommand("asymptotics", "Large-slope Airy limit of the gap (p = 2)");
  common(asym, false, false);
  asym->add_option("--a-grid", s.a_grid, "Slopes (default 100,1000,10000)");
  auto* sweep = app.add_subcommand("sweep", "Gap of a * V over a grid of scales");
  common(sweep, true, true);
  sweep->add_option("--a-grid", s.a_grid, "start:stop:step or a,b,c (default -20:20:1)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    validate(s);
    const BoundaryCondition bc = parse_boundary(s.alpha);
    Report report;
    report.config = config_json(command, s);

    const std::string spec = s.potential.empty() ? "const:0" : s.potential;
    if (command == "solve") {
      report.records.push_back(solve_record(Problem(s.p, parse_potential(spec), bc), s));
    } else if (command == "gap") {
      const Problem pr(s.p, parse_potential(spec), bc);
      report.records.push_back(record_json(fundamental_gap(pr, solver_options(s)), problem_inputs(pr)));
    } else if (command == "verify-single-well" || command == "verify-convex") {
      report.seed = s.seed;
      report.records = family_records(command == "verify-convex" ? FamilyKind::convex
                                                                 : FamilyKind::symmetric_single_well,
                                      s, bc);
    } else if (command == "verify-linear") {
      if (bc.is_dirichlet()) throw ValidationError("verify-linear needs a real --alpha");
      const auto grid = parse_slope_grid(s.a_grid.empty() ? "-20:20:1" : s.a_grid);
      report.records.push_back(record_json(verify_linear_theorem(bc.alpha(), grid, solver_options(s))));
    } else if (command == "critical-a") {
      if (bc.is_dirichlet()) throw ValidationError("critical-a needs a real --alpha");
      report.records.push_back(critical_record(bc.alpha(), s));
    } else if (command == "asymptotics") {
      const auto grid = parse_slope_grid(s.a_grid.empty() ? "100,1000,10000" : s.a_grid);
      report.records = asymptotic_records(bc, grid, s);
    } else if (command == "sweep") {
      const auto grid = parse_slope_grid(s.a_grid.empty() ? "-20:20:1" : s.a_grid);
      report.records = sweep_records(s, bc, grid);
    }

    emit_report(report, s.format == "csv" ? ReportFormat::csv : ReportFormat::json, s.output, out);
    for (const auto& r : report.records)
      if (r.contains("passed") && !r["passed"].get<bool>()) return kExitFailed;
    return kExitOk;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace gaplab
