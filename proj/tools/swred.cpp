// Command-line laboratory for the dimensionally reduced Seiberg-Witten
// system on a flat torus.  Every verification and solve in the library is
// exposed as a subcommand that emits a machine-readable JSON report (one
// object per run, resolved configuration and tool version embedded) and
// exits with a stable code:
//
//   0  the run's checks passed / the solve converged
//   1  a verification or convergence failure
//   2  a usage or configuration error
//
// Options resolve in three layers: built-in per-command defaults, then a
// flat "key = value" file given with --config, then command-line flags.
// The environment variable SWRED_SEED overrides the seed from the first
// two layers but loses to an explicit --seed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "swred/configuration.hpp"
#include "swred/hk.hpp"
#include "swred/io.hpp"
#include "swred/lift4d.hpp"
#include "swred/linear.hpp"
#include "swred/residuals.hpp"
#include "swred/solver.hpp"
#include "swred/spectral.hpp"

namespace {

using nlohmann::json;
using namespace swred;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  RunConfig cli;
};

void add_common_options(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path,
                  "flat 'key = value' config file read before flags");
  sub->add_option("--out", o.out_path,
                  "write the JSON report here instead of stdout");
  sub->add_option("--n", o.cli.n, "grid samples per axis (even, >= 4)");
  sub->add_option("--side", o.cli.side, "torus period");
  sub->add_option("--seed", o.cli.seed, "random seed");
}

// defaults <- config file <- SWRED_SEED <- command-line flags
RunConfig resolve_config(const CommonOpts& o, const RunConfig& defaults) {
  RunConfig cfg = defaults;
  if (!o.config_path.empty())
    merge_run_config(cfg, load_run_config(o.config_path));
  if (const char* env = std::getenv("SWRED_SEED")) {
    std::istringstream ss(std::string("seed = ") + env);
    try {
      merge_run_config(cfg, parse_run_config(ss));
    } catch (const ConfigError&) {
      throw ConfigError(std::string("SWRED_SEED: cannot parse '") + env +
                        "'");
    }
  }
  merge_run_config(cfg, o.cli);
  validate_run_config(cfg);
  return cfg;
}

json config_json(const RunConfig& cfg) {
  json j = json::object();
  if (cfg.n) j["n"] = *cfg.n;
  if (cfg.side) j["side"] = *cfg.side;
  if (cfg.seed) j["seed"] = *cfg.seed;
  if (cfg.c2) j["c2"] = *cfg.c2;
  if (cfg.phase) j["phase"] = *cfg.phase;
  if (cfg.tol) j["tol"] = *cfg.tol;
  if (cfg.samples) j["samples"] = *cfg.samples;
  if (cfg.max_iters) j["max_iters"] = *cfg.max_iters;
  if (cfg.energy_tol) j["energy_tol"] = *cfg.energy_tol;
  if (cfg.perturb) j["perturb"] = *cfg.perturb;
  if (cfg.t) j["t"] = *cfg.t;
  if (cfg.max_mode) j["max_mode"] = *cfg.max_mode;
  if (cfg.method) j["method"] = *cfg.method;
  return j;
}

json base_report(const std::string& command, const RunConfig& cfg) {
  json j;
  j["tool_version"] = tool_version();
  j["command"] = command;
  j["config"] = config_json(cfg);
  return j;
}

void emit_report(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out)
      throw ConfigError("cannot open '" + out_path + "' for writing");
    out << j.dump(2) << '\n';
  }
}

Configuration explicit_base(const RunConfig& cfg) {
  const TorusGrid g{*cfg.n, *cfg.side};
  return explicit_torus_solution(
      g, explicit_solution_amplitude(*cfg.c2, *cfg.phase), *cfg.c2);
}

// ---------------------------------------------------------------- commands

int run_verify_explicit(const CommonOpts& o) {
  RunConfig defaults;
  defaults.n = 32;
  defaults.side = kTwoPi;
  defaults.c2 = 1.0;
  defaults.phase = 0.0;
  defaults.tol = 1e-12;
  const RunConfig cfg = resolve_config(o, defaults);

  const Configuration c = explicit_base(cfg);
  const ResidualBundle r = residuals(c);
  const double m1 = max_abs(r.r1.f);
  const double m2 = max_abs(r.r2.f);
  const double m3a = max_abs(r.r3a);
  const double m3b = max_abs(r.r3b);
  const double worst = std::max({m1, m2, m3a, m3b});
  const bool pass = worst < *cfg.tol;

  json j = base_report("verify-explicit", cfg);
  j["residual_max"] = {{"r1", m1}, {"r2", m2}, {"r3a", m3a}, {"r3b", m3b}};
  j["max_residual"] = worst;
  j["pass"] = pass;
  emit_report(j, o.out_path);
  if (!pass)
    std::cerr << "verify-explicit: max residual " << worst
              << " is not below tol " << *cfg.tol << '\n';
  return pass ? 0 : 1;
}

int run_hk_check(const CommonOpts& o, bool inject_sign_fault) {
  RunConfig defaults;
  defaults.n = 8;
  defaults.side = kTwoPi;
  defaults.seed = 20;
  defaults.samples = 100;
  defaults.tol = 1e-11;
  const RunConfig cfg = resolve_config(o, defaults);

  const TorusGrid g{*cfg.n, *cfg.side};
  std::map<std::string, double> worst;
  for (int s = 0; s < *cfg.samples; ++s) {
    const IdentityReport rep = hyperkahler_identity_check(
        g, static_cast<unsigned>(*cfg.seed + s), inject_sign_fault);
    for (const auto& [name, dev] : rep.deviations)
      worst[name] = std::max(worst[name], dev);
  }
  std::string failing;
  double worst_dev = 0.0;
  json identities = json::object();
  for (const auto& [name, dev] : worst) {
    identities[name] = dev;
    if (dev > worst_dev) {
      worst_dev = dev;
      failing = name;
    }
  }
  const bool pass = worst_dev < *cfg.tol;

  json j = base_report("hk-check", cfg);
  j["identities"] = identities;
  j["worst_deviation"] = worst_dev;
  j["injected_sign_fault"] = inject_sign_fault;
  j["pass"] = pass;
  if (!pass) j["failing_identity"] = failing;
  emit_report(j, o.out_path);
  if (!pass)
    std::cerr << "hk-check: identity '" << failing << "' deviates by "
              << worst_dev << " (tol " << *cfg.tol << ")\n";
  return pass ? 0 : 1;
}

json dimension_report_json(const DimensionReport& r) {
  return {{"kernel_dim", r.kernel_dim},   {"cokernel_dim", r.cokernel_dim},
          {"index", r.index},             {"kernel_gap", r.kernel_gap},
          {"cokernel_gap", r.cokernel_gap}, {"n", r.n},
          {"max_mode", r.max_mode},       {"t", r.t}};
}

int run_linearize(const CommonOpts& o, bool sigma) {
  RunConfig defaults;
  defaults.n = 8;
  defaults.side = kTwoPi;
  // c2 = 1/2 keeps the base configuration at bandwidth 1, so the default
  // analysis band n/4 fits the grid exactly even at n = 8
  defaults.c2 = 0.5;
  defaults.phase = 0.0;
  defaults.t = 1.0;
  const RunConfig cfg = resolve_config(o, defaults);
  const TorusGrid g{*cfg.n, *cfg.side};

  json j = base_report("linearize", cfg);
  if (sigma) {
    const SigmaReport s = sigma_tangent_dim(g, cfg.max_mode.value_or(-1));
    j["sigma"] = {{"harmonic_dim", s.harmonic_dim},
                  {"dbar_kernel_dim", s.dbar_kernel_dim},
                  {"total", s.total}};
    emit_report(j, o.out_path);
    return 0;
  }

  const Configuration c = explicit_base(cfg);
  KernelOptions opt;
  if (cfg.max_mode) opt.max_mode = *cfg.max_mode;
  const DeformationAnalysis an = analyze_deformations(c, *cfg.t, opt);
  j["dimension_report"] = dimension_report_json(an.report);

  // At t = 0 the linearization decouples into a (connection, Higgs) block
  // and a spinor block; report how each kernel vector distributes over the
  // four slots so the decomposition is visible in the artifact.
  if (*cfg.t == 0.0) {
    json blocks = json::array();
    for (const TangentVector& x : an.kernel_basis) {
      const double total = tangent_inner(x, x);
      TangentVector pa = zero_tangent(g);
      pa.alpha = x.alpha;
      TangentVector pb1 = zero_tangent(g);
      pb1.beta1 = x.beta1;
      TangentVector pb2 = zero_tangent(g);
      pb2.beta2 = x.beta2;
      TangentVector pg = zero_tangent(g);
      pg.gamma = x.gamma;
      blocks.push_back({{"alpha", tangent_inner(pa, pa) / total},
                        {"beta1", tangent_inner(pb1, pb1) / total},
                        {"beta2", tangent_inner(pb2, pb2) / total},
                        {"gamma", tangent_inner(pg, pg) / total}});
    }
    j["kernel_slot_fractions"] = blocks;
  }
  emit_report(j, o.out_path);
  return 0;
}

struct SolveFlags {
  std::string initial_path;
  std::string trace_path;
  std::string dump_prefix;
  std::string save_final_path;
  bool emit_plot_data = false;
  bool gauge_fix = false;
};

json trace_json(const std::vector<SolveStep>& trace) {
  json arr = json::array();
  for (const SolveStep& s : trace)
    arr.push_back({{"iter", s.iteration},
                   {"energy", s.energy},
                   {"r1", s.r1},
                   {"r2", s.r2},
                   {"r3a", s.r3a},
                   {"r3b", s.r3b},
                   {"step", s.step}});
  return arr;
}

json solve_report_json(const SolveReport& r) {
  return {{"iterations", r.iterations},
          {"initial_energy", r.initial_energy},
          {"final_energy", r.final_energy},
          {"residual_norms",
           {{"r1", r.r1_norm},
            {"r2", r.r2_norm},
            {"r3a", r.r3a_norm},
            {"r3b", r.r3b_norm}}},
          {"gauge_fix_residual", r.gauge_fix_residual},
          {"converged", r.converged},
          {"trace", trace_json(r.trace)}};
}

void dump_fields(const Configuration& c, const SolveFlags& f) {
  const std::string prefix =
      f.dump_prefix.empty() ? std::string("fields") : f.dump_prefix;
  const std::pair<const char*, const ScalarField*> fields[] = {
      {"a", &c.connection.a},
      {"psi1", &c.spinor.psi1},
      {"psi2", &c.spinor.psi2},
      {"phi", &c.higgs.phi}};
  for (const auto& [name, field] : fields) {
    if (!f.dump_prefix.empty()) {
      std::ofstream csv(prefix + "_" + name + ".csv");
      if (!csv)
        throw ConfigError("cannot write field dump with prefix '" + prefix +
                          "'");
      write_field_csv(csv, *field);
    }
    if (f.emit_plot_data) {
      std::ofstream dat(prefix + "_" + name + ".dat");
      if (!dat)
        throw ConfigError("cannot write plot data with prefix '" + prefix +
                          "'");
      write_plot_grid(dat, *field);
    }
  }
}

int run_solve(const CommonOpts& o, const SolveFlags& f) {
  RunConfig defaults;
  defaults.n = 8;
  defaults.side = kTwoPi;
  defaults.seed = 1;
  defaults.c2 = 1.0;
  defaults.phase = 0.0;
  defaults.perturb = 1e-2;
  defaults.max_iters = 50;
  defaults.energy_tol = 1e-18;
  defaults.method = "gauss-newton";
  RunConfig cfg = resolve_config(o, defaults);

  Configuration start = [&] {
    if (!f.initial_path.empty()) return load_configuration(f.initial_path);
    const Configuration base = explicit_base(cfg);
    std::mt19937_64 rng(*cfg.seed);
    return advance(base, random_tangent(base.grid(), 2, *cfg.perturb, rng),
                   1.0);
  }();
  // an --initial file defines its own grid; report what was actually used
  cfg.n = start.grid().n;
  cfg.side = start.grid().side;

  SolveOptions opt;
  opt.method = *cfg.method == "gradient-flow" ? SolveMethod::gradient_flow
                                              : SolveMethod::gauss_newton;
  opt.max_iters = *cfg.max_iters;
  opt.energy_tol = *cfg.energy_tol;
  opt.gauge_fix = f.gauge_fix;

  json j = base_report("solve", cfg);
  int code = 0;
  SolveReport rep;
  try {
    const SolveResult res = solve(start, opt);
    rep = res.report;
    if (!f.trace_path.empty()) {
      std::ofstream csv(f.trace_path);
      if (!csv)
        throw ConfigError("cannot open trace file '" + f.trace_path + "'");
      write_trace_csv(csv, rep.trace);
    }
    dump_fields(res.configuration, f);
    if (!f.save_final_path.empty())
      save_configuration(f.save_final_path, res.configuration);
  } catch (const MaxItersExceeded& e) {
    rep = e.report;
    j["error"] = "max iterations exceeded";
    code = 1;
  } catch (const StalledLineSearch& e) {
    rep = e.report;
    j["error"] = std::string("stalled: ") + e.what();
    code = 1;
  }
  j["report"] = solve_report_json(rep);
  emit_report(j, o.out_path);
  if (code != 0)
    std::cerr << "solve: " << j["error"].get<std::string>()
              << " (final energy " << rep.final_energy << ")\n";
  return code;
}

int run_reduce_check(const CommonOpts& o) {
  RunConfig defaults;
  defaults.n = 8;
  defaults.side = kTwoPi;
  defaults.seed = 11;
  defaults.samples = 50;
  defaults.tol = 1e-10;
  defaults.c2 = 1.0;
  defaults.phase = 0.0;
  const RunConfig cfg = resolve_config(o, defaults);
  const TorusGrid g{*cfg.n, *cfg.side};

  std::mt19937_64 rng(*cfg.seed);
  double worst = 0.0;
  for (int s = 0; s < *cfg.samples; ++s) {
    const Configuration c = random_configuration(g, 2, 0.8, rng);
    worst = std::max(worst, reduction_consistency_check(c).max_deviation());
  }
  const double explicit_dev =
      reduction_consistency_check(explicit_base(cfg)).max_deviation();
  const double clifford = clifford_defect();
  const bool pass =
      worst < *cfg.tol && explicit_dev < 1e-12 && clifford == 0.0;

  json j = base_report("reduce-check", cfg);
  j["max_mismatch"] = worst;
  j["explicit_mismatch"] = explicit_dev;
  j["clifford_defect"] = clifford;
  j["pass"] = pass;
  emit_report(j, o.out_path);
  if (!pass)
    std::cerr << "reduce-check: worst mismatch " << worst << " (tol "
              << *cfg.tol << "), explicit " << explicit_dev
              << ", clifford defect " << clifford << '\n';
  return pass ? 0 : 1;
}

int run_dims(int genus, int c1, std::string name) {
  // accept underscore spellings like vortex_psi1_zero
  for (char& ch : name)
    if (ch == '_') ch = '-';
  std::cout << dimension_formula(name, genus, c1) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spectral laboratory for the reduced Seiberg-Witten system with a "
      "Higgs field on a flat torus"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  CommonOpts verify_o;
  CLI::App* verify = app.add_subcommand(
      "verify-explicit",
      "check the closed-form solution's residuals (defaults n=32, c2=1)");
  add_common_options(verify, verify_o);
  verify->add_option("--c2", verify_o.cli.c2,
                     "frequency parameter of the solution family");
  verify->add_option("--phase", verify_o.cli.phase, "phase of c1");
  verify->add_option("--tol", verify_o.cli.tol, "max-residual threshold");

  CommonOpts hk_o;
  bool hk_fault = false;
  CLI::App* hk = app.add_subcommand(
      "hk-check", "run the hyperkahler identity suite on random draws");
  add_common_options(hk, hk_o);
  hk->add_option("--samples", hk_o.cli.samples, "number of random draws");
  hk->add_option("--tol", hk_o.cli.tol, "max relative deviation allowed");
  hk->add_flag("--inject-sign-fault", hk_fault,
               "corrupt one sign to prove the suite detects it");

  CommonOpts lin_o;
  bool lin_sigma = false;
  CLI::App* lin = app.add_subcommand(
      "linearize",
      "kernel/cokernel dimensions of the linearized operator at the "
      "explicit solution");
  add_common_options(lin, lin_o);
  lin->add_option("--c2", lin_o.cli.c2, "solution family parameter");
  lin->add_option("--phase", lin_o.cli.phase, "phase of c1");
  lin->add_option("--t", lin_o.cli.t, "interpolation parameter of the family");
  lin->add_option("--max-mode", lin_o.cli.max_mode,
                  "band limit of the analysis subspace (default n/4)");
  lin->add_flag("--sigma", lin_sigma,
                "report the dimension of the Sigma tangent space instead");

  CommonOpts solve_o;
  SolveFlags solve_f;
  CLI::App* slv = app.add_subcommand(
      "solve", "run Gauss-Newton or gradient flow from a perturbed start");
  add_common_options(slv, solve_o);
  slv->add_option("--c2", solve_o.cli.c2, "solution family parameter");
  slv->add_option("--phase", solve_o.cli.phase, "phase of c1");
  slv->add_option("--perturb", solve_o.cli.perturb,
                  "amplitude of the band-limited start perturbation");
  slv->add_option("--max-iters", solve_o.cli.max_iters, "iteration budget");
  slv->add_option("--energy-tol", solve_o.cli.energy_tol,
                  "convergence threshold on the energy");
  slv->add_option("--method", solve_o.cli.method,
                  "gauss-newton or gradient-flow");
  slv->add_option("--initial", solve_f.initial_path,
                  "start from this serialized configuration");
  slv->add_option("--trace", solve_f.trace_path,
                  "write the per-iteration CSV trace here");
  slv->add_option("--dump-prefix", solve_f.dump_prefix,
                  "write final fields as <prefix>_<field>.csv");
  slv->add_option("--save-final", solve_f.save_final_path,
                  "serialize the final configuration here");
  slv->add_flag("--emit-plot-data", solve_f.emit_plot_data,
                "also write gnuplot grids as <prefix>_<field>.dat");
  slv->add_flag("--gauge-fix", solve_f.gauge_fix,
                "return the result on the Coulomb slice through the start");

  CommonOpts red_o;
  CLI::App* red = app.add_subcommand(
      "reduce-check",
      "four-dimensional lift vs reduced residual correspondence on random "
      "configurations");
  add_common_options(red, red_o);
  red->add_option("--samples", red_o.cli.samples,
                  "number of random configurations");
  red->add_option("--tol", red_o.cli.tol, "mismatch threshold");
  red->add_option("--c2", red_o.cli.c2, "solution family parameter");

  int dims_g = 1;
  int dims_c1 = 0;
  std::string dims_case;
  CLI::App* dims = app.add_subcommand(
      "dims", "closed-form moduli dimension for a case, printed bare");
  dims->add_option("--g", dims_g, "genus")->required();
  dims->add_option("--case", dims_case,
                   "N, Sigma, vortex-psi1-zero or vortex-psi2-zero")
      ->required();
  dims->add_option("--c1", dims_c1, "line bundle degree (vortex cases)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(verify)) return run_verify_explicit(verify_o);
    if (app.got_subcommand(hk)) return run_hk_check(hk_o, hk_fault);
    if (app.got_subcommand(lin)) return run_linearize(lin_o, lin_sigma);
    if (app.got_subcommand(slv)) return run_solve(solve_o, solve_f);
    if (app.got_subcommand(red)) return run_reduce_check(red_o);
    if (app.got_subcommand(dims)) return run_dims(dims_g, dims_c1, dims_case);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NonPeriodicParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NotASolution& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UntrustworthyGap& e) {
    std::cerr << "verification failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
