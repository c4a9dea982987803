// Serialization and run-configuration plumbing.  The JSON round-trip must
// be exact (shortest round-trip doubles), the key=value parser must reject
// anything it does not understand before a run starts, and the CSV/plot
// emitters must keep their documented shapes -- downstream scripts parse
// them.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "swred/io.hpp"

using namespace swred;

TEST_CASE("configuration serialization round-trips exactly") {
  const TorusGrid g{8, 2.0 * std::numbers::pi};
  std::mt19937_64 rng(501);
  const Configuration c = random_configuration(g, 2, 0.9, rng);

  const std::string path = "test_io_roundtrip.cfg";
  save_configuration(path, c);
  const Configuration back = load_configuration(path);
  std::remove(path.c_str());

  CHECK(back.grid().n == g.n);
  CHECK(back.grid().side == g.side);
  CHECK(max_abs(back.connection.a - c.connection.a) == 0.0);
  CHECK(max_abs(back.spinor.psi1 - c.spinor.psi1) == 0.0);
  CHECK(max_abs(back.spinor.psi2 - c.spinor.psi2) == 0.0);
  CHECK(max_abs(back.higgs.phi - c.higgs.phi) == 0.0);
}

TEST_CASE("loading rejects malformed configuration files") {
  const std::string path = "test_io_bad.cfg";
  {
    std::ofstream out(path);
    out << "{\"format\": \"something-else\", \"n\": 8}\n";
  }
  CHECK_THROWS_AS((void)load_configuration(path), ConfigError);
  std::remove(path.c_str());
  CHECK_THROWS_AS((void)load_configuration("no_such_file.cfg"), ConfigError);
}

TEST_CASE("run config files parse, merge, and reject junk") {
  std::istringstream good(
      "# a comment\n"
      "n = 16\n"
      "side=6.28  # trailing comment\n"
      "seed = 42\n"
      "method = gradient-flow\n"
      "\n"
      "perturb = 0.05\n");
  const RunConfig cfg = parse_run_config(good);
  CHECK(cfg.n.value() == 16);
  CHECK(cfg.side.value() == doctest::Approx(6.28));
  CHECK(cfg.seed.value() == 42);
  CHECK(cfg.method.value() == "gradient-flow");
  CHECK(cfg.perturb.value() == doctest::Approx(0.05));
  CHECK(!cfg.c2.has_value());

  auto parse_one = [](const std::string& text) {
    std::istringstream in(text);
    return parse_run_config(in);
  };
  CHECK_THROWS_AS((void)parse_one("banana = 3\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_one("n 16\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_one("n = soup\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_one("n = 16 trailing\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_one("n =\n"), ConfigError);

  RunConfig base;
  base.n = 8;
  base.seed = 1;
  RunConfig over;
  over.n = 32;
  merge_run_config(base, over);
  CHECK(base.n.value() == 32);  // overridden
  CHECK(base.seed.value() == 1);  // kept
}

TEST_CASE("run config validation catches out-of-range values") {
  auto check_bad = [](auto&& poke) {
    RunConfig cfg;
    poke(cfg);
    CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
  };
  check_bad([](RunConfig& c) { c.n = 7; });
  check_bad([](RunConfig& c) { c.n = 2; });
  check_bad([](RunConfig& c) { c.side = 0.0; });
  check_bad([](RunConfig& c) { c.tol = 0.0; });
  check_bad([](RunConfig& c) { c.samples = 0; });
  check_bad([](RunConfig& c) { c.max_iters = -1; });
  check_bad([](RunConfig& c) { c.energy_tol = -1.0; });
  check_bad([](RunConfig& c) { c.perturb = -0.1; });
  check_bad([](RunConfig& c) { c.max_mode = -2; });
  check_bad([](RunConfig& c) { c.method = "newton"; });

  RunConfig ok;
  ok.n = 16;
  ok.side = 1.0;
  ok.seed = 7;
  ok.tol = 1e-10;
  ok.samples = 50;
  ok.max_iters = 0;  // zero is a legal budget (immediate failure is tested)
  ok.energy_tol = 1e-18;
  ok.perturb = 0.0;
  ok.max_mode = 2;
  ok.method = "gauss-newton";
  CHECK_NOTHROW(validate_run_config(ok));
}

TEST_CASE("CSV and plot emitters produce the documented shapes") {
  const TorusGrid g{4, 2.0 * std::numbers::pi};
  std::mt19937_64 rng(502);
  const ScalarField f = random_bandlimited_field(g, 1, 1.0, rng);

  std::ostringstream csv;
  write_field_csv(csv, f);
  std::istringstream lines(csv.str());
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "i,j,x1,x2,re,im");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == g.size());

  std::vector<SolveStep> trace = {{0, 1.0, 0.5, 0.25, 0.1, 0.1, 0.0},
                                  {1, 1e-4, 5e-3, 2e-3, 1e-3, 1e-3, 1.0}};
  std::ostringstream tcsv;
  write_trace_csv(tcsv, trace);
  std::istringstream tlines(tcsv.str());
  REQUIRE(std::getline(tlines, line));
  CHECK(line == "iter,energy,r1,r2,r3a,r3b,step");
  rows = 0;
  while (std::getline(tlines, line)) ++rows;
  CHECK(rows == 2);

  std::ostringstream plot;
  write_plot_grid(plot, f);
  std::istringstream plines(plot.str());
  int data = 0, blanks = 0;
  std::getline(plines, line);  // comment header
  while (std::getline(plines, line)) {
    if (line.empty())
      ++blanks;
    else
      ++data;
  }
  CHECK(data == g.size());
  CHECK(blanks == g.n);  // one blank separator after every grid row
}

TEST_CASE("tool version string is stable") {
  CHECK(tool_version() == "swred 0.1.0");
}
