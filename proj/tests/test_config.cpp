#include <catch2/catch_amalgamated.hpp>

#include "diracfw/config.hpp"

using namespace diracfw;

TEST_CASE("minimal config applies all defaults") {
  const RunConfig cfg = parse_config("[params]\nlambda_c = 3\n");
  CHECK(cfg.grid_n == 2048);
  CHECK(cfg.grid_extent == 64.0);
  CHECK(cfg.c == 0.1);
  REQUIRE(cfg.lambdas.size() == 1);
  CHECK(cfg.lambdas[0] == 3.0);
  CHECK(cfg.state.delta == 1.0);
  CHECK(cfg.state.r_phase == 4.84);
  CHECK(cfg.t_start == 0.0);
  CHECK(cfg.t_stop == 95.0);
  CHECK(cfg.t_step == 1.0);
  CHECK(cfg.mode == RunConfig::Mode::Evolve);
  CHECK(cfg.backend == RunConfig::Backend::Ideal);
  CHECK(cfg.slm_efficiency == 1.0);
  CHECK(cfg.times().size() == 96);
}

TEST_CASE("empty config defaults to the single-wavelength run") {
  const RunConfig cfg = parse_config("");
  REQUIRE(cfg.lambdas.size() == 1);
  CHECK(cfg.lambdas[0] == 5.0);
}

TEST_CASE("scan mode defaults to the six-wavelength plan") {
  const RunConfig cfg = parse_config("[run]\nmode = scan\n");
  CHECK(cfg.lambdas == std::vector<double>{1.0, 3.0, 5.0, 7.0, 10.0, 100.0});
}

TEST_CASE("full scan config") {
  const char* text =
      "# reproduction scan\n"
      "[grid]\n"
      "n = 2048\n"
      "extent = 64\n"
      "[params]\n"
      "c = 0.1\n"
      "lambda_c = 1, 3, 5, 7, 10, 100\n"
      "[times]\n"
      "start = 0\n"
      "stop = 95\n"
      "step = 1\n"
      "[run]\n"
      "mode = scan\n"
      "backend = ideal\n"
      "out = out\n";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.mode == RunConfig::Mode::Scan);
  CHECK(cfg.lambdas.size() == 6);
  CHECK(cfg.out_dir == "out");
}

TEST_CASE("validation errors name the offending field") {
  try {
    parse_config("[params]\nc = -0.1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(err.field() == "params.c");
  }

  try {
    parse_config("[state]\na_re = 1\n");  // |a|^2 + |b|^2 != 1
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(err.field() == "state.a");
  }

  try {
    parse_config("[times]\nstep = 0\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(err.field() == "times.step");
  }
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_config("[grid]\nn = 1024\nnonsense\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(err.line() == 3);
  }

  try {
    parse_config("[grid]\nwidth = 10\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(err.line() == 2);
  }

  try {
    parse_config("[params]\nc = fast\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(err.line() == 2);
  }

  CHECK_THROWS_AS(parse_config("[mystery]\n"), ConfigError);
}

TEST_CASE("mode and backend combinations") {
  CHECK_THROWS_AS(parse_config("[run]\nmode = fit\n"), ConfigError);  // missing input
  CHECK_NOTHROW(parse_config("[run]\nmode = fit\ninput = series.csv\n"));
  CHECK_THROWS_AS(parse_config("[run]\nmode = extensions-2d\nbackend = apparatus\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[run]\nmode = extensions-2d\n[grid]\nn = 2048\n"), ConfigError);
  CHECK_NOTHROW(parse_config("[run]\nmode = extensions-2d\n[grid]\nn = 128\n"));
  CHECK_THROWS_AS(parse_config("[run]\nslm_efficiency = 1.2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[run]\nmode = evolve\n[params]\nlambda_c = 1, 5\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[params]\nlambda_c = 5, 3\n[run]\nmode = scan\n"), ConfigError);
}

TEST_CASE("grid n must be a power of two") {
  CHECK_THROWS_AS(parse_config("[grid]\nn = 1000\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nn = 2.5\n"), ConfigError);
}
