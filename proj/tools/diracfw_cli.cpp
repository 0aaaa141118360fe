// Command-line runner around diracfw::run.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-convergence
// failure, 1 any other runtime failure.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "diracfw/diracfw.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw diracfw::ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diracfw: spectral simulator for the 1+1D free Dirac equation "
               "with a Foldy-Wouthuysen optical-apparatus model"};

  std::string config_path;
  std::string mode_override;
  std::string out_override;
  unsigned threads_override = 0;
  app.add_option("--config", config_path, "configuration file (key = value, sectioned)");
  app.add_option("--mode", mode_override,
                 "override mode: evolve|scan|fit|extensions-2d|extensions-potential");
  app.add_option("--out", out_override, "override output directory");
  app.add_option("--threads", threads_override, "override worker thread count");

  CLI11_PARSE(app, argc, argv);

  diracfw::RunConfig cfg;
  try {
    if (!config_path.empty()) {
      cfg = diracfw::parse_config(read_file(config_path));
    } else {
      cfg.finalize();
    }
    if (!mode_override.empty()) {
      cfg.mode = diracfw::detail::parse_mode(mode_override, 0);
      if (!cfg.lambdas_explicit) cfg.lambdas.clear();  // re-fill the mode default
      cfg.finalize();
    }
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (threads_override > 0) cfg.threads = threads_override;
    cfg.validate();
  } catch (const diracfw::ConfigError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }

  try {
    return diracfw::run(cfg);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
}
