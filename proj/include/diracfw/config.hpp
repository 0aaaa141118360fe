// Run configuration: flat key/value text with one section per module.
// Unknown sections or keys are errors; defaults reproduce the standard
// scan (n = 2048, extent = 64, c = 0.1, chirped Gaussian state, t = 0..95).
#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "diracfw/core.hpp"

namespace diracfw {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0, std::string field = {})
      : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message
                                    : (field.empty() ? "config: " + message
                                                     : "config field '" + field + "': " + message)),
        line_(line),
        field_(std::move(field)) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct RunConfig {
  enum class Mode { Evolve, Scan, Fit, Extensions2D, ExtensionsPotential };
  enum class Backend { Ideal, Apparatus };

  std::size_t grid_n = 2048;
  double grid_extent = 64.0;

  double c = 0.1;
  std::vector<double> lambdas;    // empty until finalize() fills the mode default
  bool lambdas_explicit = false;  // set when the config names lambda_c itself

  InitialStateParams state;

  double t_start = 0.0;
  double t_stop = 95.0;
  double t_step = 1.0;

  Mode mode = Mode::Evolve;
  Backend backend = Backend::Ideal;
  double slm_efficiency = 1.0;
  std::string out_dir = ".";
  std::string input;  // series CSV for fit mode
  unsigned threads = 1;
  bool export_masks = false;

  double kappa = 0.01;            // slope of V1(x) = kappa x
  double slm_wavelength = 632.8e-9;  // metres, mask-export mapping only
  double slm_focal_length = 0.150;   // metres

  std::vector<double> times() const {
    const auto count = static_cast<std::size_t>(std::floor((t_stop - t_start) / t_step + 1e-9)) + 1;
    std::vector<double> ts(count);
    for (std::size_t i = 0; i < count; ++i) ts[i] = t_start + static_cast<double>(i) * t_step;
    return ts;
  }

  void finalize() {
    if (lambdas.empty())
      lambdas = (mode == Mode::Scan) ? std::vector<double>{1.0, 3.0, 5.0, 7.0, 10.0, 100.0}
                                     : std::vector<double>{5.0};
    validate();
  }

  void validate() const {
    if (grid_n < 2 || (grid_n & (grid_n - 1)) != 0)
      throw ConfigError("must be a power of two >= 2", 0, "grid.n");
    if (!(grid_extent > 0.0)) throw ConfigError("must be positive", 0, "grid.extent");
    if (!(c > 0.0)) throw ConfigError("must be positive", 0, "params.c");
    for (double l : lambdas)
      if (!(l > 0.0) || !(l <= 1e6)) throw ConfigError("must be in (0, 1e6]", 0, "params.lambda_c");
    for (std::size_t i = 1; i < lambdas.size(); ++i)
      if (!(lambdas[i] > lambdas[i - 1]))
        throw ConfigError("must be strictly increasing", 0, "params.lambda_c");
    if (!(state.delta > 0.0)) throw ConfigError("must be positive", 0, "state.delta");
    if (!std::isfinite(state.r_phase) || state.r_phase == 0.0)
      throw ConfigError("must be finite and nonzero", 0, "state.chirp");
    if (std::abs(std::norm(state.a) + std::norm(state.b) - 1.0) > 1e-12)
      throw ConfigError("|a|^2 + |b|^2 must equal 1", 0, "state.a");
    if (!(t_step > 0.0)) throw ConfigError("must be positive", 0, "times.step");
    if (!(t_stop >= t_start)) throw ConfigError("stop must be >= start", 0, "times.stop");
    if (!(slm_efficiency > 0.0) || slm_efficiency > 1.0)
      throw ConfigError("must be in (0, 1]", 0, "run.slm_efficiency");
    if (threads < 1) throw ConfigError("must be >= 1", 0, "run.threads");
    if (mode != Mode::Evolve && mode != Mode::Scan && backend == Backend::Apparatus)
      throw ConfigError("apparatus backend is only valid for evolve and scan modes", 0,
                        "run.backend");
    if (mode == Mode::Evolve && lambdas.size() != 1)
      throw ConfigError("evolve mode needs exactly one lambda_c", 0, "params.lambda_c");
    if (mode == Mode::Fit && input.empty())
      throw ConfigError("fit mode needs an input series path", 0, "run.input");
    if (mode == Mode::Fit && lambdas.size() != 1)
      throw ConfigError("fit mode needs exactly one lambda_c", 0, "params.lambda_c");
    if (mode == Mode::Extensions2D && grid_n > 512)
      throw ConfigError("extensions-2d uses n x n points; choose n <= 512", 0, "grid.n");
    if (mode == Mode::ExtensionsPotential && lambdas.size() != 1)
      throw ConfigError("extensions-potential needs exactly one lambda_c", 0, "params.lambda_c");
    if (!(slm_wavelength > 0.0)) throw ConfigError("must be positive", 0, "extensions.slm_wavelength");
    if (!(slm_focal_length > 0.0))
      throw ConfigError("must be positive", 0, "extensions.slm_focal_length");
    if (!(kappa == kappa)) throw ConfigError("must be a number", 0, "extensions.kappa");
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view v, int line) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ConfigError("expected a number, got '" + std::string(v) + "'", line);
  return out;
}

inline std::vector<double> parse_double_list(std::string_view v, int line) {
  std::vector<double> out;
  std::size_t begin = 0;
  while (begin <= v.size()) {
    std::size_t comma = v.find(',', begin);
    if (comma == std::string_view::npos) comma = v.size();
    const std::string_view item = trim(v.substr(begin, comma - begin));
    if (item.empty()) throw ConfigError("empty entry in number list", line);
    out.push_back(parse_double(item, line));
    begin = comma + 1;
    if (comma == v.size()) break;
  }
  return out;
}

inline bool parse_bool(std::string_view v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected true/false, got '" + std::string(v) + "'", line);
}

inline RunConfig::Mode parse_mode(std::string_view v, int line) {
  if (v == "evolve") return RunConfig::Mode::Evolve;
  if (v == "scan") return RunConfig::Mode::Scan;
  if (v == "fit") return RunConfig::Mode::Fit;
  if (v == "extensions-2d") return RunConfig::Mode::Extensions2D;
  if (v == "extensions-potential") return RunConfig::Mode::ExtensionsPotential;
  throw ConfigError("unknown mode '" + std::string(v) + "'", line);
}

inline RunConfig::Backend parse_backend(std::string_view v, int line) {
  if (v == "ideal") return RunConfig::Backend::Ideal;
  if (v == "apparatus") return RunConfig::Backend::Apparatus;
  throw ConfigError("unknown backend '" + std::string(v) + "'", line);
}

}  // namespace detail

/// Parse the flat sectioned key/value format.  Defaults are filled for any
/// keys not present; unknown sections or keys are errors.
inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section != "grid" && section != "params" && section != "state" && section != "times" &&
          section != "run" && section != "extensions")
        throw ConfigError("unknown section '" + section + "'", line_no);
      if (eol == text.size()) break;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key = std::string(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("expected 'key = value'", line_no);
    const std::string qualified = section.empty() ? key : section + "." + key;

    if (qualified == "grid.n") {
      const double v = detail::parse_double(value, line_no);
      if (v < 1.0 || v != std::floor(v)) throw ConfigError("n must be a positive integer", line_no);
      cfg.grid_n = static_cast<std::size_t>(v);
    } else if (qualified == "grid.extent") {
      cfg.grid_extent = detail::parse_double(value, line_no);
    } else if (qualified == "params.c") {
      cfg.c = detail::parse_double(value, line_no);
    } else if (qualified == "params.lambda_c") {
      cfg.lambdas = detail::parse_double_list(value, line_no);
      cfg.lambdas_explicit = true;
    } else if (qualified == "state.delta") {
      cfg.state.delta = detail::parse_double(value, line_no);
    } else if (qualified == "state.chirp") {
      cfg.state.r_phase = detail::parse_double(value, line_no);
    } else if (qualified == "state.a_re") {
      cfg.state.a = cplx(detail::parse_double(value, line_no), cfg.state.a.imag());
    } else if (qualified == "state.a_im") {
      cfg.state.a = cplx(cfg.state.a.real(), detail::parse_double(value, line_no));
    } else if (qualified == "state.b_re") {
      cfg.state.b = cplx(detail::parse_double(value, line_no), cfg.state.b.imag());
    } else if (qualified == "state.b_im") {
      cfg.state.b = cplx(cfg.state.b.real(), detail::parse_double(value, line_no));
    } else if (qualified == "times.start") {
      cfg.t_start = detail::parse_double(value, line_no);
    } else if (qualified == "times.stop") {
      cfg.t_stop = detail::parse_double(value, line_no);
    } else if (qualified == "times.step") {
      cfg.t_step = detail::parse_double(value, line_no);
    } else if (qualified == "run.mode") {
      cfg.mode = detail::parse_mode(value, line_no);
    } else if (qualified == "run.backend") {
      cfg.backend = detail::parse_backend(value, line_no);
    } else if (qualified == "run.slm_efficiency") {
      cfg.slm_efficiency = detail::parse_double(value, line_no);
    } else if (qualified == "run.out") {
      cfg.out_dir = std::string(value);
    } else if (qualified == "run.input") {
      cfg.input = std::string(value);
    } else if (qualified == "run.threads") {
      const double v = detail::parse_double(value, line_no);
      if (v < 1.0 || v != std::floor(v)) throw ConfigError("threads must be a positive integer", line_no);
      cfg.threads = static_cast<unsigned>(v);
    } else if (qualified == "run.export_masks") {
      cfg.export_masks = detail::parse_bool(value, line_no);
    } else if (qualified == "extensions.kappa") {
      cfg.kappa = detail::parse_double(value, line_no);
    } else if (qualified == "extensions.slm_wavelength") {
      cfg.slm_wavelength = detail::parse_double(value, line_no);
    } else if (qualified == "extensions.slm_focal_length") {
      cfg.slm_focal_length = detail::parse_double(value, line_no);
    } else {
      throw ConfigError("unknown key '" + qualified + "'", line_no);
    }
    if (eol == text.size()) break;
  }
  cfg.finalize();
  return cfg;
}

}  // namespace diracfw
