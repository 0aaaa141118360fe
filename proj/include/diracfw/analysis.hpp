// Zitterbewegung curve fitting, Compton-wavelength scans and scaling-law
// regressions.
//
// The oscillation fit minimises
//   sum_i (x_i - c0 - v t_i - A sin(w t_i + d))^2
// with an internal constant c0 so the fit is exactly invariant under series
// offsets and time translations.  The frequency is seeded analytically at
// w0 = 2 m c^2 and scanned over a x[0.5, 2] bracket of 64 seeds (the reduced
// problem is linear at fixed w), then refined by damped Gauss-Newton.
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "diracfw/core.hpp"
#include "diracfw/observables.hpp"

namespace diracfw {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

namespace detail {

template <std::size_t N>
std::array<double, N> solve_dense(std::array<double, N * N> m, std::array<double, N> rhs) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(m[r * N + col]) > std::abs(m[pivot * N + col])) pivot = r;
    if (std::abs(m[pivot * N + col]) < 1e-300)
      throw std::runtime_error("solve_dense: singular system");
    if (pivot != col) {
      for (std::size_t k = 0; k < N; ++k) std::swap(m[col * N + k], m[pivot * N + k]);
      std::swap(rhs[col], rhs[pivot]);
    }
    for (std::size_t r = col + 1; r < N; ++r) {
      const double f = m[r * N + col] / m[col * N + col];
      for (std::size_t k = col; k < N; ++k) m[r * N + k] -= f * m[col * N + k];
      rhs[r] -= f * rhs[col];
    }
  }
  std::array<double, N> sol{};
  for (std::size_t i = N; i-- > 0;) {
    double acc = rhs[i];
    for (std::size_t k = i + 1; k < N; ++k) acc -= m[i * N + k] * sol[k];
    sol[i] = acc / m[i * N + i];
  }
  return sol;
}

inline bool nearly_constant(const std::vector<double>& y, double ss_tot) {
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor = 16.0 * eps * std::max(1.0, scale);
  return ss_tot <= floor * floor * static_cast<double>(y.size());
}

}  // namespace detail

/// Ordinary least squares y = slope * x + intercept.  A constant series
/// reports slope 0 and r^2 = 1 by convention.
inline LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("linear_fit: need at least two samples");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dxv = xs[i] - mx;
    const double dyv = ys[i] - my;
    sxx += dxv * dxv;
    sxy += dxv * dyv;
    syy += dyv * dyv;
  }
  if (detail::nearly_constant(ys, syy)) return {0.0, my, 1.0};
  if (sxx <= 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + slope * (xs[i] - mx));
    ss_res += r * r;
  }
  return {slope, my - slope * mx, 1.0 - ss_res / syy};
}

inline LinearFit linearity_report(const TimeSeries& series) {
  series.validate();
  return linear_fit(series.times, series.values);
}

// ---------------------------------------------------------------------------
// Sinusoid-plus-drift fit

struct ZbFit {
  double v = 0.0;          // drift velocity, Delta/tau
  double A = 0.0;          // oscillation amplitude, Delta (>= 0)
  double omega = 0.0;      // angular frequency, 1/tau (> 0)
  double delta = 0.0;      // phase, [-pi, pi)
  double rms = 0.0;        // rms residual
  double r_squared = 1.0;
  bool converged = false;
  std::string note;        // diagnostic flags, empty when clean
};

inline ZbFit fit_zb(const TimeSeries& series, const PhysicalParams& params) {
  series.validate();
  const std::size_t n = series.times.size();
  if (n < 8) throw std::invalid_argument("fit_zb: too-short series (need at least 8 samples)");
  const std::vector<double>& ts = series.times;
  const double omega0 = 2.0 * params.rest_energy();

  ZbFit fit;
  if (ts.back() - ts.front() < 1.5 * (two_pi / omega0))
    fit.note = "window shorter than 1.5 estimated oscillation periods";

  double mean = 0.0;
  for (double v : series.values) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> y(n);
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = series.values[i] - mean;
    ss_tot += y[i] * y[i];
  }

  // Frequency scan: at fixed w the model is linear in (c0, v, a, b) with
  // a sin(w t) + b cos(w t).
  double best_sse = std::numeric_limits<double>::infinity();
  std::array<double, 5> theta{0.0, 0.0, 0.0, omega0, 0.0};  // c0, v, A, w, d
  for (int seed = 0; seed < 64; ++seed) {
    const double w = omega0 * (0.5 + 1.5 * static_cast<double>(seed) / 63.0);
    std::array<double, 16> normal{};
    std::array<double, 4> rhs{};
    for (std::size_t i = 0; i < n; ++i) {
      const std::array<double, 4> row{1.0, ts[i], std::sin(w * ts[i]), std::cos(w * ts[i])};
      for (std::size_t r = 0; r < 4; ++r) {
        rhs[r] += row[r] * y[i];
        for (std::size_t cidx = 0; cidx < 4; ++cidx) normal[r * 4 + cidx] += row[r] * row[cidx];
      }
    }
    std::array<double, 4> coef{};
    try {
      coef = detail::solve_dense<4>(normal, rhs);
    } catch (const std::runtime_error&) {
      continue;
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (coef[0] + coef[1] * ts[i] + coef[2] * std::sin(w * ts[i]) +
                               coef[3] * std::cos(w * ts[i]));
      sse += r * r;
    }
    if (sse < best_sse) {
      best_sse = sse;
      theta = {coef[0], coef[1], std::hypot(coef[2], coef[3]), w, std::atan2(coef[3], coef[2])};
    }
  }

  // Damped Gauss-Newton refinement of (c0, v, A, w, d).
  auto sse_of = [&](const std::array<double, 5>& q) {
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (q[0] + q[1] * ts[i] + q[2] * std::sin(q[3] * ts[i] + q[4]));
      sse += r * r;
    }
    return sse;
  };
  double sse = sse_of(theta);
  double damping = 1e-6;
  for (int iter = 0; iter < 200; ++iter) {
    std::array<double, 25> normal{};
    std::array<double, 5> grad{};
    for (std::size_t i = 0; i < n; ++i) {
      const double ph = theta[3] * ts[i] + theta[4];
      const double s = std::sin(ph), c = std::cos(ph);
      const double r = y[i] - (theta[0] + theta[1] * ts[i] + theta[2] * s);
      const std::array<double, 5> g{1.0, ts[i], s, theta[2] * ts[i] * c, theta[2] * c};
      for (std::size_t a = 0; a < 5; ++a) {
        grad[a] += g[a] * r;
        for (std::size_t b = 0; b < 5; ++b) normal[a * 5 + b] += g[a] * g[b];
      }
    }
    double gnorm = 0.0;
    for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
    if (gnorm < 1e-12) {
      fit.converged = true;
      break;
    }
    bool accepted = false;
    double best_rejected = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 16; ++attempt) {
      std::array<double, 25> damped = normal;
      for (std::size_t a = 0; a < 5; ++a)
        damped[a * 5 + a] += damping * std::max(normal[a * 5 + a], 1e-30);
      std::array<double, 5> step{};
      try {
        step = detail::solve_dense<5>(damped, grad);
      } catch (const std::runtime_error&) {
        damping *= 10.0;
        continue;
      }
      std::array<double, 5> cand = theta;
      for (std::size_t a = 0; a < 5; ++a) cand[a] += step[a];
      const double cand_sse = sse_of(cand);
      if (cand_sse <= sse) {
        double step_norm = 0.0;
        for (std::size_t a = 0; a < 5; ++a) step_norm = std::max(step_norm, std::abs(step[a]));
        theta = cand;
        sse = cand_sse;
        damping = std::max(damping / 3.0, 1e-14);
        accepted = true;
        if (step_norm < 1e-15) {
          fit.converged = true;
          iter = 200;
        }
        break;
      }
      best_rejected = std::min(best_rejected, cand_sse);
      damping *= 10.0;
    }
    if (!accepted) {
      // every candidate sits within roundoff of the current objective: the
      // minimiser is resolved to double precision
      const double eps = std::numeric_limits<double>::epsilon();
      if (best_rejected - sse <= 16.0 * eps * std::max(sse, 1e-300)) fit.converged = true;
      break;
    }
  }

  // Canonical form: A >= 0, w > 0, d in [-pi, pi).
  if (theta[2] < 0.0) {
    theta[2] = -theta[2];
    theta[4] += pi;
  }
  if (theta[3] < 0.0) {
    theta[3] = -theta[3];
    theta[4] = pi - theta[4];
  }
  theta[4] = std::fmod(theta[4] + pi, two_pi);
  if (theta[4] < 0.0) theta[4] += two_pi;
  theta[4] -= pi;

  fit.v = theta[1];
  fit.A = theta[2];
  fit.omega = theta[3];
  fit.delta = theta[4];
  fit.rms = std::sqrt(sse / static_cast<double>(n));
  fit.r_squared = detail::nearly_constant(y, ss_tot) ? 1.0 : 1.0 - sse / ss_tot;

  double spread = 0.0;
  for (double v : y) spread = std::max(spread, std::abs(v));
  if (fit.A <= 1e-8 * std::max(spread, 1e-300)) {
    if (!fit.note.empty()) fit.note += "; ";
    fit.note += "amplitude at boundary";
  }
  if (!fit.converged) {
    if (!fit.note.empty()) fit.note += "; ";
    fit.note += "no convergence within 200 iterations";
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Scans

struct ScanEntry {
  double lambda_c = 0.0;
  RunSeries series;
  ZbFit fit;
};

struct ScanResult {
  std::vector<ScanEntry> entries;
  double c = 0.0;
  InitialStateParams state;
  std::size_t grid_n = 0;
  double grid_extent = 0.0;
};

/// For each Compton wavelength: evolve the prepared state, record all mean
/// positions, and fit the Dirac series.  Entries may be computed in parallel;
/// each entry is evaluated by a single thread in a fixed order, so results do
/// not depend on the thread count.
inline ScanResult scan_lambda(const Grid1D& grid, const InitialStateParams& state, double c,
                              const std::vector<double>& lambdas,
                              const std::vector<double>& times, unsigned threads = 1) {
  if (lambdas.empty()) throw std::invalid_argument("scan_lambda: empty wavelength list");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1]))
      throw std::invalid_argument("scan_lambda: wavelengths must be strictly increasing");

  const SpinorField f0 = prepare_initial(grid, state);
  ScanResult result;
  result.entries.resize(lambdas.size());
  result.c = c;
  result.state = state;
  result.grid_n = grid.size();
  result.grid_extent = grid.extent();

  auto run_one = [&](std::size_t i) {
    const PhysicalParams params(c, lambdas[i]);
    ScanEntry entry;
    entry.lambda_c = lambdas[i];
    entry.series = ideal_run_series(f0, params, times);
    entry.fit = fit_zb(entry.series.dirac_series(), params);
    result.entries[i] = std::move(entry);
  };

  const unsigned workers =
      std::min<unsigned>(std::max(1u, threads), static_cast<unsigned>(lambdas.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < lambdas.size(); i = next.fetch_add(1))
          run_one(i);
      });
    for (auto& th : pool) th.join();
  }
  return result;
}

// ---------------------------------------------------------------------------
// Scaling laws

struct VelocityScaling {
  double k = 0.0;          // |v| = k * lambda_c^2 on the small-lambda subset
  double r_squared = 0.0;
  std::optional<double> v100_over_c;  // |v(lambda_c = 100)| / c when scanned
};

/// Quadratic drift law on the small-wavelength subset (lambda_c <= 7) plus
/// the massless-limit check against the speed of light.
inline VelocityScaling velocity_scaling(const ScanResult& scan) {
  std::vector<double> xs, ys;
  VelocityScaling out;
  for (const ScanEntry& e : scan.entries) {
    if (e.lambda_c <= 7.0 + 1e-12) {
      xs.push_back(e.lambda_c * e.lambda_c);
      ys.push_back(std::abs(e.fit.v));
    }
    if (std::abs(e.lambda_c - 100.0) < 1e-9) out.v100_over_c = std::abs(e.fit.v) / scan.c;
  }
  if (xs.size() < 2) throw std::invalid_argument("velocity_scaling: need at least two small-lambda entries");
  double sxy = 0.0, sxx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += xs[i] * ys[i];
    sxx += xs[i] * xs[i];
    my += ys[i];
  }
  my /= static_cast<double>(ys.size());
  out.k = sxy / sxx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ss_res += (ys[i] - out.k * xs[i]) * (ys[i] - out.k * xs[i]);
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  out.r_squared = detail::nearly_constant(ys, ss_tot) ? 1.0 : 1.0 - ss_res / ss_tot;
  return out;
}

/// OLS of the fitted amplitude on lambda_c (lambda_c = 100 excluded: the
/// linear law is a small-wavelength statement).
inline LinearFit amplitude_regression(const ScanResult& scan, double lambda_max = 10.0) {
  std::vector<double> xs, ys;
  for (const ScanEntry& e : scan.entries)
    if (e.lambda_c <= lambda_max + 1e-12) {
      xs.push_back(e.lambda_c);
      ys.push_back(e.fit.A);
    }
  return linear_fit(xs, ys);
}

/// OLS of the fitted frequency on 1/lambda_c (same subset rule).
inline LinearFit frequency_regression(const ScanResult& scan, double lambda_max = 10.0) {
  std::vector<double> xs, ys;
  for (const ScanEntry& e : scan.entries)
    if (e.lambda_c <= lambda_max + 1e-12) {
      xs.push_back(1.0 / e.lambda_c);
      ys.push_back(e.fit.omega);
    }
  return linear_fit(xs, ys);
}

}  // namespace diracfw
