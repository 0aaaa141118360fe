// Minimal usage example: evolve the default chirped-Gaussian state at
// lambda_C = 5 Delta, print the mean Dirac position over time and the
// fitted drift-plus-oscillation parameters.
#include <cstdio>

#include "diracfw/analysis.hpp"
#include "diracfw/observables.hpp"

int main() {
  using namespace diracfw;

  const Grid1D grid = make_grid(2048, 64.0);
  const PhysicalParams params(0.1, 5.0);
  const SpinorField psi0 = prepare_initial(grid, InitialStateParams{});

  std::vector<double> times(96);
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i);

  const RunSeries series = ideal_run_series(psi0, params, times);
  for (std::size_t i = 0; i < times.size(); i += 10)
    std::printf("t=%5.1f  <x_D>=%+.6f  <x_FW>=%+.6f\n", series.times[i],
                series.mean_x_dirac[i], series.mean_x_fw[i]);

  const ZbFit fit = fit_zb(series.dirac_series(), params);
  std::printf("\nfit: v=%.6g  A=%.6g  omega=%.6g (2 m c^2 = %.6g)  delta=%.6g  r2=%.6g\n",
              fit.v, fit.A, fit.omega, 2.0 * params.rest_energy(), fit.delta, fit.r_squared);
  return 0;
}
