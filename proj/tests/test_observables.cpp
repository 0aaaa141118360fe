#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "diracfw/analysis.hpp"
#include "diracfw/observables.hpp"
#include "support/helpers.hpp"

using namespace diracfw;
using testsupport::Rng;

TEST_CASE("densities integrate to the norm and respect symmetry") {
  const Grid1D g = make_grid(1024, 64.0);
  const SpinorField f = prepare_initial(g, InitialStateParams{});
  const auto [d1, d2] = density(f);
  double total = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) total += d1[j] + d2[j];
  CHECK(total * g.dx() == Catch::Approx(norm(f)).epsilon(1e-12));
  // even state -> even density
  for (std::size_t j = 0; j < g.size() / 2; ++j) {
    const std::size_t mirror = g.size() - j;  // x[mirror] = -x[j] for j > 0
    if (j == 0) continue;
    CHECK(d1[j] == Catch::Approx(d1[mirror % g.size()]).margin(1e-14));
  }

  InitialStateParams single;
  single.a = 1.0;
  single.b = 0.0;
  const auto [s1, s2] = density(prepare_initial(g, single));
  for (double v : s2) CHECK(v == 0.0);

  CHECK_THROWS_AS(density(to_momentum(f)), std::invalid_argument);
}

TEST_CASE("mean_x_dirac translation behaviour") {
  const Grid1D g = make_grid(1024, 64.0);
  const SpinorField f = prepare_initial(g, InitialStateParams{});
  CHECK(std::abs(mean_x_dirac(f)) < 1e-12);

  const std::size_t bins = 64;  // 4 Delta
  SpinorField shifted = f;
  for (std::size_t j = 0; j < g.size(); ++j) {
    shifted.comp1[(j + bins) % g.size()] = f.comp1[j];
    shifted.comp2[(j + bins) % g.size()] = f.comp2[j];
  }
  CHECK(mean_x_dirac(shifted) ==
        Catch::Approx(mean_x_dirac(f) + static_cast<double>(bins) * g.dx()).margin(1e-10));
}

TEST_CASE("fw mean position is linear in time") {
  const Grid1D g = make_grid(2048, 64.0);
  const PhysicalParams pp(0.1, 5.0);
  const SpinorField f0 = prepare_initial(g, InitialStateParams{});
  std::vector<double> ts, xs;
  for (int i = 0; i <= 40; ++i) {
    const double t = 2.0 * i;
    ts.push_back(t);
    xs.push_back(mean_x_fw(evolve_dirac(f0, t, pp), pp));
  }
  const LinearFit line = linear_fit(ts, xs);
  double worst = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    worst = std::max(worst, std::abs(xs[i] - (line.intercept + line.slope * ts[i])));
  CHECK(worst < 1e-6);

  // slope equals <c^2 p / eps> evaluated in FW momentum space
  const SpinorField mom = to_momentum(f0);
  SpinorField fw = fw_unitary(g, pp).apply(mom);
  double expected = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double p = g.p()[j];
    const double eps = pp.energy(p);
    expected += pp.c * pp.c * p / eps * (std::norm(fw.comp1[j]) - std::norm(fw.comp2[j]));
  }
  expected *= g.dp();
  CHECK(line.slope == Catch::Approx(expected).margin(1e-8));
}

TEST_CASE("projected fw means: weights, conditioning, error path") {
  const Grid1D g = make_grid(1024, 64.0);
  const PhysicalParams pp(0.1, 5.0);
  const SpinorField f = prepare_initial(g, InitialStateParams{});

  const ProjectedMean plus = mean_x_fw_projected(f, pp, EnergySign::Positive);
  const ProjectedMean minus = mean_x_fw_projected(f, pp, EnergySign::Negative);
  CHECK(plus.weight + minus.weight == Catch::Approx(1.0).epsilon(1e-12));

  // pure positive-energy FW state: the minus projection has no weight
  SpinorField fw_pure = make_field(g, Rep::FW, Space::Momentum);
  const SpinorField mom = to_momentum(f);
  for (std::size_t j = 0; j < g.size(); ++j) fw_pure.comp1[j] = mom.comp1[j];
  SpinorField dirac_pure = fw_unitary(g, pp).adjoint().apply(fw_pure);
  dirac_pure.rep = Rep::Dirac;
  const double renorm = 1.0 / std::sqrt(norm(dirac_pure));
  for (std::size_t j = 0; j < g.size(); ++j) {
    dirac_pure.comp1[j] *= renorm;
    dirac_pure.comp2[j] *= renorm;
  }
  CHECK_NOTHROW(mean_x_fw_projected(dirac_pure, pp, EnergySign::Positive));
  CHECK_THROWS_AS(mean_x_fw_projected(dirac_pure, pp, EnergySign::Negative), std::runtime_error);
}

TEST_CASE("projected trajectories: linear, equal slopes for the default state") {
  // For the even chirped state with a = -b the energy-sign components carry
  // mirrored momentum weights: the two conditional trajectories are parallel
  // lines with mirrored intercepts, and they decompose the full mean exactly.
  const Grid1D g = make_grid(2048, 64.0);
  const PhysicalParams pp(0.1, 5.0);
  const SpinorField f0 = prepare_initial(g, InitialStateParams{});
  const std::vector<double> ts{0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0};
  const RunSeries series = ideal_run_series(f0, pp, ts);

  const LinearFit plus = linear_fit(series.times, series.mean_x_fw_plus);
  const LinearFit minus = linear_fit(series.times, series.mean_x_fw_minus);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(std::abs(series.mean_x_fw_plus[i] - (plus.intercept + plus.slope * ts[i])) < 1e-6);
    CHECK(std::abs(series.mean_x_fw_minus[i] - (minus.intercept + minus.slope * ts[i])) < 1e-6);
  }
  CHECK(plus.slope == Catch::Approx(minus.slope).margin(1e-8));
  CHECK(plus.intercept == Catch::Approx(-minus.intercept).margin(1e-8));

  // law of total expectation, per time step
  for (std::size_t i = 0; i < ts.size(); ++i)
    CHECK(std::abs(series.mean_x_fw[i] - 0.5 * (series.mean_x_fw_plus[i] +
                                                series.mean_x_fw_minus[i])) < 1e-10);
}

TEST_CASE("momentum-boosted state gives opposite-sign projected slopes") {
  const Grid1D g = make_grid(1024, 64.0);
  const PhysicalParams pp(0.1, 5.0);
  SpinorField f0 = prepare_initial(g, InitialStateParams{});
  const double p0 = 0.5;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const cplx boost = std::exp(cplx(0.0, p0 * g.x()[j]));
    f0.comp1[j] *= boost;
    f0.comp2[j] *= boost;
  }
  const std::vector<double> ts{0.0, 15.0, 30.0, 45.0, 60.0};
  const RunSeries series = ideal_run_series(f0, pp, ts);
  const LinearFit plus = linear_fit(series.times, series.mean_x_fw_plus);
  const LinearFit minus = linear_fit(series.times, series.mean_x_fw_minus);
  CHECK(plus.slope > 0.0);
  CHECK(minus.slope < 0.0);
}

TEST_CASE("projected weights are invariant under free evolution") {
  const Grid1D g = make_grid(1024, 64.0);
  const PhysicalParams pp(0.1, 5.0);
  const SpinorField f0 = prepare_initial(g, InitialStateParams{});
  const ProjectedMean w0 = mean_x_fw_projected(f0, pp, EnergySign::Positive);
  for (double t : {5.0, 25.0, 80.0}) {
    const ProjectedMean wt = mean_x_fw_projected(evolve_dirac(f0, t, pp), pp,
                                                 EnergySign::Positive);
    CHECK(std::abs(wt.weight - w0.weight) < 1e-12);
  }
}

TEST_CASE("zitterbewegung shows up only in the dirac mean") {
  const Grid1D g = make_grid(2048, 64.0);
  const PhysicalParams pp(0.1, 5.0);
  const SpinorField f0 = prepare_initial(g, InitialStateParams{});
  std::vector<double> ts(96);
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<double>(i);
  const RunSeries series = ideal_run_series(f0, pp, ts);

  const LinearFit dirac_line = linear_fit(series.times, series.mean_x_dirac);
  double dirac_resid = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    dirac_resid = std::max(dirac_resid, std::abs(series.mean_x_dirac[i] -
                                                 (dirac_line.intercept + dirac_line.slope * ts[i])));
  const LinearFit fw_line = linear_fit(series.times, series.mean_x_fw);
  double fw_resid = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    fw_resid = std::max(fw_resid, std::abs(series.mean_x_fw[i] -
                                           (fw_line.intercept + fw_line.slope * ts[i])));
  CHECK(dirac_resid > 1e-2);   // oscillation present
  CHECK(fw_resid < 1e-6);      // oscillation absent

  // dominant oscillation frequency ~ 2 m c^2 = 0.2513/tau at lambda_c = 5:
  // the series should cross its drift line at roughly that period; checked
  // quantitatively by the fit in the analysis tests.
  for (double n : series.norm) CHECK(n == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("time series validation") {
  TimeSeries bad{{0.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, {}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  TimeSeries mismatch{{0.0, 1.0}, {0.0}, {}};
  CHECK_THROWS_AS(mismatch.validate(), std::invalid_argument);
}
