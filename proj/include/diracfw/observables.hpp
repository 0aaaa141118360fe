// Expectation values and densities: Dirac position, FW mean position and its
// energy-sign projections, and the time-series machinery used by scans.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "diracfw/core.hpp"
#include "diracfw/dirac1d.hpp"

namespace diracfw {

/// Sampled observable: values (Delta units) on strictly increasing times
/// (tau units), optionally with per-point uncertainties.
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> sigma;  // empty when absent

  void validate() const {
    if (times.size() != values.size() || (!sigma.empty() && sigma.size() != times.size()))
      throw std::invalid_argument("TimeSeries: length mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1]))
        throw std::invalid_argument("TimeSeries: times must be strictly increasing");
  }
};

/// Component densities d_i(x) = |psi_i(x)|^2.
inline std::pair<std::vector<double>, std::vector<double>> density(const SpinorField& f) {
  if (f.space != Space::Position)
    throw std::invalid_argument("density: field is not in position space");
  std::vector<double> d1(f.size()), d2(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    d1[j] = std::norm(f.comp1[j]);
    d2[j] = std::norm(f.comp2[j]);
  }
  return {std::move(d1), std::move(d2)};
}

namespace detail {

/// Unconditional first moment of the total density of a position-space field.
inline double position_first_moment(const SpinorField& f) {
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    acc += f.grid.x()[j] * (std::norm(f.comp1[j]) + std::norm(f.comp2[j]));
  return acc * f.grid.dx();
}

}  // namespace detail

/// <x_D> for a normalised Dirac position-space field.
inline double mean_x_dirac(const SpinorField& f) {
  if (f.rep != Rep::Dirac || f.space != Space::Position)
    throw std::invalid_argument("mean_x_dirac: expects a Dirac position-space field");
  return detail::position_first_moment(f);
}

/// Rotate a Dirac field into the FW representation (position space).
inline SpinorField to_fw_position(const SpinorField& f, const PhysicalParams& params) {
  if (f.rep != Rep::Dirac)
    throw std::invalid_argument("to_fw_position: expects a Dirac-representation field");
  SpinorField mom = (f.space == Space::Position) ? to_momentum(f) : f;
  SpinorField fw = fw_unitary(f.grid, params).apply(mom);
  fw.rep = Rep::FW;
  return to_position(fw);
}

/// Mean of the FW position operator: rotate to the FW representation, go to
/// position space, take the first moment of the total density.
inline double mean_x_fw(const SpinorField& f, const PhysicalParams& params) {
  return detail::position_first_moment(to_fw_position(f, params));
}

struct ProjectedMean {
  double value;   // conditional mean over the selected component
  double weight;  // norm of that component (time-invariant under free evolution)
};

/// Conditional FW mean position over one energy-sign component.
inline ProjectedMean mean_x_fw_projected(const SpinorField& f, const PhysicalParams& params,
                                         EnergySign sign) {
  const SpinorField fw = to_fw_position(f, params);
  const auto& comp = (sign == EnergySign::Positive) ? fw.comp1 : fw.comp2;
  double weight = 0.0;
  double first = 0.0;
  for (std::size_t j = 0; j < fw.size(); ++j) {
    const double d = std::norm(comp[j]);
    weight += d;
    first += fw.grid.x()[j] * d;
  }
  weight *= fw.grid.dx();
  first *= fw.grid.dx();
  if (weight < 1e-10)
    throw std::runtime_error("mean_x_fw_projected: vanishing projected weight");
  return {first / weight, weight};
}

/// Diagnostic: expectation of the momentum-dependent correction that relates
/// the Dirac position operator to FW multiplication,
///   x_D' = x_FW + (m c^3 / (2 eps(p)^2)) sigma2.
inline double fw_position_correction(const SpinorField& f, const PhysicalParams& params) {
  if (f.rep != Rep::Dirac)
    throw std::invalid_argument("fw_position_correction: expects a Dirac-representation field");
  SpinorField mom = (f.space == Space::Position) ? to_momentum(f) : f;
  SpinorField fw = fw_unitary(f.grid, params).apply(mom);
  double acc = 0.0;
  const double mc3 = params.mass_momentum() * params.c * params.c;  // m c^3
  for (std::size_t j = 0; j < fw.size(); ++j) {
    const double eps = params.energy(fw.grid.p()[j]);
    const double g = mc3 / (2.0 * eps * eps);
    acc += g * 2.0 * std::imag(std::conj(fw.comp1[j]) * fw.comp2[j]);
  }
  return acc * fw.grid.dp();
}

// ---------------------------------------------------------------------------
// Run series

/// Per-time-step observables of one evolution run; the CSV columns of the
/// command-line tool mirror these fields.
struct RunSeries {
  std::vector<double> times;
  std::vector<double> mean_x_dirac;
  std::vector<double> mean_x_fw;
  std::vector<double> mean_x_fw_plus;
  std::vector<double> mean_x_fw_minus;
  std::vector<double> norm;

  TimeSeries dirac_series() const { return {times, mean_x_dirac, {}}; }
  TimeSeries fw_series() const { return {times, mean_x_fw, {}}; }
};

/// Evolve `f0` through the exact FW path and record all mean positions at the
/// requested times.  The drift guard is applied to the Dirac-representation
/// density only: the FW rotation kernel is long-ranged on the scale of
/// lambda_C, so FW-representation tails are not an indication of wrap-around.
inline RunSeries ideal_run_series(const SpinorField& f0, const PhysicalParams& params,
                                  const std::vector<double>& times) {
  if (f0.rep != Rep::Dirac || f0.space != Space::Position)
    throw std::invalid_argument("ideal_run_series: expects a Dirac position-space field");
  RunSeries out;
  const MomentumMatrixField u = fw_unitary(f0.grid, params);
  const MomentumMatrixField u_adj = u.adjoint();
  SpinorField fw0 = u.apply(to_momentum(f0));
  fw0.rep = Rep::FW;
  for (double t : times) {
    const SpinorField fw_t = evolve_fw_diagonal(fw0, t, params);
    const SpinorField fw_pos = to_position(fw_t);
    double w_plus = 0.0, w_minus = 0.0, m_plus = 0.0, m_minus = 0.0;
    for (std::size_t j = 0; j < fw_pos.size(); ++j) {
      const double d1 = std::norm(fw_pos.comp1[j]);
      const double d2 = std::norm(fw_pos.comp2[j]);
      const double x = fw_pos.grid.x()[j];
      w_plus += d1;
      w_minus += d2;
      m_plus += x * d1;
      m_minus += x * d2;
    }
    const double dx = fw_pos.grid.dx();
    w_plus *= dx;
    w_minus *= dx;
    m_plus *= dx;
    m_minus *= dx;

    SpinorField dirac_t = u_adj.apply(fw_t);
    dirac_t.rep = Rep::Dirac;
    const SpinorField dirac_pos = to_position(dirac_t);
    if (tail_mass(dirac_pos) > 1e-8)
      throw std::runtime_error("ideal_run_series: wavepacket drifted into the boundary band");

    out.times.push_back(t);
    out.mean_x_dirac.push_back(detail::position_first_moment(dirac_pos));
    out.mean_x_fw.push_back(m_plus + m_minus);
    out.mean_x_fw_plus.push_back(w_plus > 1e-10 ? m_plus / w_plus
                                                : std::numeric_limits<double>::quiet_NaN());
    out.mean_x_fw_minus.push_back(w_minus > 1e-10 ? m_minus / w_minus
                                                  : std::numeric_limits<double>::quiet_NaN());
    out.norm.push_back(norm(dirac_pos));
  }
  return out;
}

}  // namespace diracfw
