// Higher-dimensional evolution and the sigma1-potential class.
//
// 2+1D: H = c (sigma1 px + sigma2 py) + m c^2 sigma3 is diagonalised by
//   U2(p) = [[cos th, e^{-i th'} sin th], [-e^{i th'} sin th, cos th]],
// th = arctan(|p|/(m c))/2 and th' the angle with px - i py = |p| e^{-i th'}.
//
// 3+1D, restricted to pz-independent states: the 4x4 FW matrix mixes the
// spinor components pairwise, (phi1, phi4) exactly as the 2D case and
// (phi2, phi3) with the conjugated th' factor, so two independent
// two-component evolutions cover it.
//
// sigma1 potentials: V(x) = V1(x) sigma1 is removed by the scalar gauge
// phase Lambda(x) = (1/c) Integral V1, leaving free evolution.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "diracfw/core.hpp"
#include "diracfw/dirac1d.hpp"
#include "diracfw/optical.hpp"

namespace diracfw {

// ---------------------------------------------------------------------------
// 2D grid and fields

struct Grid2D {
  Grid1D gx;
  Grid1D gy;

  Grid2D(Grid1D gx_, Grid1D gy_) : gx(std::move(gx_)), gy(std::move(gy_)) {}
  Grid2D(std::size_t nx, double extent_x, std::size_t ny, double extent_y)
      : gx(nx, extent_x), gy(ny, extent_y) {}

  std::size_t nx() const { return gx.size(); }
  std::size_t ny() const { return gy.size(); }
  std::size_t size() const { return nx() * ny(); }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx() + ix; }
  double cell() const { return gx.dx() * gy.dx(); }
  double cell_p() const { return gx.dp() * gy.dp(); }

  friend bool operator==(const Grid2D& a, const Grid2D& b) {
    return a.gx == b.gx && a.gy == b.gy;
  }
};

struct SpinorField2D {
  Grid2D grid;
  std::vector<cplx> comp1;
  std::vector<cplx> comp2;
  Rep rep = Rep::Dirac;
  Space space = Space::Position;

  std::size_t size() const { return grid.size(); }
};

inline SpinorField2D make_field(const Grid2D& grid, Rep rep, Space space) {
  return SpinorField2D{grid, std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size()),
                       rep, space};
}

inline double norm(const SpinorField2D& f) {
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    acc += std::norm(f.comp1[j]) + std::norm(f.comp2[j]);
  return acc * (f.space == Space::Position ? f.grid.cell() : f.grid.cell_p());
}

namespace detail {

inline void transform_2d(std::vector<cplx>& data, const Grid2D& grid, bool forward) {
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  std::vector<cplx> buf;
  buf.resize(nx);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(iy * nx), nx, buf.begin());
    if (forward)
      centered_forward(buf, grid.gx.dx());
    else
      centered_backward(buf, grid.gx.dp());
    std::copy_n(buf.begin(), nx, data.begin() + static_cast<std::ptrdiff_t>(iy * nx));
  }
  buf.resize(ny);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) buf[iy] = data[iy * nx + ix];
    if (forward)
      centered_forward(buf, grid.gy.dx());
    else
      centered_backward(buf, grid.gy.dp());
    for (std::size_t iy = 0; iy < ny; ++iy) data[iy * nx + ix] = buf[iy];
  }
}

}  // namespace detail

inline SpinorField2D to_momentum(const SpinorField2D& f) {
  if (f.space != Space::Position)
    throw std::invalid_argument("to_momentum: 2D field is not in position space");
  SpinorField2D out = f;
  out.space = Space::Momentum;
  detail::transform_2d(out.comp1, f.grid, true);
  detail::transform_2d(out.comp2, f.grid, true);
  return out;
}

inline SpinorField2D to_position(const SpinorField2D& f) {
  if (f.space != Space::Momentum)
    throw std::invalid_argument("to_position: 2D field is not in momentum space");
  SpinorField2D out = f;
  out.space = Space::Position;
  detail::transform_2d(out.comp1, f.grid, false);
  detail::transform_2d(out.comp2, f.grid, false);
  return out;
}

/// Normalised product-Gaussian initial state over a 2D grid, spinor weights
/// (a, b), chirp applied along x.
inline SpinorField2D prepare_initial_2d(const Grid2D& grid, const InitialStateParams& isp) {
  isp.validate();
  SpinorField2D f = make_field(grid, Rep::Dirac, Space::Position);
  const double gw = 1.0 / (4.0 * isp.delta * isp.delta);
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    const double yv = grid.gy.x()[iy];
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const double xv = grid.gx.x()[ix];
      const cplx env = std::exp(cplx(-gw * (xv * xv + yv * yv), -xv * xv / isp.r_phase));
      const std::size_t j = grid.index(ix, iy);
      f.comp1[j] = isp.a * env;
      f.comp2[j] = isp.b * env;
    }
  }
  const double inv = 1.0 / std::sqrt(norm(f));
  for (std::size_t j = 0; j < f.size(); ++j) {
    f.comp1[j] *= inv;
    f.comp2[j] *= inv;
  }
  return f;
}

// ---------------------------------------------------------------------------
// 2+1D Foldy-Wouthuysen transform

/// Angle defined by px - i py = |p| e^{-i th'}, i.e. the principal argument
/// of px + i py; the origin bin is assigned 0 (sin th vanishes there anyway).
inline double theta_prime(double px, double py) {
  if (px == 0.0 && py == 0.0) return 0.0;
  return std::atan2(py, px);
}

enum class PairPhase { Standard, Conjugated };

inline Mat2 fw_unitary_2d_at(double px, double py, const PhysicalParams& params,
                             PairPhase phase = PairPhase::Standard) {
  const double pmag = std::hypot(px, py);
  const double th = 0.5 * std::atan(pmag / params.mass_momentum());
  const double ct = std::cos(th);
  const double st = std::sin(th);
  double tp = theta_prime(px, py);
  if (phase == PairPhase::Conjugated) tp = -tp;
  const cplx off = std::polar(st, -tp);
  return {ct, off, -std::conj(off), ct};
}

inline std::vector<Mat2> fw_unitary_2d(const Grid2D& grid, const PhysicalParams& params,
                                       PairPhase phase = PairPhase::Standard) {
  std::vector<Mat2> bins(grid.size());
  for (std::size_t iy = 0; iy < grid.ny(); ++iy)
    for (std::size_t ix = 0; ix < grid.nx(); ++ix)
      bins[grid.index(ix, iy)] =
          fw_unitary_2d_at(grid.gx.p()[ix], grid.gy.p()[iy], params, phase);
  return bins;
}

/// Seven-device realisation of the 2D FW transform,
/// P[-th'] Q P[-th] H P[th] Q P[th']; the composition equals fw_unitary_2d
/// per bin with no residual global phase.
inline ApparatusPlan device_sequence_2d(const Grid2D& grid, const PhysicalParams& params,
                                        double efficiency = 1.0, bool inverse = false) {
  std::vector<double> th(grid.size()), tp(grid.size());
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    const double py = grid.gy.p()[iy];
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const double px = grid.gx.p()[ix];
      const std::size_t j = grid.index(ix, iy);
      th[j] = 0.5 * std::atan(std::hypot(px, py) / params.mass_momentum());
      tp[j] = theta_prime(px, py);
    }
  }
  if (inverse) {
    // U2^dagger = P[-th'] Q P[th] H P[-th] Q P[th'] with the angle mask
    // sign flipped: conjugate-transpose of a rotation-with-phases.
    for (double& v : th) v = -v;
  }
  auto negated = [](std::vector<double> v) {
    for (double& x : v) x = -x;
    return v;
  };
  ApparatusPlan plan;
  plan.steps.push_back({SlmPhase{tp, efficiency}, Space::Momentum});
  plan.steps.push_back({Qwp45{}, Space::Momentum});
  plan.steps.push_back({SlmPhase{th, efficiency}, Space::Momentum});
  plan.steps.push_back({Hwp45{}, Space::Momentum});
  plan.steps.push_back({SlmPhase{negated(th), efficiency}, Space::Momentum});
  plan.steps.push_back({Qwp45{}, Space::Momentum});
  plan.steps.push_back({SlmPhase{negated(tp), efficiency}, Space::Momentum});
  return plan;
}

namespace detail {

inline SpinorField2D evolve_2d_impl(const SpinorField2D& f, double t,
                                    const PhysicalParams& params, PairPhase phase) {
  if (f.rep != Rep::Dirac)
    throw std::invalid_argument("evolve_2d: expects a Dirac-representation field");
  const bool from_position = (f.space == Space::Position);
  SpinorField2D mom = from_position ? to_momentum(f) : f;
  for (std::size_t iy = 0; iy < f.grid.ny(); ++iy) {
    const double py = f.grid.gy.p()[iy];
    for (std::size_t ix = 0; ix < f.grid.nx(); ++ix) {
      const double px = f.grid.gx.p()[ix];
      const Mat2 u = fw_unitary_2d_at(px, py, params, phase);
      const double eps = params.energy(std::hypot(px, py));
      const Mat2 diag{std::polar(1.0, -eps * t), 0.0, 0.0, std::polar(1.0, +eps * t)};
      const Mat2 step = u.adjoint() * (diag * u);
      const std::size_t j = f.grid.index(ix, iy);
      step.apply(mom.comp1[j], mom.comp2[j]);
    }
  }
  return from_position ? to_position(mom) : mom;
}

}  // namespace detail

/// Free 2+1D evolution through the FW path; preserves the caller's space tag.
inline SpinorField2D evolve_2d(const SpinorField2D& f, double t, const PhysicalParams& params) {
  return detail::evolve_2d_impl(f, t, params, PairPhase::Standard);
}

// ---------------------------------------------------------------------------
// Restricted 3+1D evolution

/// Component pairs (phi1, phi4) and (phi2, phi3) of a pz-independent
/// four-spinor; the pairs never mix under the restricted evolution.
struct Spinor4Pair {
  SpinorField2D pair14;
  SpinorField2D pair23;

  double combined_norm() const { return norm(pair14) + norm(pair23); }
};

inline Spinor4Pair evolve_3d_restricted(const Spinor4Pair& pair, double t,
                                        const PhysicalParams& params) {
  return {detail::evolve_2d_impl(pair.pair14, t, params, PairPhase::Standard),
          detail::evolve_2d_impl(pair.pair23, t, params, PairPhase::Conjugated)};
}

// ---------------------------------------------------------------------------
// sigma1-potential class

/// Trapezoid antiderivative of V1 from the left grid edge, divided by c.
/// The anchoring constant only contributes a global phase.
inline std::vector<double> gauge_phase(const Grid1D& grid, const std::vector<double>& v1,
                                       double c) {
  if (v1.size() != grid.size())
    throw std::invalid_argument("gauge_phase: potential not sampled on the grid");
  std::vector<double> lambda(grid.size(), 0.0);
  for (std::size_t j = 1; j < grid.size(); ++j)
    lambda[j] = lambda[j - 1] + 0.5 * (v1[j - 1] + v1[j]) * grid.dx();
  for (double& l : lambda) l /= c;
  return lambda;
}

/// Evolution under H = c p sigma1 + m c^2 sigma3 + V1(x) sigma1, via the
/// gauge trick: strip the phase, evolve freely, restore the phase.
inline SpinorField evolve_with_sigma1_potential(const SpinorField& f, double t,
                                                const PhysicalParams& params,
                                                const std::vector<double>& v1) {
  if (f.rep != Rep::Dirac || f.space != Space::Position)
    throw std::invalid_argument("evolve_with_sigma1_potential: expects a Dirac position-space field");
  const std::vector<double> lambda = gauge_phase(f.grid, v1, params.c);
  SpinorField stripped = f;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const cplx ph = std::polar(1.0, lambda[j]);
    stripped.comp1[j] *= ph;
    stripped.comp2[j] *= ph;
  }
  SpinorField evolved = evolve_dirac(stripped, t, params);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const cplx ph = std::polar(1.0, -lambda[j]);
    evolved.comp1[j] *= ph;
    evolved.comp2[j] *= ph;
  }
  return evolved;
}

}  // namespace diracfw
