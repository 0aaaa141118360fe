// Momentum-space treatment of the 1+1D free Dirac problem.
//
// Per momentum bin the Hamiltonian is the 2x2 matrix
//   H(p) = [[m c^2, c p], [c p, -m c^2]]
// with eigenvalues +-eps(p).  The Foldy-Wouthuysen rotation
//   U(p) = [[cos th, sin th], [-sin th, cos th]],  2 th = arctan(p/(m c)),
// diagonalises it into diag(eps, -eps); the upper component is the
// positive-energy one and acquires the phase e^{-i eps t}.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "diracfw/core.hpp"

namespace diracfw {

// ---------------------------------------------------------------------------
// 2x2 complex matrices

struct Mat2 {
  cplx a{0.0}, b{0.0}, c{0.0}, d{0.0};  // [[a, b], [c, d]]

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }

  void apply(cplx& v1, cplx& v2) const {
    const cplx w1 = a * v1 + b * v2;
    const cplx w2 = c * v1 + d * v2;
    v1 = w1;
    v2 = w2;
  }

  /// conj(v) . M . v for v = (v1, v2).
  cplx expectation(cplx v1, cplx v2) const {
    return std::conj(v1) * (a * v1 + b * v2) + std::conj(v2) * (c * v1 + d * v2);
  }

  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend Mat2 operator+(const Mat2& m, const Mat2& n) {
    return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d};
  }
  friend Mat2 operator-(const Mat2& m, const Mat2& n) {
    return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
  }
  friend Mat2 operator*(cplx s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
};

inline Mat2 sigma1() { return {0.0, 1.0, 1.0, 0.0}; }
inline Mat2 sigma2() { return {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}; }
inline Mat2 sigma3() { return {1.0, 0.0, 0.0, -1.0}; }

/// One 2x2 matrix per momentum bin.
struct MomentumMatrixField {
  Grid1D grid;
  std::vector<Mat2> bins;

  SpinorField apply(const SpinorField& f) const {
    if (f.space != Space::Momentum)
      throw std::invalid_argument("MomentumMatrixField::apply: field is not in momentum space");
    if (!(f.grid == grid))
      throw std::invalid_argument("MomentumMatrixField::apply: grid mismatch");
    SpinorField out = f;
    for (std::size_t j = 0; j < bins.size(); ++j) bins[j].apply(out.comp1[j], out.comp2[j]);
    return out;
  }

  MomentumMatrixField adjoint() const {
    MomentumMatrixField out{grid, bins};
    for (auto& m : out.bins) m = m.adjoint();
    return out;
  }
};

// ---------------------------------------------------------------------------
// Operators

inline Mat2 hamiltonian_at(double p, const PhysicalParams& params) {
  const double mc2 = params.rest_energy();
  const double cp = params.c * p;
  return {mc2, cp, cp, -mc2};
}

inline MomentumMatrixField hamiltonian(const Grid1D& grid, const PhysicalParams& params) {
  MomentumMatrixField h{grid, {}};
  h.bins.reserve(grid.size());
  for (double p : grid.p()) h.bins.push_back(hamiltonian_at(p, params));
  return h;
}

struct EigenSpinors {
  std::array<cplx, 2> u;  // H u = +eps u
  std::array<cplx, 2> v;  // H v = -eps v
};

/// Orthonormal eigenspinors of H(p); u = (cos th, sin th), v = (-sin th, cos th).
inline EigenSpinors eigenspinors(double p, const PhysicalParams& params) {
  const double th = params.mixing_angle(p);
  const double ct = std::cos(th);
  const double st = std::sin(th);
  return {{cplx(ct), cplx(st)}, {cplx(-st), cplx(ct)}};
}

inline Mat2 fw_unitary_at(double p, const PhysicalParams& params) {
  const double th = params.mixing_angle(p);
  const double ct = std::cos(th);
  const double st = std::sin(th);
  return {ct, st, -st, ct};
}

/// Foldy-Wouthuysen rotation per bin; U H U^dagger = diag(eps, -eps).
inline MomentumMatrixField fw_unitary(const Grid1D& grid, const PhysicalParams& params) {
  MomentumMatrixField u{grid, {}};
  u.bins.reserve(grid.size());
  for (double p : grid.p()) u.bins.push_back(fw_unitary_at(p, params));
  return u;
}

enum class EnergySign { Positive, Negative };

inline Mat2 energy_projector_at(double p, const PhysicalParams& params, EnergySign sign) {
  const double eps = params.energy(p);
  const double s = (sign == EnergySign::Positive) ? 1.0 : -1.0;
  const Mat2 h = hamiltonian_at(p, params);
  return (cplx(0.5 / eps)) * (Mat2{eps, 0.0, 0.0, eps} + cplx(s) * h);
}

/// Dirac-representation projector onto the energy-sign subspace,
/// P_s = (eps +- H)/(2 eps): idempotent, Hermitian, P+ + P- = 1.
inline MomentumMatrixField projector_dirac(const Grid1D& grid, const PhysicalParams& params,
                                           EnergySign sign) {
  MomentumMatrixField proj{grid, {}};
  proj.bins.reserve(grid.size());
  for (double p : grid.p()) proj.bins.push_back(energy_projector_at(p, params, sign));
  return proj;
}

/// FW-representation projectors are constant: diag(1,0) and diag(0,1).
inline Mat2 projector_fw(EnergySign sign) {
  return sign == EnergySign::Positive ? Mat2{1.0, 0.0, 0.0, 0.0} : Mat2{0.0, 0.0, 0.0, 1.0};
}

// ---------------------------------------------------------------------------
// Propagation

/// Diagonal FW evolution: comp1 <- e^{-i eps t} comp1, comp2 <- e^{+i eps t} comp2.
inline SpinorField evolve_fw_diagonal(const SpinorField& f, double t,
                                      const PhysicalParams& params) {
  if (f.rep != Rep::FW || f.space != Space::Momentum)
    throw std::invalid_argument("evolve_fw_diagonal: expects an FW momentum-space field");
  SpinorField out = f;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double eps = params.energy(f.grid.p()[j]);
    out.comp1[j] *= std::polar(1.0, -eps * t);
    out.comp2[j] *= std::polar(1.0, +eps * t);
  }
  return out;
}

/// FW-path evolution of a Dirac-representation field: U^dagger o diag o U.
/// Accepts either space tag and returns the field in the caller's space.
inline SpinorField evolve_dirac(const SpinorField& f, double t, const PhysicalParams& params) {
  if (f.rep != Rep::Dirac)
    throw std::invalid_argument("evolve_dirac: expects a Dirac-representation field");
  const bool from_position = (f.space == Space::Position);
  SpinorField mom = from_position ? to_momentum(f) : f;
  const MomentumMatrixField u = fw_unitary(f.grid, params);
  SpinorField fw = u.apply(mom);
  fw.rep = Rep::FW;
  fw = evolve_fw_diagonal(fw, t, params);
  SpinorField back = u.adjoint().apply(fw);
  back.rep = Rep::Dirac;
  return from_position ? to_position(back) : back;
}

/// Independent propagation path: exact per-bin matrix exponential
/// e^{-i H(p) t} = cos(eps t) 1 - i sin(eps t) H(p)/eps.
inline SpinorField evolve_dirac_direct(const SpinorField& f, double t,
                                       const PhysicalParams& params) {
  if (f.rep != Rep::Dirac)
    throw std::invalid_argument("evolve_dirac_direct: expects a Dirac-representation field");
  const bool from_position = (f.space == Space::Position);
  SpinorField mom = from_position ? to_momentum(f) : f;
  for (std::size_t j = 0; j < mom.size(); ++j) {
    const double p = f.grid.p()[j];
    const double eps = params.energy(p);
    const Mat2 h = hamiltonian_at(p, params);
    const Mat2 step = Mat2{std::cos(eps * t), 0.0, 0.0, std::cos(eps * t)} +
                      cplx(0.0, -std::sin(eps * t) / eps) * h;
    step.apply(mom.comp1[j], mom.comp2[j]);
  }
  return from_position ? to_position(mom) : mom;
}

/// Heisenberg-picture mean of the Dirac position operator,
///   <x(t)> = <x(0)> + t <c^2 p H^{-1}>
///            - Re < (c H^{-1} / 2i) (e^{2 i H t} - 1) (c p H^{-1} - sigma1) >,
/// evaluated without propagating the state.  <x(0)> is computed in position
/// space; the remaining terms are per-bin 2x2 expectations in momentum space.
inline double heisenberg_mean_x(const SpinorField& f0, double t, const PhysicalParams& params) {
  if (f0.rep != Rep::Dirac)
    throw std::invalid_argument("heisenberg_mean_x: expects a Dirac-representation field");
  const SpinorField pos = (f0.space == Space::Position) ? f0 : to_position(f0);
  double x0 = 0.0;
  for (std::size_t j = 0; j < pos.size(); ++j)
    x0 += pos.grid.x()[j] * (std::norm(pos.comp1[j]) + std::norm(pos.comp2[j]));
  x0 *= pos.grid.dx();

  const SpinorField mom = (f0.space == Space::Momentum) ? f0 : to_momentum(pos);
  const Mat2 s1 = sigma1();
  cplx drift{0.0, 0.0};
  cplx zb{0.0, 0.0};
  for (std::size_t j = 0; j < mom.size(); ++j) {
    const double p = mom.grid.p()[j];
    const double eps = params.energy(p);
    const Mat2 h = hamiltonian_at(p, params);
    const Mat2 h_inv = cplx(1.0 / (eps * eps)) * h;
    const Mat2 drift_op = cplx(params.c * params.c * p) * h_inv;
    drift += drift_op.expectation(mom.comp1[j], mom.comp2[j]);
    // e^{2 i H t} - 1 = (cos(2 eps t) - 1) 1 + i sin(2 eps t) H / eps
    const double c2 = std::cos(2.0 * eps * t) - 1.0;
    const double s2 = std::sin(2.0 * eps * t);
    const Mat2 osc = Mat2{c2, 0.0, 0.0, c2} + cplx(0.0, s2 / eps) * h;
    const Mat2 zb_op =
        cplx(0.0, -0.5 * params.c) * (h_inv * (osc * (cplx(params.c * p) * h_inv - s1)));
    zb += zb_op.expectation(mom.comp1[j], mom.comp2[j]);
  }
  const double w = mom.grid.dp();
  return x0 + t * std::real(drift) * w - std::real(zb) * w;
}

}  // namespace diracfw
