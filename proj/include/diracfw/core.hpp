// Core building blocks: uniform grids, physical parameters, two-component
// spinor fields and the unitary discrete Fourier transform between position
// and momentum space.
//
// Unit conventions used throughout the library: hbar = 1, the beam width
// Delta is the length unit and tau the time unit.  The speed of light c is
// given in Delta/tau and the Compton wavelength lambda_C in Delta, so the
// mass scale is m*c = 2*pi/lambda_C.
#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace diracfw {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Grid1D

/// Uniform spatial grid of n points (n a power of two) covering `extent`
/// length units, centred on x = 0, together with its conjugate momentum grid
/// p_k = 2*pi*k/extent for k in [-n/2, n/2).
class Grid1D {
 public:
  Grid1D(std::size_t n, double extent) : n_(n), extent_(extent) {
    if (n < 2 || !std::has_single_bit(n))
      throw std::invalid_argument("Grid1D: point count must be a power of two >= 2");
    if (!(extent > 0.0) || !std::isfinite(extent))
      throw std::invalid_argument("Grid1D: extent must be positive and finite");
    dx_ = extent_ / static_cast<double>(n_);
    dp_ = two_pi / extent_;
    x_.resize(n_);
    p_.resize(n_);
    const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
    for (std::size_t j = 0; j < n_; ++j) {
      const double k = static_cast<double>(static_cast<std::ptrdiff_t>(j) - half);
      x_[j] = k * dx_;
      p_[j] = k * dp_;
    }
  }

  std::size_t size() const { return n_; }
  double extent() const { return extent_; }
  double dx() const { return dx_; }
  double dp() const { return dp_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& p() const { return p_; }

  friend bool operator==(const Grid1D& a, const Grid1D& b) {
    return a.n_ == b.n_ && a.extent_ == b.extent_;
  }

 private:
  std::size_t n_;
  double extent_;
  double dx_;
  double dp_;
  std::vector<double> x_;
  std::vector<double> p_;
};

inline Grid1D make_grid(std::size_t n, double extent) { return Grid1D(n, extent); }

// ---------------------------------------------------------------------------
// Physical parameters

/// Simulated constants.  Only the ratios matter: lambda_c fixes the mass via
/// m*c = 2*pi/lambda_c, so the rest energy is m*c^2 = 2*pi*c/lambda_c.
struct PhysicalParams {
  PhysicalParams(double c_, double lambda_c_) : c(c_), lambda_c(lambda_c_) {
    if (!(c > 0.0) || !std::isfinite(c))
      throw std::invalid_argument("PhysicalParams: c must be positive");
    if (!(lambda_c > 0.0) || !(lambda_c <= 1e6))
      throw std::invalid_argument("PhysicalParams: lambda_c must be in (0, 1e6]");
  }

  double c;
  double lambda_c;

  double mass_momentum() const { return two_pi / lambda_c; }        // m c
  double rest_energy() const { return two_pi * c / lambda_c; }      // m c^2
  /// Relativistic dispersion eps(p) = sqrt((m c^2)^2 + (p c)^2) >= m c^2.
  double energy(double p) const { return std::hypot(rest_energy(), p * c); }
  /// Mixing angle theta(p), 2*theta = arctan(p / (m c)); odd in p, in (-pi/4, pi/4).
  double mixing_angle(double p) const { return 0.5 * std::atan(p / mass_momentum()); }
};

/// Per-bin dispersion samples over a grid's momenta.
struct DispersionTable {
  std::vector<double> energy;
  std::vector<double> mixing_angle;
};

inline DispersionTable make_dispersion(const Grid1D& grid, const PhysicalParams& params) {
  DispersionTable table;
  table.energy.reserve(grid.size());
  table.mixing_angle.reserve(grid.size());
  for (double p : grid.p()) {
    table.energy.push_back(params.energy(p));
    table.mixing_angle.push_back(params.mixing_angle(p));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Spinor fields

enum class Rep { Dirac, FW };
enum class Space { Position, Momentum };

/// Two complex component functions over a shared grid, tagged by
/// representation and by the space the samples live in.
struct SpinorField {
  Grid1D grid;
  std::vector<cplx> comp1;
  std::vector<cplx> comp2;
  Rep rep = Rep::Dirac;
  Space space = Space::Position;

  std::size_t size() const { return grid.size(); }
  double weight() const { return space == Space::Position ? grid.dx() : grid.dp(); }
};

inline SpinorField make_field(const Grid1D& grid, Rep rep, Space space) {
  return SpinorField{grid, std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size()),
                     rep, space};
}

namespace detail {

inline void require_same_layout(const SpinorField& f, const SpinorField& g,
                                const char* what) {
  if (!(f.grid == g.grid) || f.space != g.space)
    throw std::invalid_argument(std::string(what) + ": fields live on different grids or spaces");
}

}  // namespace detail

/// inner(f, g) = sum_i sum_x conj(f_i) g_i * (dx or dp); sesquilinear in the
/// second argument, conjugate-symmetric.
inline cplx inner(const SpinorField& f, const SpinorField& g) {
  detail::require_same_layout(f, g, "inner");
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < f.size(); ++j)
    acc += std::conj(f.comp1[j]) * g.comp1[j] + std::conj(f.comp2[j]) * g.comp2[j];
  return acc * f.weight();
}

inline double norm(const SpinorField& f) {
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    acc += std::norm(f.comp1[j]) + std::norm(f.comp2[j]);
  return acc * f.weight();
}

// ---------------------------------------------------------------------------
// Discrete Fourier transforms
//
// Convention: psi~(p) = (2*pi)^{-1/2} Integral psi(x) e^{-i p x} dx, sampled
// on the centred grids above.  With dx*dp*n = 2*pi the discrete map is
// exactly unitary: round trips are the identity and Parseval holds to
// rounding error.

namespace detail {

/// In-place radix-2 FFT, unnormalised.  `inverse` flips the kernel sign.
inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<cplx> twiddle(n / 2);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n / 2; ++k)
    twiddle[k] = std::polar(1.0, sign * two_pi * static_cast<double>(k) / static_cast<double>(n));
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx w = twiddle[k * stride];
        const cplx u = a[base + k];
        const cplx v = a[base + k + len / 2] * w;
        a[base + k] = u + v;
        a[base + k + len / 2] = u - v;
      }
    }
  }
}

/// Centred forward transform of one component: input indexed by x_j
/// ascending, output indexed by p_k ascending.
inline void centered_forward(std::vector<cplx>& buf, double dx) {
  const std::size_t n = buf.size();
  const std::size_t half = n / 2;
  fft_pow2(buf, false);
  std::vector<cplx> out(n);
  const double scale = dx / std::sqrt(two_pi);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = (i + half) % n;
    const double sign = ((i + half) & 1u) ? -1.0 : 1.0;
    out[i] = buf[src] * (sign * scale);
  }
  buf = std::move(out);
}

/// Centred inverse transform: input indexed by p_k ascending, output by x_j.
inline void centered_backward(std::vector<cplx>& buf, double dp) {
  const std::size_t n = buf.size();
  const std::size_t half = n / 2;
  std::vector<cplx> tmp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sign = ((i + half) & 1u) ? -1.0 : 1.0;
    tmp[(i + half) % n] = buf[i] * sign;
  }
  fft_pow2(tmp, true);
  const double scale = dp / std::sqrt(two_pi);
  for (std::size_t j = 0; j < n; ++j) tmp[j] *= scale;
  buf = std::move(tmp);
}

}  // namespace detail

inline SpinorField to_momentum(const SpinorField& f) {
  if (f.space != Space::Position)
    throw std::invalid_argument("to_momentum: field is not in position space");
  SpinorField out = f;
  out.space = Space::Momentum;
  detail::centered_forward(out.comp1, f.grid.dx());
  detail::centered_forward(out.comp2, f.grid.dx());
  return out;
}

inline SpinorField to_position(const SpinorField& f) {
  if (f.space != Space::Momentum)
    throw std::invalid_argument("to_position: field is not in momentum space");
  SpinorField out = f;
  out.space = Space::Position;
  detail::centered_backward(out.comp1, f.grid.dp());
  detail::centered_backward(out.comp2, f.grid.dp());
  return out;
}

// ---------------------------------------------------------------------------
// Initial state

/// Parameters of the chirped-Gaussian initial spinor
///   psi_i(x) = w_i * exp(-i x^2 / r_phase) * exp(-x^2 / (4 delta^2)),
/// (w1, w2) = (a, b).  `r_phase` is the chirp scale lambda*R/pi in Delta^2;
/// its sign is exposed because the physical convention depends on the
/// propagation direction.
struct InitialStateParams {
  double delta = 1.0;
  double r_phase = 4.84;  // (2.2)^2
  cplx a{std::numbers::sqrt2 / 2.0, 0.0};
  cplx b{-std::numbers::sqrt2 / 2.0, 0.0};

  void validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("InitialStateParams: delta must be positive");
    if (!(std::isfinite(r_phase)) || r_phase == 0.0)
      throw std::invalid_argument("InitialStateParams: r_phase must be finite and nonzero");
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12)
      throw std::invalid_argument("InitialStateParams: |a|^2 + |b|^2 must equal 1");
  }
};

/// Mass fraction in the outer extent/16 band on each side of a
/// position-space field.  Used as the runtime guard that keeps wavepackets
/// away from the periodic boundary.
inline double tail_mass(const SpinorField& f) {
  if (f.space != Space::Position)
    throw std::invalid_argument("tail_mass: field is not in position space");
  const double cut = f.grid.extent() * (7.0 / 16.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (std::abs(f.grid.x()[j]) > cut)
      acc += std::norm(f.comp1[j]) + std::norm(f.comp2[j]);
  }
  return acc * f.grid.dx();
}

/// Normalised Dirac-representation position-space initial state.
inline SpinorField prepare_initial(const Grid1D& grid, const InitialStateParams& isp) {
  isp.validate();
  SpinorField f = make_field(grid, Rep::Dirac, Space::Position);
  const double gw = 1.0 / (4.0 * isp.delta * isp.delta);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x()[j];
    const cplx env = std::exp(cplx(-gw * x * x, -x * x / isp.r_phase));
    f.comp1[j] = isp.a * env;
    f.comp2[j] = isp.b * env;
  }
  const double total = norm(f);
  const double inv = 1.0 / std::sqrt(total);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    f.comp1[j] *= inv;
    f.comp2[j] *= inv;
  }
  if (tail_mass(f) > 1e-10)
    throw std::runtime_error("prepare_initial: grid too small for the requested state (tail mass > 1e-10)");
  return f;
}

}  // namespace diracfw
