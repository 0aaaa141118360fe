// Shared test helpers: a deterministic RNG (engine output only, no
// library distributions), random smooth wavepacket generators, and
// independent oracles kept out of the library on purpose.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "diracfw/core.hpp"
#include "diracfw/dirac1d.hpp"

namespace testsupport {

using diracfw::cplx;

/// Deterministic uniform doubles in [0, 1) from the standardised mt19937_64
/// stream (std distributions are not portable across implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  cplx unit_complex() { return std::polar(1.0, diracfw::two_pi * uniform()); }

 private:
  std::mt19937_64 eng_;
};

/// Random normalised smooth state: a couple of chirped, boosted Gaussians
/// with random complex spinor weights.  Smooth and localised, so it honours
/// the boundary guard over the full time window at c <= 0.1, t <= 95.
inline diracfw::SpinorField random_state(const diracfw::Grid1D& grid, Rng& rng) {
  diracfw::SpinorField f = diracfw::make_field(grid, diracfw::Rep::Dirac,
                                               diracfw::Space::Position);
  const int humps = 1 + static_cast<int>(rng.uniform() * 2.0);
  for (int h = 0; h < humps; ++h) {
    const double x0 = rng.uniform(-4.0, 4.0);
    const double width = rng.uniform(0.8, 1.6);
    const double p0 = rng.uniform(-2.0, 2.0);
    const double chirp = rng.uniform(-0.2, 0.2);
    const cplx wa = rng.uniform(0.2, 1.0) * rng.unit_complex();
    const cplx wb = rng.uniform(0.2, 1.0) * rng.unit_complex();
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double x = grid.x()[j] - x0;
      const cplx env = std::exp(cplx(-x * x / (4.0 * width * width), p0 * x + chirp * x * x));
      f.comp1[j] += wa * env;
      f.comp2[j] += wb * env;
    }
  }
  const double inv = 1.0 / std::sqrt(diracfw::norm(f));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    f.comp1[j] *= inv;
    f.comp2[j] *= inv;
  }
  return f;
}

inline double max_component_diff(const diracfw::SpinorField& a, const diracfw::SpinorField& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    worst = std::max(worst, std::abs(a.comp1[j] - b.comp1[j]));
    worst = std::max(worst, std::abs(a.comp2[j] - b.comp2[j]));
  }
  return worst;
}

inline double max_abs_entry(const diracfw::Mat2& m) {
  return std::max(std::max(std::abs(m.a), std::abs(m.b)), std::max(std::abs(m.c), std::abs(m.d)));
}

/// Brute-force O(n^2) discrete Fourier transform with the library's
/// convention, as an independent oracle for small grids.
inline std::vector<cplx> dft_oracle(const std::vector<cplx>& in, const diracfw::Grid1D& grid) {
  const std::size_t n = grid.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j)
      acc += in[j] * std::exp(cplx(0.0, -grid.p()[k] * grid.x()[j]));
    out[k] = acc * (grid.dx() / std::sqrt(diracfw::two_pi));
  }
  return out;
}

}  // namespace testsupport
