// Shared fixtures and independent oracles for the test binaries.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mnda/integrator.hpp"
#include "mnda/spectral.hpp"

namespace mnda::testing {

/// Random Hermitian, mean-zero field with modes |k_x|,|k_y| <= band.
inline SpectralField random_field(int n, int band, std::uint64_t seed, double decay = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  SpectralField f(n);
  for (int ky = 0; ky <= band; ++ky) {
    for (int kx = -band; kx <= band; ++kx) {
      if (ky == 0 && kx <= 0) continue;
      const double amp = decay > 0.0 ? std::pow(1.0 + kx * kx + ky * ky, -decay) : 1.0;
      f.set_pair(kx, ky, amp * Complex(gauss(rng), gauss(rng)));
    }
  }
  return f;
}

/// Nodal samples of a closed-form function.
template <class Fn>
GridField sample(int n, Fn fn) {
  GridField g(n);
  const double dx = kTwoPi / n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = fn(i * dx, j * dx);
  }
  return g;
}

inline double max_abs_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline double max_abs(const GridField& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

/// Direct O(N⁴) evaluation of the inverse transform, for small N.
inline GridField naive_inverse(const SpectralField& f) {
  const int n = f.size();
  GridField g(n);
  const double dx = kTwoPi / n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Complex acc{};
      for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
          const int kx = SpectralField::wavenumber(ix, n);
          const int ky = SpectralField::wavenumber(iy, n);
          acc += f.at(kx, ky) * std::polar(1.0, kx * i * dx + ky * j * dx);
        }
      }
      g(i, j) = acc.real();
    }
  }
  return g;
}

/// Brute-force recursive midpoint fill, written from the picture: for a cell
/// with corners a (bottom-left), b (bottom-right), c (top-right), d
/// (top-left), set the four edge midpoints to the mean of their endpoints
/// and the centre to (a+b+c+d)/4, then recurse into the four quarter cells.
inline void oracle_fill_cell(std::vector<double>& v, int stride_row, int x0, int y0, int s) {
  if (s < 2) return;
  auto at = [&](int x, int y) -> double& { return v[static_cast<std::size_t>(y) * stride_row + x]; };
  const int h = s / 2;
  const double a = at(x0, y0), b = at(x0 + s, y0), c = at(x0 + s, y0 + s), d = at(x0, y0 + s);
  at(x0 + h, y0) = (a + b) / 2.0;
  at(x0 + s, y0 + h) = (b + c) / 2.0;
  at(x0 + h, y0 + s) = (d + c) / 2.0;
  at(x0, y0 + h) = (a + d) / 2.0;
  at(x0 + h, y0 + h) = (a + b + c + d) / 4.0;
  oracle_fill_cell(v, stride_row, x0, y0, h);
  oracle_fill_cell(v, stride_row, x0 + h, y0, h);
  oracle_fill_cell(v, stride_row, x0, y0 + h, h);
  oracle_fill_cell(v, stride_row, x0 + h, y0 + h, h);
}

inline std::vector<double> oracle_kp(std::vector<double> block, int m, int p) {
  const int s = 1 << p;
  for (int y = 0; y < m; y += s) {
    for (int x = 0; x < m; x += s) oracle_fill_cell(block, m + 1, x, y, s);
  }
  return block;
}

// Manufactured solution ω = a(t)·φ, φ = cos x + cos 2y, with a source that
// cancels the residual on the exact path.
struct Manufactured {
  int n = 32;
  double nu = 0.05;
  SpectralField phi{32};

  Manufactured() {
    phi.set_pair(1, 0, Complex(0.5, 0.0));
    phi.set_pair(0, 2, Complex(0.5, 0.0));
  }
  static double a(double t) { return 1.0 + 0.5 * std::sin(3.0 * t); }
  static double da(double t) { return 1.5 * std::cos(3.0 * t); }

  // R(ω, t) = −u·∇ω + s(t), s = ∂tω + ν(−Δ)ω + u·∇ω on the exact path
  SpectralField rhs(const SpectralField& w, double t) const {
    const SpectralField exact = a(t) * phi;
    SpectralField source = da(t) * phi;
    source += nu * neg_laplacian(exact);
    source += advect(exact, poisson_solve(exact));
    SpectralField out = source;
    out -= advect(w, poisson_solve(w));
    return out;
  }
};

/// ‖ω(t_end) − exact‖ for the manufactured problem stepped at dt.
inline double final_error(double dt, double t_end) {
  Manufactured m;
  StepperState s = make_state(Manufactured::a(0.0) * m.phi, 0.0, dt, m.nu);
  const ExplicitRhs rhs = [&](const SpectralField& w, double t) { return m.rhs(w, t); };
  const long steps = std::lround(t_end / dt);
  for (long k = 0; k < steps; ++k) advance(s, rhs);
  return l2_norm(s.omega - Manufactured::a(t_end) * m.phi);
}

}  // namespace mnda::testing
