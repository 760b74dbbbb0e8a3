// Fourier-space fields on the periodic square [0,2π]² and the operators the
// vorticity solver is built from.
//
// Conventions:
//   * forward transform divides by N², inverse does not, so coeff(k) is the
//   analytic Fourier coefficient and ‖f‖² = 4π² Σ|coeff(k)|²;
//   * wavenumbers are integers k ∈ {−N/2+1, …, N/2}, λ1 = 1;
//   * dealiasing is the 2/3 rule: coeff(k) = 0 when |k_x| > N/3 or |k_y| > N/3.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mnda {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Thrown when an operation's input violates its stated preconditions.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool is_power_of_two(int n);

/// Complex Fourier coefficients of a real scalar field, stored as a full
/// N×N array in row-major (k_y, k_x) FFT order.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(int n);

  int size() const { return n_; }
  std::size_t count() const { return coeffs_.size(); }

  /// Access by signed wavenumber.
  Complex& at(int kx, int ky) { return coeffs_[offset(kx, ky)]; }
  const Complex& at(int kx, int ky) const { return coeffs_[offset(kx, ky)]; }

  std::span<Complex> data() { return coeffs_; }
  std::span<const Complex> data() const { return coeffs_; }

  /// Signed wavenumber of FFT index `idx`.
  static int wavenumber(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }
  static int fft_index(int k, int n) { return k >= 0 ? k : k + n; }

  /// Sets coeff(k) and coeff(−k) = conj(value) together.
  void set_pair(int kx, int ky, Complex value);

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);

  bool operator==(const SpectralField&) const = default;

 private:
  std::size_t offset(int kx, int ky) const {
    return static_cast<std::size_t>(fft_index(ky, n_)) * n_ + fft_index(kx, n_);
  }

  int n_ = 0;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Real nodal values at x_ij = (2πi/N, 2πj/N); storage is row-major in j.
class GridField {
 public:
  GridField() = default;
  explicit GridField(int n, double value = 0.0);

  int size() const { return n_; }
  double spacing() const { return kTwoPi / n_; }

  double& operator()(int i, int j) { return values_[static_cast<std::size_t>(j) * n_ + i]; }
  double operator()(int i, int j) const { return values_[static_cast<std::size_t>(j) * n_ + i]; }

  /// Periodic access; any integer node indices are accepted.
  double wrapped(int i, int j) const { return (*this)(wrap(i), wrap(j)); }
  int wrap(int i) const { return ((i % n_) + n_) % n_; }

  std::span<double> data() { return values_; }
  std::span<const double> data() const { return values_; }

  bool operator==(const GridField&) const = default;

 private:
  int n_ = 0;
  std::vector<double> values_;
};

/// Inverse transform. Throws PreconditionError on non-Hermitian input.
GridField to_grid(const SpectralField& f);
/// Forward transform (keeps every mode, including Nyquist and the mean).
SpectralField to_spectral(const GridField& g);

namespace detail {
/// to_grid without the Hermitian check, for solver-internal fields that are
/// Hermitian by construction.
GridField to_grid_unchecked(const SpectralField& f);
}  // namespace detail

/// Largest retained |k_x|, |k_y| under the 2/3 rule.
inline int dealias_limit(int n) { return n / 3; }

bool in_dealias_band(int kx, int ky, int n);
void dealias(SpectralField& f);
bool is_mean_zero(const SpectralField& f, double tol = 0.0);
bool is_hermitian(const SpectralField& f, double rel_tol = 1e-12);

/// −Δψ = ω. Rejects input with nonzero mean.
SpectralField poisson_solve(const SpectralField& omega);

/// −Δ applied spectrally.
SpectralField neg_laplacian(const SpectralField& f);

/// ∂_x and ∂_y applied spectrally (Nyquist multiplier zero).
SpectralField ddx(const SpectralField& f);
SpectralField ddy(const SpectralField& f);

/// Nodal velocity u = ∇⊥ψ = (−∂_yψ, ∂_xψ).
std::pair<GridField, GridField> velocity(const SpectralField& psi);

/// Dealiased u·∇ω with u = ∇⊥ψ; the (0,0) mode of the result is zero.
SpectralField advect(const SpectralField& omega, const SpectralField& psi);

double l2_norm(const SpectralField& f);
double h1_seminorm(const SpectralField& f);
/// Σ|k|²|f̂|² / Σ|f̂|² weighted by 1/|k|², i.e. ‖∇w‖²/‖w‖² for the velocity
/// w = ∇⊥(−Δ)⁻¹f recovered from vorticity f.
double velocity_dirichlet_quotient(const SpectralField& vorticity);

/// L² inner product ∫ f ḡ over [0,2π]² via Parseval.
double inner_product(const SpectralField& f, const SpectralField& g);

/// Full-domain quadrature ∫ g² on the uniform grid.
double grid_l2_squared(const GridField& g);

}  // namespace mnda
