#include "mnda/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "mnda/kernels.hpp"

namespace mnda {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

namespace {

void require_size(int n) {
  if (!is_power_of_two(n) || n < 4) {
    throw PreconditionError("grid size must be a power of two >= 4, got " + std::to_string(n));
  }
}

void require_same_size(int a, int b) {
  if (a != b) {
    throw PreconditionError("grid size mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

// FFTW planning is not thread-safe; plans are created once per size under a
// lock and executed through the new-array interface, which is. Execution
// arrays come from fftw_alloc, so the plans can assume SIMD alignment.
class FftPlans {
 public:
  explicit FftPlans(int n) : n_(n) {
    const int half = n / 2 + 1;
    auto* real = fftw_alloc_real(static_cast<std::size_t>(n) * n);
    auto* cplx = fftw_alloc_complex(static_cast<std::size_t>(n) * half);
    forward_ = fftw_plan_dft_r2c_2d(n, n, real, cplx, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_2d(n, n, cplx, real, FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
    fftw_free(real);
    fftw_free(cplx);
  }
  ~FftPlans() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(double* in, Complex* out) const {
    fftw_execute_dft_r2c(forward_, in, reinterpret_cast<fftw_complex*>(out));
  }
  void backward(Complex* in, double* out) const {
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in), out);
  }
  int size() const { return n_; }

 private:
  int n_;
  fftw_plan forward_{};
  fftw_plan backward_{};
};

const FftPlans& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<FftPlans>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlans>(n);
  return *slot;
}

// Per-thread aligned work arrays: five real grids and five half spectra.
struct FftBuffers {
  static constexpr int kCount = 5;
  explicit FftBuffers(int n) {
    const std::size_t half = static_cast<std::size_t>(n) * (n / 2 + 1);
    for (int i = 0; i < kCount; ++i) {
      real[i] = fftw_alloc_real(static_cast<std::size_t>(n) * n);
      spec[i] = reinterpret_cast<Complex*>(fftw_alloc_complex(half));
    }
  }
  ~FftBuffers() {
    for (int i = 0; i < kCount; ++i) {
      fftw_free(real[i]);
      fftw_free(spec[i]);
    }
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;

  double* real[kCount]{};
  Complex* spec[kCount]{};
};

FftBuffers& buffers_for(int n) {
  thread_local std::map<int, std::unique_ptr<FftBuffers>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftBuffers>(n);
  return *slot;
}

// Full (k_y, k_x) spectrum from the r2c half layout, scaled.
Complex from_half(const Complex* hc, int kx, int ky, int n, double scale) {
  const int half = n / 2 + 1;
  if (kx >= 0) return hc[static_cast<std::size_t>(SpectralField::fft_index(ky, n)) * half + kx] * scale;
  return std::conj(hc[static_cast<std::size_t>(SpectralField::fft_index(-ky, n)) * half - kx]) * scale;
}

}  // namespace

// --- SpectralField ---------------------------------------------------------

SpectralField::SpectralField(int n) : n_(n), coeffs_(static_cast<std::size_t>(n) * n) { require_size(n); }

void SpectralField::set_pair(int kx, int ky, Complex value) {
  at(-kx, -ky) = std::conj(value);
  at(kx, ky) = value;
  if (at(kx, ky) != at(-kx, -ky)) return;
  // self-conjugate modes (k ≡ −k) must be real
  at(kx, ky) = Complex(value.real(), 0.0);
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_size(n_, o.n_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_size(n_, o.n_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

GridField::GridField(int n, double value) : n_(n), values_(static_cast<std::size_t>(n) * n, value) {
  require_size(n);
}

// --- transforms ------------------------------------------------------------

namespace detail {

GridField to_grid_unchecked(const SpectralField& f) {
  const int n = f.size();
  const int half = n / 2 + 1;
  FftBuffers& buf = buffers_for(n);
  const auto src = f.data();
  for (int iy = 0; iy < n; ++iy) {
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(iy) * n, half, buf.spec[0] + static_cast<std::ptrdiff_t>(iy) * half);
  }
  plans_for(n).backward(buf.spec[0], buf.real[0]);
  GridField g(n);
  std::copy_n(buf.real[0], static_cast<std::size_t>(n) * n, g.data().begin());
  return g;
}

}  // namespace detail

GridField to_grid(const SpectralField& f) {
  require_size(f.size());
  if (!is_hermitian(f)) throw PreconditionError("to_grid: input is not Hermitian-symmetric");
  return detail::to_grid_unchecked(f);
}

SpectralField to_spectral(const GridField& g) {
  const int n = g.size();
  require_size(n);
  FftBuffers& buf = buffers_for(n);
  std::copy(g.data().begin(), g.data().end(), buf.real[0]);
  plans_for(n).forward(buf.real[0], buf.spec[0]);

  const double scale = 1.0 / (static_cast<double>(n) * n);
  SpectralField f(n);
  for (int iy = 0; iy < n; ++iy) {
    const int ky = SpectralField::wavenumber(iy, n);
    for (int ix = 0; ix < n; ++ix) {
      f.data()[static_cast<std::size_t>(iy) * n + ix] = from_half(buf.spec[0], SpectralField::wavenumber(ix, n), ky, n, scale);
    }
  }
  return f;
}

// --- masks and checks ------------------------------------------------------

bool in_dealias_band(int kx, int ky, int n) {
  const int lim = dealias_limit(n);
  return std::abs(kx) <= lim && std::abs(ky) <= lim && kx != n / 2 && ky != n / 2;
}

void dealias(SpectralField& f) { kernels::dealias_in_place(f); }

bool is_mean_zero(const SpectralField& f, double tol) { return std::abs(f.at(0, 0)) <= tol; }

bool is_hermitian(const SpectralField& f, double rel_tol) {
  const int n = f.size();
  double scale = 0.0;
  for (const auto& c : f.data()) scale = std::max(scale, std::abs(c));
  const double tol = rel_tol * scale;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const Complex a = f.data()[static_cast<std::size_t>(iy) * n + ix];
      const Complex b = f.data()[static_cast<std::size_t>((n - iy) % n) * n + (n - ix) % n];
      if (std::abs(a - std::conj(b)) > tol) return false;
    }
  }
  return true;
}

// --- differential operators ------------------------------------------------

SpectralField poisson_solve(const SpectralField& omega) {
  const int n = omega.size();
  double scale2 = 0.0;
  for (const auto& c : omega.data()) scale2 = std::max(scale2, std::norm(c));
  if (std::norm(omega.at(0, 0)) > 1e-28 * std::max(scale2, 1.0)) {
    throw PreconditionError("poisson_solve: vorticity must be mean-zero");
  }
  SpectralField psi(n);
  const auto src = omega.data();
  auto dst = psi.data();
  for (int iy = 0; iy < n; ++iy) {
    const int ky = SpectralField::wavenumber(iy, n);
    for (int ix = 0; ix < n; ++ix) {
      const int kx = SpectralField::wavenumber(ix, n);
      const int k2 = kx * kx + ky * ky;
      const std::size_t at = static_cast<std::size_t>(iy) * n + ix;
      dst[at] = k2 == 0 ? Complex{} : src[at] * (1.0 / static_cast<double>(k2));
    }
  }
  return psi;
}

SpectralField neg_laplacian(const SpectralField& f) {
  const int n = f.size();
  SpectralField out(n);
  for (int iy = 0; iy < n; ++iy) {
    const int ky = SpectralField::wavenumber(iy, n);
    for (int ix = 0; ix < n; ++ix) {
      const int kx = SpectralField::wavenumber(ix, n);
      const std::size_t at = static_cast<std::size_t>(iy) * n + ix;
      out.data()[at] = f.data()[at] * static_cast<double>(kx * kx + ky * ky);
    }
  }
  return out;
}

namespace {

// i·k along one axis; the Nyquist wavenumber has no real derivative.
SpectralField derivative(const SpectralField& f, bool along_x) {
  const int n = f.size();
  SpectralField out(n);
  for (int iy = 0; iy < n; ++iy) {
    const int ky = SpectralField::wavenumber(iy, n);
    for (int ix = 0; ix < n; ++ix) {
      const int kx = SpectralField::wavenumber(ix, n);
      int k = along_x ? kx : ky;
      if (k == n / 2) k = 0;
      const std::size_t at = static_cast<std::size_t>(iy) * n + ix;
      out.data()[at] = Complex(0.0, static_cast<double>(k)) * f.data()[at];
    }
  }
  return out;
}

}  // namespace

SpectralField ddx(const SpectralField& f) { return derivative(f, true); }
SpectralField ddy(const SpectralField& f) { return derivative(f, false); }

std::pair<GridField, GridField> velocity(const SpectralField& psi) {
  SpectralField u1 = ddy(psi);
  u1 *= -1.0;
  return {detail::to_grid_unchecked(u1), detail::to_grid_unchecked(ddx(psi))};
}

SpectralField advect(const SpectralField& omega, const SpectralField& psi) {
  require_same_size(omega.size(), psi.size());
  const int n = omega.size();
  const int half = n / 2 + 1;
  FftBuffers& buf = buffers_for(n);
  const FftPlans& plans = plans_for(n);
  // u = (−∂yψ, ∂xψ) and ∇ω, built directly in the half layout
  for (int iy = 0; iy < n; ++iy) {
    int ky = SpectralField::wavenumber(iy, n);
    if (ky == n / 2) ky = 0;
    for (int ix = 0; ix < half; ++ix) {
      const int kx = ix == n / 2 ? 0 : ix;
      const std::size_t at = static_cast<std::size_t>(iy) * n + ix;
      const std::size_t h = static_cast<std::size_t>(iy) * half + ix;
      const Complex p = psi.data()[at];
      const Complex w = omega.data()[at];
      buf.spec[0][h] = Complex(0.0, -static_cast<double>(ky)) * p;
      buf.spec[1][h] = Complex(0.0, static_cast<double>(kx)) * p;
      buf.spec[2][h] = Complex(0.0, static_cast<double>(kx)) * w;
      buf.spec[3][h] = Complex(0.0, static_cast<double>(ky)) * w;
    }
  }
  for (int i = 0; i < 4; ++i) plans.backward(buf.spec[i], buf.real[i]);
  const std::size_t count = static_cast<std::size_t>(n) * n;
  kernels::advective_product({buf.real[0], count}, {buf.real[1], count}, {buf.real[2], count},
                             {buf.real[3], count}, {buf.real[4], count});
  plans.forward(buf.real[4], buf.spec[4]);

  // only the dealiased band is kept, and never the mean
  const double scale = 1.0 / static_cast<double>(count);
  const int lim = dealias_limit(n);
  SpectralField out(n);
  for (int ky = -lim; ky <= lim; ++ky) {
    for (int kx = -lim; kx <= lim; ++kx) {
      if (kx == 0 && ky == 0) continue;
      out.at(kx, ky) = from_half(buf.spec[4], kx, ky, n, scale);
    }
  }
  return out;
}

// --- norms -----------------------------------------------------------------

double inner_product(const SpectralField& f, const SpectralField& g) {
  require_same_size(f.size(), g.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < f.count(); ++i) acc += (f.data()[i] * std::conj(g.data()[i])).real();
  return 4.0 * kPi * kPi * acc;
}

double l2_norm(const SpectralField& f) {
  double acc = 0.0;
  for (const auto& c : f.data()) acc += std::norm(c);
  return std::sqrt(4.0 * kPi * kPi * acc);
}

double h1_seminorm(const SpectralField& f) {
  const int n = f.size();
  double acc = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const int ky = SpectralField::wavenumber(iy, n);
    for (int ix = 0; ix < n; ++ix) {
      const int kx = SpectralField::wavenumber(ix, n);
      acc += static_cast<double>(kx * kx + ky * ky) * std::norm(f.data()[static_cast<std::size_t>(iy) * n + ix]);
    }
  }
  return std::sqrt(4.0 * kPi * kPi * acc);
}

double velocity_dirichlet_quotient(const SpectralField& vorticity) {
  const int n = vorticity.size();
  double num = 0.0;
  double den = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const int ky = SpectralField::wavenumber(iy, n);
    for (int ix = 0; ix < n; ++ix) {
      const int kx = SpectralField::wavenumber(ix, n);
      const int k2 = kx * kx + ky * ky;
      if (k2 == 0) continue;
      const double e = std::norm(vorticity.data()[static_cast<std::size_t>(iy) * n + ix]);
      num += e;
      den += e / k2;
    }
  }
  return den > 0.0 ? num / den : 0.0;
}

double grid_l2_squared(const GridField& g) {
  double acc = 0.0;
  for (double v : g.data()) acc += v * v;
  const double dx = g.spacing();
  return acc * dx * dx;
}

}  // namespace mnda
