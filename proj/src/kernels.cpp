#include "mnda/kernels.hpp"

#include <cstddef>
#include <vector>

namespace mnda::kernels {

void advective_product(std::span<const double> ux, std::span<const double> uy,
                       std::span<const double> wx, std::span<const double> wy,
                       std::span<double> out) {
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    out[i] = ux[i] * wx[i] + uy[i] * wy[i];
  }
}

void dealias_in_place(SpectralField& f) {
  const int n = f.size();
  const int lim = dealias_limit(n);
  auto data = f.data();
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < n; ++iy) {
    const int ky = SpectralField::wavenumber(iy, n);
    const bool row_out = ky > lim || ky < -lim || ky == n / 2;
    for (int ix = 0; ix < n; ++ix) {
      const int kx = SpectralField::wavenumber(ix, n);
      if (row_out || kx > lim || kx < -lim || kx == n / 2) {
        data[static_cast<std::size_t>(iy) * n + ix] = Complex{};
      }
    }
  }
  data[0] = Complex{};
}

void kp_fill(std::span<double> block, int m, int p) {
  const int stride = m + 1;
  auto at = [&](int i, int j) -> double& { return block[static_cast<std::size_t>(j) * stride + i]; };
  for (int s = 1 << p; s > 1; s /= 2) {
    const int h = s / 2;
    const int cells = m / s;
    // edge midpoints along rows (j on the s-lattice)
#pragma omp parallel for schedule(static)
    for (int b = 0; b <= cells; ++b) {
      const int j = b * s;
      for (int a = 0; a < cells; ++a) {
        const int i = a * s;
        at(i + h, j) = (at(i, j) + at(i + s, j)) / 2.0;
      }
    }
    // edge midpoints along columns
#pragma omp parallel for schedule(static)
    for (int b = 0; b < cells; ++b) {
      const int j = b * s;
      for (int a = 0; a <= cells; ++a) {
        const int i = a * s;
        at(i, j + h) = (at(i, j) + at(i, j + s)) / 2.0;
      }
    }
    // cell centres from the four corners
#pragma omp parallel for schedule(static)
    for (int b = 0; b < cells; ++b) {
      const int j = b * s;
      for (int a = 0; a < cells; ++a) {
        const int i = a * s;
        at(i + h, j + h) = (at(i, j) + at(i + s, j) + at(i + s, j + s) + at(i, j + s)) / 4.0;
      }
    }
  }
}

double window_trapezoid(const GridField& g, const NodeWindow& w, int stride) {
  const int count = w.nodes / stride;
  std::vector<double> rows(static_cast<std::size_t>(count) + 1, 0.0);
#pragma omp parallel for schedule(static)
  for (int b = 0; b <= count; ++b) {
    const double wb = (b == 0 || b == count) ? 0.5 : 1.0;
    double acc = 0.0;
    for (int a = 0; a <= count; ++a) {
      const double wa = (a == 0 || a == count) ? 0.5 : 1.0;
      const double v = g.wrapped(w.i0 + a * stride, w.j0 + b * stride);
      acc += wa * v * v;
    }
    rows[static_cast<std::size_t>(b)] = wb * acc;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  const double cell = stride * g.spacing();
  return total * cell * cell;
}

}  // namespace mnda::kernels
