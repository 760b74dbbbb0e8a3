#include "mnda/reference.hpp"

#include <cstddef>

namespace mnda::reference {

void advective_product(std::span<const double> ux, std::span<const double> uy,
                       std::span<const double> wx, std::span<const double> wy,
                       std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ux[i] * wx[i] + uy[i] * wy[i];
}

void dealias_in_place(SpectralField& f) {
  const int n = f.size();
  for (int ky = -n / 2 + 1; ky <= n / 2; ++ky) {
    for (int kx = -n / 2 + 1; kx <= n / 2; ++kx) {
      if (!in_dealias_band(kx, ky, n)) f.at(kx, ky) = Complex{};
    }
  }
  f.at(0, 0) = Complex{};
}

namespace {

void fill_cell(std::span<double> block, int stride, int i, int j, int s) {
  if (s < 2) return;
  auto at = [&](int x, int y) -> double& { return block[static_cast<std::size_t>(y) * stride + x]; };
  const int h = s / 2;
  at(i + h, j) = (at(i, j) + at(i + s, j)) / 2.0;
  at(i + h, j + s) = (at(i, j + s) + at(i + s, j + s)) / 2.0;
  at(i, j + h) = (at(i, j) + at(i, j + s)) / 2.0;
  at(i + s, j + h) = (at(i + s, j) + at(i + s, j + s)) / 2.0;
  at(i + h, j + h) = (at(i, j) + at(i + s, j) + at(i + s, j + s) + at(i, j + s)) / 4.0;
  fill_cell(block, stride, i, j, h);
  fill_cell(block, stride, i + h, j, h);
  fill_cell(block, stride, i, j + h, h);
  fill_cell(block, stride, i + h, j + h, h);
}

}  // namespace

void kp_fill(std::span<double> block, int m, int p) {
  const int s = 1 << p;
  for (int j = 0; j < m; j += s) {
    for (int i = 0; i < m; i += s) fill_cell(block, m + 1, i, j, s);
  }
}

double window_trapezoid(const GridField& g, const NodeWindow& w, int stride) {
  const int count = w.nodes / stride;
  double total = 0.0;
  for (int b = 0; b <= count; ++b) {
    const double wb = (b == 0 || b == count) ? 0.5 : 1.0;
    double acc = 0.0;
    for (int a = 0; a <= count; ++a) {
      const double wa = (a == 0 || a == count) ? 0.5 : 1.0;
      const double v = g.wrapped(w.i0 + a * stride, w.j0 + b * stride);
      acc += wa * v * v;
    }
    total += wb * acc;
  }
  const double cell = stride * g.spacing();
  return total * cell * cell;
}

}  // namespace mnda::reference
