#include "mnda/nudging.hpp"

#include <cmath>
#include <string>

#include "mnda/kernels.hpp"

namespace mnda {

WindowBlock make_block(int m) {
  WindowBlock b;
  b.m = m;
  b.values.assign(static_cast<std::size_t>(m + 1) * (m + 1), 0.0);
  return b;
}

WindowBlock kp_average(WindowBlock block, int p) {
  if (p < 0 || p > 16) throw PreconditionError("K_p level out of range");
  if (block.m <= 0 || block.m % (1 << p) != 0) {
    throw PreconditionError("K_p: window node count " + std::to_string(block.m) +
                            " not divisible by 2^" + std::to_string(p));
  }
  kernels::kp_fill(block.values, block.m, p);
  return block;
}

GridField local_filtered_grid(const GridField& diff, int p, const Window& w) {
  const int n = diff.size();
  const NodeWindow nw = to_nodes(w, n);
  if (nw.nodes % (1 << p) != 0) {
    throw PreconditionError("J_h: window is not aligned with the 2^p observation lattice");
  }
  const int m = nw.nodes;
  const int s = 1 << p;
  WindowBlock block = make_block(m);
  // only the observed lattice is read; the closing edge lies outside D
  for (int b = 0; b < m; b += s) {
    for (int a = 0; a < m; a += s) block(a, b) = diff.wrapped(nw.i0 + a, nw.j0 + b);
  }
  block = kp_average(std::move(block), p);
  GridField out(n);
  for (int b = 0; b < m; ++b) {
    const int j = out.wrap(nw.j0 + b);
    for (int a = 0; a < m; ++a) out(out.wrap(nw.i0 + a), j) = block(a, b);
  }
  return out;
}

SpectralField apply_local_filtered(const SpectralField& diff, int p, const Window& w) {
  SpectralField out = to_spectral(local_filtered_grid(detail::to_grid_unchecked(diff), p, w));
  dealias(out);
  return out;
}

SpectralField apply_spectral_projection(const SpectralField& diff, int m) {
  const int n = diff.size();
  if (m < 1 || m / 2 - 1 > dealias_limit(n)) {
    throw PreconditionError("spectral projection beyond the dealias limit");
  }
  SpectralField out(n);
  for (int iy = 0; iy < n; ++iy) {
    const int ky = SpectralField::wavenumber(iy, n);
    if (2 * std::abs(ky) >= m) continue;
    for (int ix = 0; ix < n; ++ix) {
      const int kx = SpectralField::wavenumber(ix, n);
      if (2 * std::abs(kx) >= m) continue;
      const std::size_t at = static_cast<std::size_t>(iy) * n + ix;
      out.data()[at] = diff.data()[at];
    }
  }
  out.at(0, 0) = Complex{};
  return out;
}

Window enlarged_window(const Window& w) {
  const double r = w.side / 4.0;
  return Window{w.anchor_x - r, w.anchor_y - r, w.side + 2.0 * r, w.index};
}

GridField volume_element_average(const GridField& diff, double h, const Window& w) {
  const int n = diff.size();
  const NodeWindow nw = to_nodes(w, n);
  const double cell_nodes_f = h / diff.spacing();
  const int c = static_cast<int>(std::lround(cell_nodes_f));
  if (c < 1 || std::abs(cell_nodes_f - c) > 1e-8 || nw.nodes % c != 0) {
    throw PreconditionError("volume elements: h-cells do not tile the window on this grid");
  }
  GridField out(n);
  const int cells = nw.nodes / c;
  for (int cb = 0; cb < cells; ++cb) {
    for (int ca = 0; ca < cells; ++ca) {
      double sum = 0.0;
      for (int b = 0; b < c; ++b) {
        for (int a = 0; a < c; ++a) sum += diff.wrapped(nw.i0 + ca * c + a, nw.j0 + cb * c + b);
      }
      const double avg = sum / (static_cast<double>(c) * c);
      for (int b = 0; b < c; ++b) {
        for (int a = 0; a < c; ++a) out(out.wrap(nw.i0 + ca * c + a), out.wrap(nw.j0 + cb * c + b)) = avg;
      }
    }
  }
  return out;
}

GridField apply_volume_elements(const GridField& diff, double h, const Window& w, bool enlarge) {
  // 2^m h = side/4: the base window splits into a power-of-two count of cells
  const double per_side = w.side / h;
  const long cells = std::lround(per_side);
  if (std::abs(per_side - cells) > 1e-8 || cells < 4 || !is_power_of_two(static_cast<int>(cells))) {
    throw PreconditionError("volume elements: h does not divide the window side dyadically");
  }
  const Window support = enlarge ? enlarged_window(w) : w;
  GridField out = volume_element_average(diff, h, support);
  const NodeWindow nw = to_nodes(support, diff.size());
  // the correction stays on the window: cell averages minus their window mean
  double mean = 0.0;
  for (int b = 0; b < nw.nodes; ++b) {
    for (int a = 0; a < nw.nodes; ++a) mean += out.wrapped(nw.i0 + a, nw.j0 + b);
  }
  mean /= static_cast<double>(nw.nodes) * nw.nodes;
  for (int b = 0; b < nw.nodes; ++b) {
    for (int a = 0; a < nw.nodes; ++a) out(out.wrap(nw.i0 + a), out.wrap(nw.j0 + b)) -= mean;
  }
  return out;
}

}  // namespace mnda
