// Feedback operators for the nudged twin: the recursively averaged local
// operator J_h = FFT ∘ K_p ∘ χ_D ∘ FFT⁻¹, the global Fourier projection, and
// the volume-element interpolant used for analysis-side property checks.
#pragma once

#include <vector>

#include "mnda/spectral.hpp"
#include "mnda/window.hpp"

namespace mnda {

enum class NudgeKind { none, local_filtered, spectral_projection, volume_elements };

struct NudgeSpec {
  double mu = 50.0;
  NudgeKind kind = NudgeKind::local_filtered;
  int p = 1;        // local_filtered: anchors every 2^p nodes
  int modes = 32;   // spectral_projection: keep |k_x|, |k_y| < modes/2
  double h = 0.0;   // volume_elements: cell side
};

/// Closed (m+1)×(m+1) node block of a window, row-major; the last row and
/// column are the closing edge at anchor + side.
struct WindowBlock {
  int m = 0;
  std::vector<double> values;

  double& operator()(int i, int j) { return values[static_cast<std::size_t>(j) * (m + 1) + i]; }
  double operator()(int i, int j) const { return values[static_cast<std::size_t>(j) * (m + 1) + i]; }
};

WindowBlock make_block(int m);

/// K_p: keeps the values at multiples of 2^p and refills every other node by
/// recursive edge-midpoint / cell-centre averaging.
WindowBlock kp_average(WindowBlock block, int p);

/// Grid stage of J_h: χ_D, then K_p over the window block with the closing
/// edge read from the masked field (zero), written back on the half-open
/// window only. Everything outside the window is exactly zero.
GridField local_filtered_grid(const GridField& diff, int p, const Window& w);

/// J_h(diff) in Fourier space, dealiased and mean-zero.
SpectralField apply_local_filtered(const SpectralField& diff, int p, const Window& w);

/// Keeps modes with |k_x| < m/2 and |k_y| < m/2.
SpectralField apply_spectral_projection(const SpectralField& diff, int m);

/// Window grown by side/4 on every edge.
Window enlarged_window(const Window& w);

/// Local part of the volume-element interpolant: each h-cell of w holds the
/// nodal average of diff over that cell; zero outside w. The cells must
/// tile w.
GridField volume_element_average(const GridField& diff, double h, const Window& w);

/// volume_element_average minus its mean over the window; mean-zero and
/// still supported on the window. Requires 2^m·h = side/4.
GridField apply_volume_elements(const GridField& diff, double h, const Window& w, bool enlarge = false);

}  // namespace mnda
