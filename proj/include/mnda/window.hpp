// Observation windows on the periodic grid and window quadrature.
#pragma once

#include "mnda/spectral.hpp"

namespace mnda {

/// An observation subdomain: lower-left anchor, side length, and (when it is
/// one of the N×N partition cells) its 1-based index, x fastest.
struct Window {
  double anchor_x = 0.0;
  double anchor_y = 0.0;
  double side = kPi / 2.0;
  int index = 0;

  bool operator==(const Window&) const = default;
};

/// The half-open node block [i0, i0+nodes) × [j0, j0+nodes) covered by a
/// window; indices wrap periodically.
struct NodeWindow {
  int i0 = 0;
  int j0 = 0;
  int nodes = 0;

  bool operator==(const NodeWindow&) const = default;
};

/// Node block of `w` on an n-point grid. Throws if the anchor or side is
/// not on grid nodes.
NodeWindow to_nodes(const Window& w, int n);

/// Partition cell `index` (1-based) of an N×N partition of [0,2π]².
Window partition_window(int index, int partition);

/// Index of the partition cell whose anchor is nearest to (x, y), periodic.
int nearest_partition_index(double x, double y, int partition);

bool contains_node(const NodeWindow& w, int i, int j, int n);

/// ∫_w g² by the composite trapezoid rule on the nodes of w subsampled by
/// `stride`; the closing edge (anchor + side) is weighted ½ and read
/// periodically. Throws if the window is not aligned to the stride lattice.
double local_energy(const GridField& g, const Window& w, int stride);

}  // namespace mnda
