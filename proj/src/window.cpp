#include "mnda/window.hpp"

#include <cmath>
#include <string>

#include "mnda/kernels.hpp"

namespace mnda {

namespace {

int on_node(double value, double dx, const char* what) {
  const double nodes = value / dx;
  const double rounded = std::round(nodes);
  if (std::abs(nodes - rounded) > 1e-8) {
    throw PreconditionError(std::string("window ") + what + " is not on a grid node");
  }
  return static_cast<int>(rounded);
}

}  // namespace

NodeWindow to_nodes(const Window& w, int n) {
  const double dx = kTwoPi / n;
  NodeWindow out;
  out.nodes = on_node(w.side, dx, "side");
  if (out.nodes <= 0 || out.nodes > n) throw PreconditionError("window side out of range");
  out.i0 = ((on_node(w.anchor_x, dx, "anchor") % n) + n) % n;
  out.j0 = ((on_node(w.anchor_y, dx, "anchor") % n) + n) % n;
  return out;
}

Window partition_window(int index, int partition) {
  if (partition < 1 || index < 1 || index > partition * partition) {
    throw PreconditionError("partition index out of range");
  }
  const double side = kTwoPi / partition;
  const int ix = (index - 1) % partition;
  const int iy = (index - 1) / partition;
  return Window{ix * side, iy * side, side, index};
}

int nearest_partition_index(double x, double y, int partition) {
  const double side = kTwoPi / partition;
  auto cell = [&](double v) {
    const long r = std::lround(v / side);
    return static_cast<int>(((r % partition) + partition) % partition);
  };
  return 1 + cell(x) + partition * cell(y);
}

bool contains_node(const NodeWindow& w, int i, int j, int n) {
  const int di = ((i - w.i0) % n + n) % n;
  const int dj = ((j - w.j0) % n + n) % n;
  return di < w.nodes && dj < w.nodes;
}

double local_energy(const GridField& g, const Window& w, int stride) {
  const NodeWindow nw = to_nodes(w, g.size());
  if (stride < 1 || nw.nodes % stride != 0 || nw.i0 % stride != 0 || nw.j0 % stride != 0) {
    throw PreconditionError("local_energy: window not aligned to the stride lattice");
  }
  return kernels::window_trapezoid(g, nw, stride);
}

}  // namespace mnda
