// Serial reference implementations of the kernels in kernels.hpp. Kept for
// testing and benchmarking; not used on the solver path.
#pragma once

#include <span>

#include "mnda/spectral.hpp"
#include "mnda/window.hpp"

namespace mnda::reference {

void advective_product(std::span<const double> ux, std::span<const double> uy,
                       std::span<const double> wx, std::span<const double> wy,
                       std::span<double> out);

void dealias_in_place(SpectralField& f);

/// Cell-by-cell recursion: fill one coarse cell, then recurse into its four
/// children.
void kp_fill(std::span<double> block, int m, int p);

double window_trapezoid(const GridField& g, const NodeWindow& w, int stride);

}  // namespace mnda::reference
