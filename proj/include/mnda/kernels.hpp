// OpenMP kernels for the data-parallel inner loops. Each has a serial
// counterpart in mnda::reference with identical results.
#pragma once

#include <span>

#include "mnda/spectral.hpp"
#include "mnda/window.hpp"

namespace mnda::kernels {

/// out = ux·wx + uy·wy, pointwise.
void advective_product(std::span<const double> ux, std::span<const double> uy,
                       std::span<const double> wx, std::span<const double> wy,
                       std::span<double> out);

/// Zeroes every coefficient outside the 2/3 band, plus the mean.
void dealias_in_place(SpectralField& f);

/// Recursive midpoint fill of a square (m+1)×(m+1) block, row-major, using
/// the values at multiples of 2^p as anchors. m must be divisible by 2^p.
void kp_fill(std::span<double> block, int m, int p);

/// Trapezoid quadrature of g² over a window block, sampled every `stride`
/// nodes, closing edge weighted ½.
double window_trapezoid(const GridField& g, const NodeWindow& w, int stride);

}  // namespace mnda::kernels
