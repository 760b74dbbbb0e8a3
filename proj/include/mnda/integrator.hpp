// Third-order Adams–Bashforth stepping of the vorticity equation with the
// viscous term integrated exactly through the factor E = exp(−ν|k|²dt).
#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "mnda/spectral.hpp"

namespace mnda {

/// Raised when a state stops being finite; carries the step and time.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Explicit part R(ω, t) of dω/dt = −ν(−Δ)ω + R.
using ExplicitRhs = std::function<SpectralField(const SpectralField& omega, double t)>;

struct StepperState {
  SpectralField omega;
  double time = 0.0;
  double dt = 0.0;
  double nu = 0.0;
  /// Previous explicit evaluations, most recent first (at most two).
  std::vector<SpectralField> history;
  long steps = 0;

  /// Per-mode integrating factor, same layout as SpectralField::data().
  std::vector<double> decay;
};

StepperState make_state(SpectralField omega, double time, double dt, double nu);

/// −advect(ω, ψ(ω)) + g − μ·nudge, dealiased and mean-zero. `nudge` may be
/// null (no feedback).
SpectralField rhs_explicit(const SpectralField& omega, const SpectralField& forcing,
                           const SpectralField* nudge, double mu);

/// One AB3 step; requires two history entries.
void step(StepperState& state, const ExplicitRhs& rhs);

/// Bootstrap steps: integrating-factor Heun with an empty history, AB2 with
/// one entry.
void startup(StepperState& state, const ExplicitRhs& rhs);

/// startup() until the history is full, step() afterwards.
void advance(StepperState& state, const ExplicitRhs& rhs);

/// Non-finite check, run automatically every kHealthInterval steps.
void check_finite(const StepperState& state);
inline constexpr long kHealthInterval = 100;

}  // namespace mnda
