// Window trajectories: which observation window is active at each step, for
// the periodic, dominant, random and hybrid movement schemes.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include "mnda/spectral.hpp"
#include "mnda/window.hpp"

namespace mnda {

enum class SchemeKind { none, discontinuous_periodic, continuous_periodic, dominant, random, hybrid };

/// `none` means global feedback with no window (spectral projection only).
struct SchemeSpec {
  SchemeKind kind = SchemeKind::dominant;
  double F = 1.0;           // periodic: cycles per time unit
  double T = 0.02;          // dominant/random: nudging period
  double delay_frac = 0.0;  // dominant/random: idle fraction at the start of each period
  std::uint64_t seed = 0;   // random
  int partition = 4;
  double switch_time = 0.1;  // hybrid
  int switch_modes = 32;     // hybrid: spectral projection before the switch
  SchemeKind then = SchemeKind::dominant;  // hybrid: scheme after the switch
};

void validate(const SchemeSpec& spec);

enum class Phase { nudging, delayed, spectral };
const char* to_string(Phase p);

struct MovementState {
  Window current;
  Phase phase = Phase::nudging;
  double next_decision_time = 0.0;
  double period_start = 0.0;
  long decisions = 0;
  std::mt19937_64 rng;
};

MovementState initial_movement(const SchemeSpec& spec);

/// 15(Ft − ⌊Ft⌋) for the discontinuous scheme, 16(Ft − ⌊Ft⌋) for the
/// continuous one.
double tau_of_t(double t, double F, SchemeKind kind);

/// Lower-left corner at parameter τ: piecewise-linear through the anchor
/// waypoints of the 4×4 lattice (serpentine raster for the discontinuous
/// scheme, a closed Hamiltonian loop for the continuous one).
std::pair<double, double> periodic_corner(double tau, SchemeKind kind);

/// Waypoint table for one scheme: (ix, iy) lattice coordinates.
std::span<const std::pair<int, int>> waypoints(SchemeKind kind);

/// Window at `corner` rounded to the nearest node of an n-point grid, side
/// 2π/partition; index is the nearest partition cell.
Window snap_to_window(double x, double y, int partition, int n);

/// Argmax over partition cells of the trapezoid energy of `diff`, sampling
/// only nodes on the `stride` lattice. Ties go to the lowest index.
Window choose_dominant(const GridField& diff, int partition, int stride);

/// True when a call to advance() at time t will take a decision that needs
/// the coarse difference field.
bool needs_decision_data(const MovementState& ms, double t, const SchemeSpec& spec);

/// Updates the movement state for time t. `diff` is the nodal difference
/// field; it is consulted (on the coarse lattice only) when a dominant
/// decision is due and may be null otherwise.
void advance(MovementState& ms, double t, const GridField* diff, const SchemeSpec& spec, int n, int stride);

/// Distinct partition windows visited during the first full cycle of a
/// periodic scheme sampled at t = k·dt.
int distinct_windows_per_cycle(const SchemeSpec& spec, double dt, int cycle = 0);

/// Observations per step for the dominant scheme: fine lattice points in the
/// window plus the coarse decision grid amortised over the period.
double observations_per_step(int grid, int partition, int p, int stride, double T, double dt);

}  // namespace mnda
