#include "mnda/movement.hpp"

#include <array>
#include <cmath>
#include <set>
#include <string>

namespace mnda {

namespace {

constexpr double kTimeEps = 1e-9;

// Serpentine raster, rows bottom to top with alternating direction.
constexpr std::array<std::pair<int, int>, 16> kRaster{{
    {0, 0}, {1, 0}, {2, 0}, {3, 0},
    {3, 1}, {2, 1}, {1, 1}, {0, 1},
    {0, 2}, {1, 2}, {2, 2}, {3, 2},
    {3, 3}, {2, 3}, {1, 3}, {0, 3},
}};

// Bottom row, serpentine over columns 1..3, then down column 0 back to start.
constexpr std::array<std::pair<int, int>, 16> kLoop{{
    {0, 0}, {1, 0}, {2, 0}, {3, 0},
    {3, 1}, {2, 1}, {1, 1}, {1, 2},
    {2, 2}, {3, 2}, {3, 3}, {2, 3},
    {1, 3}, {0, 3}, {0, 2}, {0, 1},
}};

bool is_periodic(SchemeKind k) {
  return k == SchemeKind::discontinuous_periodic || k == SchemeKind::continuous_periodic;
}

// F·t with values within kTimeEps of an integer snapped onto it, so cycle
// boundaries reached through rounding noise start a new cycle.
double cycle_phase(double t, double F) {
  const double phase = F * t;
  const double nearest = std::round(phase);
  return std::abs(phase - nearest) < kTimeEps ? nearest : phase;
}

void decide_window(MovementState& ms, double t, const GridField* diff, const SchemeSpec& spec,
                   SchemeKind kind, double origin, int n, int stride) {
  if (t >= ms.next_decision_time - kTimeEps) {
    const long k = std::max(ms.decisions, static_cast<long>(std::floor((t - origin) / spec.T + kTimeEps)));
    ms.period_start = origin + static_cast<double>(k) * spec.T;
    ms.decisions = k + 1;
    ms.next_decision_time = origin + static_cast<double>(ms.decisions) * spec.T;
    const int cells = spec.partition * spec.partition;
    if (kind == SchemeKind::dominant) {
      if (diff == nullptr) throw PreconditionError("dominant decision requested without coarse data");
      ms.current = choose_dominant(*diff, spec.partition, stride);
    } else {
      ms.current = partition_window(1 + static_cast<int>(ms.rng() % static_cast<std::uint64_t>(cells)),
                                    spec.partition);
    }
  }
  (void)n;
  ms.phase = t < ms.period_start + spec.delay_frac * spec.T - kTimeEps ? Phase::delayed : Phase::nudging;
}

void advance_kind(MovementState& ms, double t, const GridField* diff, const SchemeSpec& spec,
                  SchemeKind kind, double origin, int n, int stride) {
  switch (kind) {
    case SchemeKind::none:
      ms.phase = Phase::spectral;
      ms.current = Window{0.0, 0.0, kTwoPi, 0};
      return;
    case SchemeKind::discontinuous_periodic:
    case SchemeKind::continuous_periodic: {
      const auto [x, y] = periodic_corner(tau_of_t(t, spec.F, kind), kind);
      ms.current = snap_to_window(x, y, spec.partition, n);
      ms.phase = Phase::nudging;
      return;
    }
    case SchemeKind::dominant:
    case SchemeKind::random:
      decide_window(ms, t, diff, spec, kind, origin, n, stride);
      return;
    case SchemeKind::hybrid:
      throw PreconditionError("nested hybrid scheme");
  }
}

}  // namespace

const char* to_string(Phase p) {
  switch (p) {
    case Phase::nudging: return "nudging";
    case Phase::delayed: return "delayed";
    case Phase::spectral: return "spectral";
  }
  return "?";
}

void validate(const SchemeSpec& spec) {
  if (spec.partition < 2) throw PreconditionError("partition must be >= 2");
  if (is_periodic(spec.kind) || (spec.kind == SchemeKind::hybrid && is_periodic(spec.then))) {
    if (!(spec.F > 0.0)) throw PreconditionError("scheme frequency F must be positive");
    if (spec.partition != 4) throw PreconditionError("periodic waypoint paths are defined on a 4x4 partition");
  }
  const bool timed = spec.kind == SchemeKind::dominant || spec.kind == SchemeKind::random ||
                     (spec.kind == SchemeKind::hybrid &&
                      (spec.then == SchemeKind::dominant || spec.then == SchemeKind::random));
  if (timed) {
    if (!(spec.T > 0.0)) throw PreconditionError("nudging period T must be positive");
    if (!(spec.delay_frac >= 0.0 && spec.delay_frac < 1.0)) {
      throw PreconditionError("delay fraction must lie in [0, 1)");
    }
  }
  if (spec.kind == SchemeKind::hybrid) {
    if (spec.then == SchemeKind::hybrid || spec.then == SchemeKind::none) {
      throw PreconditionError("hybrid must switch to a window scheme");
    }
    if (!(spec.switch_time >= 0.0)) throw PreconditionError("hybrid switch time must be >= 0");
  }
}

MovementState initial_movement(const SchemeSpec& spec) {
  validate(spec);
  MovementState ms;
  ms.rng.seed(spec.seed);
  ms.current = partition_window(1, spec.partition);
  ms.phase = spec.kind == SchemeKind::hybrid || spec.kind == SchemeKind::none ? Phase::spectral : Phase::nudging;
  ms.next_decision_time = spec.kind == SchemeKind::hybrid ? spec.switch_time : 0.0;
  return ms;
}

double tau_of_t(double t, double F, SchemeKind kind) {
  if (t < 0.0) throw PreconditionError("tau_of_t: negative time");
  const double phase = cycle_phase(t, F);
  const double frac = phase - std::floor(phase);
  return (kind == SchemeKind::continuous_periodic ? 16.0 : 15.0) * frac;
}

std::span<const std::pair<int, int>> waypoints(SchemeKind kind) {
  if (kind == SchemeKind::continuous_periodic) return kLoop;
  if (kind == SchemeKind::discontinuous_periodic) return kRaster;
  throw PreconditionError("waypoints exist only for periodic schemes");
}

std::pair<double, double> periodic_corner(double tau, SchemeKind kind) {
  const auto wp = waypoints(kind);
  const bool closed = kind == SchemeKind::continuous_periodic;
  const int segments = closed ? 16 : 15;
  if (!(tau >= 0.0 && tau <= segments)) throw PreconditionError("periodic_corner: tau out of range");
  const int k = std::min(static_cast<int>(std::floor(tau)), segments - 1);
  const double frac = tau - k;
  const auto a = wp[static_cast<std::size_t>(k)];
  const auto b = wp[static_cast<std::size_t>((k + 1) % 16)];
  const double side = kPi / 2.0;
  return {side * (a.first + frac * (b.first - a.first)), side * (a.second + frac * (b.second - a.second))};
}

Window snap_to_window(double x, double y, int partition, int n) {
  const double dx = kTwoPi / n;
  auto snap = [&](double v) {
    const long i = std::lround(v / dx);
    return static_cast<double>(((i % n) + n) % n) * dx;
  };
  return Window{snap(x), snap(y), kTwoPi / partition, nearest_partition_index(x, y, partition)};
}

Window choose_dominant(const GridField& diff, int partition, int stride) {
  const int cells = partition * partition;
  int best = 1;
  double best_energy = -1.0;
  for (int j = 1; j <= cells; ++j) {
    const double e = local_energy(diff, partition_window(j, partition), stride);
    if (e > best_energy) {
      best_energy = e;
      best = j;
    }
  }
  return partition_window(best, partition);
}

bool needs_decision_data(const MovementState& ms, double t, const SchemeSpec& spec) {
  SchemeKind kind = spec.kind;
  if (kind == SchemeKind::hybrid) {
    if (t < spec.switch_time - kTimeEps) return false;
    kind = spec.then;
  }
  return kind == SchemeKind::dominant && t >= ms.next_decision_time - kTimeEps;
}

void advance(MovementState& ms, double t, const GridField* diff, const SchemeSpec& spec, int n, int stride) {
  if (spec.kind == SchemeKind::hybrid) {
    if (t < spec.switch_time - kTimeEps) {
      ms.phase = Phase::spectral;
      ms.current = Window{0.0, 0.0, kTwoPi, 0};
      return;
    }
    advance_kind(ms, t, diff, spec, spec.then, spec.switch_time, n, stride);
    return;
  }
  advance_kind(ms, t, diff, spec, spec.kind, 0.0, n, stride);
}

int distinct_windows_per_cycle(const SchemeSpec& spec, double dt, int cycle) {
  if (!is_periodic(spec.kind)) throw PreconditionError("cycle coverage is defined for periodic schemes");
  if (!(dt > 0.0)) throw PreconditionError("dt must be positive");
  std::set<int> seen;
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double phase = cycle_phase(t, spec.F);
    const long c = static_cast<long>(std::floor(phase));
    if (c > cycle) break;
    if (c < cycle) continue;
    const auto [x, y] = periodic_corner(tau_of_t(t, spec.F, spec.kind), spec.kind);
    seen.insert(nearest_partition_index(x, y, spec.partition));
  }
  return static_cast<int>(seen.size());
}

double observations_per_step(int grid, int partition, int p, int stride, double T, double dt) {
  const long window_nodes = grid / partition;
  const long fine_side = window_nodes >> p;
  const long coarse_side = grid / stride;
  const long steps = std::lround(T / dt);
  if (steps < 1) throw PreconditionError("nudging period shorter than one step");
  const long fine = fine_side * fine_side;
  const long coarse = coarse_side * coarse_side;
  return static_cast<double>(fine * steps + coarse) / static_cast<double>(steps);
}

}  // namespace mnda
