#include <doctest.h>

#include <set>

#include "mnda/movement.hpp"
#include "support.hpp"

using namespace mnda;

namespace {

SchemeSpec periodic(SchemeKind kind, double F) {
  SchemeSpec s;
  s.kind = kind;
  s.F = F;
  return s;
}

}  // namespace

TEST_CASE("tau_of_t for both periodic schemes") {
  CHECK(tau_of_t(0.0, 1.0, SchemeKind::discontinuous_periodic) == 0.0);
  CHECK(tau_of_t(0.5, 1.0, SchemeKind::discontinuous_periodic) == doctest::Approx(7.5));
  CHECK(tau_of_t(0.25, 1.0, SchemeKind::continuous_periodic) == doctest::Approx(4.0));
  // whole cycles wrap to zero even through rounding noise
  CHECK(tau_of_t(0.025 * 40, 40.0, SchemeKind::discontinuous_periodic) == 0.0);
  CHECK(tau_of_t(1.0 - 1e-12, 1.0, SchemeKind::discontinuous_periodic) == 0.0);
  CHECK_THROWS_AS(tau_of_t(-1.0, 1.0, SchemeKind::discontinuous_periodic), PreconditionError);
}

TEST_CASE("periodic corners follow the waypoints") {
  const double s = kPi / 2;
  auto c = periodic_corner(0.0, SchemeKind::discontinuous_periodic);
  CHECK(c.first == 0.0);
  CHECK(c.second == 0.0);
  c = periodic_corner(3.0, SchemeKind::discontinuous_periodic);
  CHECK(c.first == doctest::Approx(3 * s));
  c = periodic_corner(3.5, SchemeKind::discontinuous_periodic);
  CHECK(c.first == doctest::Approx(3 * s));
  CHECK(c.second == doctest::Approx(0.5 * s));
  c = periodic_corner(15.0, SchemeKind::discontinuous_periodic);
  CHECK(c.first == doctest::Approx(0.0));
  CHECK(c.second == doctest::Approx(3 * s));
  // the closed loop returns to the origin at tau = 16
  c = periodic_corner(16.0, SchemeKind::continuous_periodic);
  CHECK(c.first == doctest::Approx(0.0));
  CHECK(c.second == doctest::Approx(0.0));
  CHECK_THROWS_AS(periodic_corner(15.5, SchemeKind::discontinuous_periodic), PreconditionError);
}

TEST_CASE("both waypoint paths visit all 16 cells with unit lattice steps") {
  for (auto kind : {SchemeKind::discontinuous_periodic, SchemeKind::continuous_periodic}) {
    const auto wp = waypoints(kind);
    std::set<std::pair<int, int>> cells(wp.begin(), wp.end());
    CHECK(cells.size() == 16);
    const std::size_t links = kind == SchemeKind::continuous_periodic ? 16 : 15;
    for (std::size_t k = 0; k < links; ++k) {
      const auto a = wp[k], b = wp[(k + 1) % 16];
      CHECK(std::abs(a.first - b.first) + std::abs(a.second - b.second) == 1);
    }
  }
}

TEST_CASE("resonance: F=40 misses a window at dt=1e-3 but not at 1e-4") {
  const SchemeSpec s = periodic(SchemeKind::discontinuous_periodic, 40.0);
  CHECK(distinct_windows_per_cycle(s, 1e-3) < 16);
  CHECK(distinct_windows_per_cycle(s, 1e-4) == 16);
  CHECK(distinct_windows_per_cycle(periodic(SchemeKind::discontinuous_periodic, 1.0), 1e-3) == 16);
}

TEST_CASE("snap_to_window lands on grid nodes") {
  const Window w = snap_to_window(0.3, 1.0, 4, 128);
  const double dx = kTwoPi / 128;
  CHECK(std::abs(w.anchor_x / dx - std::round(w.anchor_x / dx)) < 1e-12);
  CHECK(w.side == doctest::Approx(kPi / 2));
  CHECK(w.index == 5);
  CHECK(snap_to_window(kPi / 2 - 0.01, kPi, 4, 128).index == 10);
}

TEST_CASE("dominant picks the energetic window, ties to the lowest index") {
  const int n = 64;
  GridField g(n);
  CHECK(choose_dominant(g, 4, 2).index == 1);
  const NodeWindow w = to_nodes(partition_window(7, 4), n);
  for (int b = 0; b < w.nodes; ++b) {
    for (int a = 0; a < w.nodes; ++a) g(w.i0 + a, w.j0 + b) = 1.0;
  }
  CHECK(choose_dominant(g, 4, 2).index == 7);
}

TEST_CASE("dominant decisions happen only at multiples of T") {
  SchemeSpec s;
  s.kind = SchemeKind::dominant;
  s.T = 0.02;
  const int n = 64;
  MovementState ms = initial_movement(s);
  const GridField zero(n);
  std::vector<double> decided;
  for (int k = 0; k <= 100; ++k) {
    const double t = k * 1e-3;
    const bool need = needs_decision_data(ms, t, s);
    const long before = ms.decisions;
    advance(ms, t, need ? &zero : nullptr, s, n, 2);
    if (ms.decisions != before) decided.push_back(t);
    CHECK(ms.phase == Phase::nudging);
  }
  REQUIRE(decided.size() == 6);
  for (std::size_t i = 0; i < decided.size(); ++i) CHECK(decided[i] == doctest::Approx(0.02 * i));
}

TEST_CASE("delay fraction idles the first part of every period") {
  SchemeSpec s;
  s.kind = SchemeKind::dominant;
  s.T = 0.02;
  s.delay_frac = 0.5;
  const int n = 64;
  MovementState ms = initial_movement(s);
  const GridField zero(n);
  for (int k = 0; k < 60; ++k) {
    const double t = k * 1e-3;
    advance(ms, t, needs_decision_data(ms, t, s) ? &zero : nullptr, s, n, 2);
    const int within = k % 20;
    CHECK(ms.phase == (within < 10 ? Phase::delayed : Phase::nudging));
  }
}

TEST_CASE("random scheme is seeded") {
  auto sequence = [](std::uint64_t seed) {
    SchemeSpec s;
    s.kind = SchemeKind::random;
    s.T = 0.01;
    s.seed = seed;
    MovementState ms = initial_movement(s);
    std::vector<int> seq;
    for (int k = 0; k < 200; ++k) {
      advance(ms, k * 1e-3, nullptr, s, 64, 2);
      if (k % 10 == 0) seq.push_back(ms.current.index);
    }
    return seq;
  };
  CHECK(sequence(3) == sequence(3));
  CHECK(sequence(3) != sequence(4));
  for (int idx : sequence(5)) CHECK((idx >= 1 && idx <= 16));
}

TEST_CASE("hybrid runs spectral nudging before the switch") {
  SchemeSpec s;
  s.kind = SchemeKind::hybrid;
  s.switch_time = 0.1;
  s.then = SchemeKind::random;
  s.T = 0.02;
  MovementState ms = initial_movement(s);
  advance(ms, 0.05, nullptr, s, 64, 2);
  CHECK(ms.phase == Phase::spectral);
  advance(ms, 0.1, nullptr, s, 64, 2);
  CHECK(ms.phase == Phase::nudging);
  CHECK(ms.decisions == 1);
}

TEST_CASE("scheme validation") {
  SchemeSpec s;
  s.kind = SchemeKind::dominant;
  s.T = 0.0;
  CHECK_THROWS_AS(validate(s), PreconditionError);
  s.T = 0.02;
  s.delay_frac = 1.0;
  CHECK_THROWS_AS(validate(s), PreconditionError);
  SchemeSpec h;
  h.kind = SchemeKind::hybrid;
  h.then = SchemeKind::hybrid;
  CHECK_THROWS_AS(validate(h), PreconditionError);
  SchemeSpec p = periodic(SchemeKind::continuous_periodic, -1.0);
  CHECK_THROWS_AS(validate(p), PreconditionError);
}

TEST_CASE("observation budget") {
  CHECK(observations_per_step(512, 4, 1, 16, 0.02, 0.001) == 4147.2);
  CHECK(observations_per_step(128, 4, 1, 4, 0.02, 0.001) == 256.0 + 1024.0 / 20.0);
}
