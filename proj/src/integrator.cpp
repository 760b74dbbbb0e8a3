#include "mnda/integrator.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>

namespace mnda {

StepperState make_state(SpectralField omega, double time, double dt, double nu) {
  if (!(dt > 0.0)) throw PreconditionError("time step must be positive");
  if (!(nu >= 0.0)) throw PreconditionError("viscosity must be non-negative");
  const int n = omega.size();
  StepperState s;
  s.omega = std::move(omega);
  s.time = time;
  s.dt = dt;
  s.nu = nu;
  s.decay.resize(static_cast<std::size_t>(n) * n);
  for (int iy = 0; iy < n; ++iy) {
    const int ky = SpectralField::wavenumber(iy, n);
    for (int ix = 0; ix < n; ++ix) {
      const int kx = SpectralField::wavenumber(ix, n);
      s.decay[static_cast<std::size_t>(iy) * n + ix] = std::exp(-nu * (kx * kx + ky * ky) * dt);
    }
  }
  return s;
}

SpectralField rhs_explicit(const SpectralField& omega, const SpectralField& forcing,
                           const SpectralField* nudge, double mu) {
  SpectralField r = advect(omega, poisson_solve(omega));
  r *= -1.0;
  r += forcing;
  if (nudge != nullptr && mu != 0.0) {
    const auto src = nudge->data();
    auto dst = r.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= mu * src[i];
  }
  dealias(r);
  return r;
}

namespace {

void finish(StepperState& s, SpectralField&& current_rhs) {
  s.history.insert(s.history.begin(), std::move(current_rhs));
  if (s.history.size() > 2) s.history.pop_back();
  s.time += s.dt;
  ++s.steps;
  if (s.steps % kHealthInterval == 0) check_finite(s);
}

}  // namespace

void step(StepperState& s, const ExplicitRhs& rhs) {
  if (s.history.size() < 2) throw PreconditionError("AB3 step needs two history entries");
  SpectralField r0 = rhs(s.omega, s.time);
  const auto r1 = s.history[0].data();
  const auto r2 = s.history[1].data();
  const auto e = std::span<const double>(s.decay);
  auto w = s.omega.data();
  const double dt = s.dt;
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(w.size());
  const auto rn = r0.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const double e1 = e[i];
    const double e2 = e1 * e1;
    const double e3 = e2 * e1;
    w[i] = e1 * w[i] + dt * (23.0 / 12.0 * e1 * rn[i] - 16.0 / 12.0 * e2 * r1[i] + 5.0 / 12.0 * e3 * r2[i]);
  }
  finish(s, std::move(r0));
}

void startup(StepperState& s, const ExplicitRhs& rhs) {
  const auto e = std::span<const double>(s.decay);
  const double dt = s.dt;
  SpectralField r0 = rhs(s.omega, s.time);
  const std::size_t count = s.omega.count();
  if (s.history.empty()) {
    SpectralField predicted = s.omega;
    for (std::size_t i = 0; i < count; ++i) {
      predicted.data()[i] = e[i] * (s.omega.data()[i] + dt * r0.data()[i]);
    }
    const SpectralField rp = rhs(predicted, s.time + dt);
    for (std::size_t i = 0; i < count; ++i) {
      s.omega.data()[i] = e[i] * s.omega.data()[i] + 0.5 * dt * (e[i] * r0.data()[i] + rp.data()[i]);
    }
  } else if (s.history.size() == 1) {
    const auto r1 = s.history[0].data();
    for (std::size_t i = 0; i < count; ++i) {
      s.omega.data()[i] = e[i] * s.omega.data()[i] +
                          dt * (1.5 * e[i] * r0.data()[i] - 0.5 * e[i] * e[i] * r1[i]);
    }
  } else {
    throw PreconditionError("startup called with a full history");
  }
  finish(s, std::move(r0));
}

void advance(StepperState& s, const ExplicitRhs& rhs) {
  if (s.history.size() < 2) {
    startup(s, rhs);
  } else {
    step(s, rhs);
  }
}

void check_finite(const StepperState& s) {
  for (const auto& c : s.omega.data()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      std::ostringstream msg;
      msg << "non-finite vorticity after step " << s.steps << " (t = " << s.time << ")";
      throw NumericalError(msg.str());
    }
  }
}

}  // namespace mnda
