#include "mnda/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mnda/spectral.hpp"

namespace mnda::theory {

namespace {

double pow4(double x) { return x * x * x * x; }

}  // namespace

void validate(const TheoryParams& p) {
  if (!(p.nu > 0.0) || !(p.lambda1 > 0.0) || !(p.C_L > 0.0) || !(p.C_I > 0.0) || !(p.L > 0.0)) {
    throw PreconditionError("theory: nu, lambda1, C_L, C_I and L must be positive");
  }
  if (!(p.G >= 0.0)) throw PreconditionError("theory: Grashof number must be non-negative");
  if (p.N < 2) throw PreconditionError("theory: partition N must be >= 2");
  if (!(p.c0 > 1.0)) throw PreconditionError("theory: c0 must exceed 1");
  if (!(p.c_star > 0.0)) throw PreconditionError("theory: c_star must be positive");
}

Grashof grashof(double f_l2, double nu, double lambda1) {
  if (!(f_l2 >= 0.0) || !(nu > 0.0) || !(lambda1 > 0.0)) throw PreconditionError("grashof: bad inputs");
  const double trad = f_l2 / (nu * nu * lambda1);
  return {2.0 * trad, trad};
}

double gamma(int N, double c0) {
  if (!(c0 > 1.0)) throw PreconditionError("gamma: c0 must exceed 1");
  if (N < 2) throw PreconditionError("gamma: N must be >= 2");
  const double n2 = static_cast<double>(N) * N;
  return 0.5 * ((1.0 - 1.0 / (c0 * n2)) / (1.0 - 1.0 / n2) - 1.0);
}

double growth_factor(const TheoryParams& p) {
  const double cl4 = pow4(p.C_L);
  return (8.0 * p.C_I * p.C_I + 2.0 * cl4 + 2.0 * p.C_I) * std::exp(cl4 * (p.G * p.G + 1.0));
}

double tau_Q(const TheoryParams& p) { return 1.0 / (2.0 * p.mu * growth_factor(p)); }

double mu_K(const TheoryParams& p, double r, double M) {
  const double cl4 = pow4(p.C_L);
  const double e2 = std::exp(cl4 * (p.G * p.G + 2.0));
  const double ci2 = p.C_I * p.C_I;
  const double bracket = p.c_psi * p.nu / (2.0 * r * r) + p.mu * p.C_I +
                         4.0 * p.C_L * p.C_L * std::sqrt(M) * (p.mu / p.nu) * ci2 * e2 +
                         16.0 * p.G * p.mu * ci2 * e2;
  return bracket * std::exp(cl4);
}

double h_bound(const TheoryParams& p, double mu) {
  return std::min(p.nu * std::sqrt(p.lambda1) / (4.0 * p.C_I * mu), std::sqrt(p.nu / (2.0 * p.C_I * p.C_I * mu)));
}

double CyclingBounds::min() const { return std::min({c5, c6, c7}); }

CyclingBounds cycling_bounds(const TheoryParams& p, double r, double M) {
  const double g = gamma(p.N, p.c0);
  const double n2 = static_cast<double>(p.N) * p.N;
  CyclingBounds b;
  b.c5 = tau_Q(p);
  b.c6 = g / mu_K(p, r, M) * (1.0 - 1.0 / n2);
  const double midpoint = (1.0 + g) * (1.0 - 1.0 / n2);
  b.c7 = (1.0 - midpoint / (1.0 - 1.0 / (p.c0 * n2))) / (p.mu * growth_factor(p));
  return b;
}

double default_margin(const TheoryParams& p) { return p.L / p.N / 4.0; }
double default_energy_bound(const TheoryParams& p) { return p.nu * p.nu * p.G * p.G; }

TheoremBounds theorem_bounds(const TheoryParams& p, std::optional<double> r, std::optional<double> M) {
  validate(p);
  const double n2 = static_cast<double>(p.N) * p.N;
  const double forcing_term = 4.0 * p.lambda1 * pow4(p.C_L) * p.nu * p.G * p.G + p.c_star;
  TheoremBounds out;
  const double c4 = p.nu * p.lambda1 * p.G * p.G;
  out.mu_min_stated = std::max(c4, p.c0 * n2 * forcing_term);
  out.mu_min = std::max(out.mu_min_stated, p.c0 * n2 * n2 * forcing_term);
  out.h_max = h_bound(p, out.mu_min);
  TheoryParams at = p;
  at.mu = out.mu_min;
  out.tau_C_max = cycling_bounds(at, r.value_or(default_margin(p)), M.value_or(default_energy_bound(p))).min();
  return out;
}

std::vector<Condition> check_conditions(const TheoryParams& p, std::optional<double> r_opt,
                                        std::optional<double> M_opt) {
  validate(p);
  const double r = r_opt.value_or(default_margin(p));
  const double M = M_opt.value_or(default_energy_bound(p));
  const double n2 = static_cast<double>(p.N) * p.N;
  const double cl4 = pow4(p.C_L);
  const double forcing = 4.0 * cl4 * p.nu * p.lambda1 * p.G * p.G;
  const CyclingBounds cb = cycling_bounds(p, r, M);

  std::vector<Condition> out;
  // theorem_bounds attains some of these with equality; allow a few ulps.
  // (a, b) is a cancellation-free form of lhs <= rhs used for the decision.
  auto add_as = [&](const char* name, double lhs, double rhs, double a, double b) {
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    out.push_back({name, lhs, rhs, a <= b + slack});
  };
  auto add = [&](const char* name, double lhs, double rhs) { add_as(name, lhs, rhs, lhs, rhs); };
  add("C1", p.C_I * p.mu * p.h / std::sqrt(p.lambda1), p.nu / 4.0);
  add("C2", p.C_I * p.C_I * p.mu * p.h * p.h, p.nu / 2.0);
  add("C3", p.tau_C, 1.0 / p.mu);
  add("C4", p.nu * p.lambda1 * p.G * p.G, p.mu);
  add("C5", p.tau_C, cb.c5);
  add("C6", p.tau_C, cb.c6);
  add("C7", p.tau_C, cb.c7);
  add("C8", forcing, p.mu / (p.c0 * n2));
  add_as("C9", forcing - p.mu / (p.c0 * n2 * n2), -p.c_star, forcing + p.c_star, p.mu / (p.c0 * n2 * n2));
  return out;
}

Scenario classify(const DiagnosticsSample& s, double mu, double nu) {
  if (!(s.w_l2sq > 0.0)) return Scenario::synchronized;
  const double q = s.w_h1sq / s.w_l2sq;
  return q <= mu / nu ? Scenario::one : Scenario::two;
}

std::vector<WindowFlags> dominance_report(std::span<const double> energies, double c0) {
  if (energies.empty()) throw PreconditionError("dominance_report: no windows");
  if (!(c0 > 1.0)) throw PreconditionError("dominance_report: c0 must exceed 1");
  double total = 0.0;
  for (double e : energies) {
    if (!(e >= 0.0)) throw PreconditionError("dominance_report: negative energy");
    total += e;
  }
  if (!(total > 0.0)) throw PreconditionError("dominance_report: all energies are zero");
  const double cells = static_cast<double>(energies.size());
  std::vector<WindowFlags> flags(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    // share ≥ 1/N² written without division so equal shares compare exactly
    flags[i].dominant = energies[i] * cells >= total;
    flags[i].active = energies[i] * c0 * cells >= total;
  }
  return flags;
}

double decay_envelope(double t, const TheoryParams& p) {
  if (t < 0.0) throw PreconditionError("decay_envelope: negative time");
  return std::exp(pow4(p.C_L)) * p.nu * p.nu * p.G * p.G * std::exp(-p.c_star * t / 2.0);
}

std::vector<GrowthAuditPoint> energy_growth_audit(std::span<const double> times, std::span<const double> energies,
                                                  const TheoryParams& p) {
  if (times.size() != energies.size()) throw PreconditionError("audit: trace length mismatch");
  std::vector<GrowthAuditPoint> out;
  if (times.empty()) return out;
  const double rate = pow4(p.C_L) * p.nu * p.lambda1 * p.G * p.G;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double bound = energies[0] * std::exp(rate * (times[i] - times[0]));
    out.push_back({times[i], energies[i], bound, energies[i] > bound * (1.0 + 1e-12)});
  }
  return out;
}

}  // namespace mnda::theory
