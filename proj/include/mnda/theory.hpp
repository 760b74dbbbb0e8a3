// Closed-form quantities of the mobile nudging analysis: Grashof numbers,
// γ, τ_Q, parameter bounds, the C1–C9 conditions, Dirichlet-quotient
// scenarios, dominance flags and the decay envelope.
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mnda::theory {

struct TheoryParams {
  double nu = 1e-4;
  double lambda1 = 1.0;
  double G = 0.0;       // Grashof number, 2‖f‖/(ν²λ1) convention
  double C_L = 1.0;     // Ladyzhenskaya constant
  double C_I = 1.0;     // interpolant constant
  int N = 4;            // partition per direction
  double c0 = 2.0;
  double c_star = 0.1;
  double mu = 50.0;
  double h = 0.0;
  double tau_C = 0.0;
  double L = 6.283185307179586;  // domain side
  double c_psi = 1.0;            // cutoff constant in the local energy bound
};

void validate(const TheoryParams& p);

struct Grashof {
  double G = 0.0;       // 2‖f‖/(ν²λ1)
  double G_trad = 0.0;  // ‖f‖/(ν²λ1)
};
Grashof grashof(double f_l2, double nu, double lambda1);

/// γ(N, c0) = ½((1 − (√c0·N)⁻²)/(1 − N⁻²) − 1).
double gamma(int N, double c0);

/// (8C_I² + 2C_L⁴ + 2C_I)·e^{C_L⁴(G²+1)}, shared by τ_Q and C7.
double growth_factor(const TheoryParams& p);

/// τ_Q = 1/(2μ·growth_factor).
double tau_Q(const TheoryParams& p);

/// μK, the bracketed local energy growth constant (uses p.mu).
double mu_K(const TheoryParams& p, double r, double M);

/// Upper bound on h at a given μ: min{νλ1^{1/2}/(4C_Iμ), √(ν/(2C_I²μ))}.
double h_bound(const TheoryParams& p, double mu);

/// τ_C bounds from C5, C6 and C7 at p.mu.
struct CyclingBounds {
  double c5 = 0.0;
  double c6 = 0.0;
  double c7 = 0.0;
  double min() const;
};
CyclingBounds cycling_bounds(const TheoryParams& p, double r, double M);

struct TheoremBounds {
  /// max{νλ1G², c0N²(4λ1C_L⁴νG² + c*)} as displayed in the theorem.
  double mu_min_stated = 0.0;
  /// Smallest μ meeting C4, C8 and C9 together; C9 needs c0N⁴ in place of c0N².
  double mu_min = 0.0;
  double h_max = 0.0;      // h_bound at mu_min
  double tau_C_max = 0.0;  // min of C5–C7 at mu_min
};
/// Ignores p.mu, p.h and p.tau_C. r defaults to ℓ/4 = L/(4N), M to ν²G².
TheoremBounds theorem_bounds(const TheoryParams& p, std::optional<double> r = {}, std::optional<double> M = {});

struct Condition {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// C1..C9 evaluated independently at p (μ, h, τ_C as given).
std::vector<Condition> check_conditions(const TheoryParams& p, std::optional<double> r = {},
                                        std::optional<double> M = {});

double default_margin(const TheoryParams& p);
double default_energy_bound(const TheoryParams& p);

enum class Scenario { synchronized = 0, one = 1, two = 2 };

struct DiagnosticsSample {
  double t = 0.0;
  double w_l2sq = 0.0;
  double w_h1sq = 0.0;
  double Q = 0.0;
  Scenario scenario = Scenario::synchronized;
  std::vector<double> per_window_energy;
  int dominant_index = 0;
};

/// Scenario 1 iff Q ≤ μ/ν; `synchronized` when ‖w‖ = 0.
Scenario classify(const DiagnosticsSample& s, double mu, double nu);

struct WindowFlags {
  bool dominant = false;
  bool active = false;
};
/// Share ≥ 1/N² ⇒ dominant, share ≥ 1/(c0N²) ⇒ active (N² = energies.size()).
std::vector<WindowFlags> dominance_report(std::span<const double> energies, double c0);

/// e^{C_L⁴}·ν²G²·e^{−c*t/2}.
double decay_envelope(double t, const TheoryParams& p);

struct GrowthAuditPoint {
  double t = 0.0;
  double energy = 0.0;
  double bound = 0.0;
  bool violated = false;
};
/// Compares a trace of ‖w(t)‖² against ‖w(t0)‖²·e^{C_L⁴νλ1G²(t−t0)}.
/// Report only: C_L here is a user-supplied proxy.
std::vector<GrowthAuditPoint> energy_growth_audit(std::span<const double> times, std::span<const double> energies,
                                                  const TheoryParams& p);

}  // namespace mnda::theory
