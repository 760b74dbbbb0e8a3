#include "mnda/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "mnda/checkpoint.hpp"
#include "mnda/movement.hpp"
#include "mnda/nudging.hpp"

namespace mnda {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// --- forcing ---------------------------------------------------------------

double force_l2_from_curl(const SpectralField& g) {
  const int n = g.size();
  double acc = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const int ky = SpectralField::wavenumber(iy, n);
    for (int ix = 0; ix < n; ++ix) {
      const int kx = SpectralField::wavenumber(ix, n);
      const int k2 = kx * kx + ky * ky;
      if (k2 > 0) acc += std::norm(g.data()[static_cast<std::size_t>(iy) * n + ix]) / k2;
    }
  }
  return std::sqrt(4.0 * kPi * kPi * acc);
}

SpectralField build_forcing(const SimConfig& cfg) {
  const int n = cfg.grid;
  const auto& fc = cfg.forcing;
  if (fc.annulus_lo < 1 || fc.annulus_lo >= fc.annulus_hi) throw ConfigError("empty forcing annulus");
  if (fc.annulus_hi - 1 > dealias_limit(n)) throw ConfigError("forcing annulus outside the dealiased band");
  SpectralField g(n);
  if (fc.grashof_trad == 0.0) return g;

  std::mt19937_64 rng(fc.seed);
  const int lo2 = fc.annulus_lo * fc.annulus_lo;
  const int hi2 = fc.annulus_hi * fc.annulus_hi;
  // upper half-plane only; the conjugate partner is set alongside
  for (int ky = 0; ky < fc.annulus_hi; ++ky) {
    for (int kx = -fc.annulus_hi + 1; kx < fc.annulus_hi; ++kx) {
      if (ky == 0 && kx <= 0) continue;
      const int k2 = kx * kx + ky * ky;
      if (k2 < lo2 || k2 >= hi2) continue;
      const double phase = kTwoPi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
      g.set_pair(kx, ky, std::polar(1.0, phase));
    }
  }
  const double target = fc.grashof_trad * cfg.nu * cfg.nu;  // λ1 = 1
  g *= target / force_l2_from_curl(g);
  return g;
}

// --- spin-up ---------------------------------------------------------------

StepperState spinup(const SimConfig& cfg, const std::optional<std::filesystem::path>& out) {
  validate(cfg);
  const SpectralField forcing = build_forcing(cfg);
  StepperState state = make_state(SpectralField(cfg.grid), 0.0, cfg.dt, cfg.nu);
  const long steps = std::lround(cfg.run.spinup_time / cfg.dt);
  const ExplicitRhs rhs = [&](const SpectralField& w, double) { return rhs_explicit(w, forcing, nullptr, 0.0); };
  StepperState last_good = state;
  try {
    for (long k = 0; k < steps; ++k) {
      advance(state, rhs);
      if (state.steps % kHealthInterval == 0) last_good = state;
    }
    check_finite(state);
  } catch (const NumericalError&) {
    if (out) {
      auto path = *out;
      path += ".lastgood";
      checkpoint_write(path, last_good);
    }
    throw;
  }
  if (out) checkpoint_write(*out, state);
  return state;
}

StepperState spinup_cached(const SimConfig& cfg, const std::filesystem::path& cache_dir) {
  const std::string key = spinup_key(cfg);
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : key) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char name[64];
  std::snprintf(name, sizeof name, "spinup_%016llx.ckpt", static_cast<unsigned long long>(hash));
  std::filesystem::create_directories(cache_dir);
  const auto path = cache_dir / name;
  if (std::filesystem::exists(path)) return checkpoint_read(path, cfg.dt);
  auto tmp = path;
  tmp += ".tmp";
  StepperState s = spinup(cfg, tmp);
  std::filesystem::rename(tmp, path);
  return s;
}

// --- diagnostics -----------------------------------------------------------

double relative_error(const SpectralField& nudged, const SpectralField& reference) {
  const double diff = l2_norm(nudged - reference);
  const double ref = l2_norm(reference);
  return ref > 0.0 ? diff / ref : diff;
}

theory::DiagnosticsSample diagnostics(const SpectralField& diff, double t, int partition, double mu, double nu) {
  theory::DiagnosticsSample s;
  s.t = t;
  const auto [u1, u2] = velocity(poisson_solve(diff));
  s.w_l2sq = grid_l2_squared(u1) + grid_l2_squared(u2);
  const double vort = l2_norm(diff);
  s.w_h1sq = vort * vort;
  s.Q = s.w_l2sq > 0.0 ? s.w_h1sq / s.w_l2sq : 0.0;
  s.scenario = theory::classify(s, mu, nu);
  double best = -1.0;
  for (int j = 1; j <= partition * partition; ++j) {
    const Window w = partition_window(j, partition);
    const double e = local_energy(u1, w, 1) + local_energy(u2, w, 1);
    s.per_window_energy.push_back(e);
    if (e > best) {
      best = e;
      s.dominant_index = j;
    }
  }
  return s;
}

double time_to(const std::vector<ErrorRecord>& records, double tol) {
  for (const auto& r : records) {
    if (r.rel_l2_error < tol) return r.t;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// --- twin run --------------------------------------------------------------

namespace {

ErrorRecord make_record(double t, const SpectralField& nudged, const SpectralField& reference,
                        const SpectralField& diff, const GridField& diff_grid, const MovementState& ms,
                        double mu, double nu) {
  ErrorRecord r;
  r.t = t;
  r.rel_l2_error = relative_error(nudged, reference);
  r.phase = ms.phase;
  if (ms.phase != Phase::spectral) {
    r.window_index = ms.current.index;
    r.anchor_x = ms.current.anchor_x;
    r.anchor_y = ms.current.anchor_y;
    const double total = grid_l2_squared(diff_grid);
    r.local_ratio = total > 0.0 ? local_energy(diff_grid, ms.current, 1) / total : 0.0;
  } else {
    r.local_ratio = 1.0;
  }
  if (l2_norm(diff) > 0.0) {
    r.dirichlet_q = velocity_dirichlet_quotient(diff);
    r.scenario = r.dirichlet_q <= mu / nu ? 1 : 2;
  }
  return r;
}

}  // namespace

TwinResult run_twin(const SimConfig& cfg, StepperState reference, const TwinOptions& options) {
  validate(cfg);
  const int n = cfg.grid;
  if (reference.omega.size() != n) throw ConfigError("checkpoint grid does not match the config");
  if (std::abs(reference.nu - cfg.nu) > 1e-12 * cfg.nu) throw ConfigError("checkpoint viscosity does not match the config");
  // both twins bootstrap the multistep sequence the same way, so equal
  // initial data and μ = 0 give identical trajectories
  reference = make_state(std::move(reference.omega), reference.time, cfg.dt, cfg.nu);
  const SpectralField forcing = build_forcing(cfg);
  const auto& as = cfg.assimilation;
  const SchemeSpec& scheme = as.scheme;
  const int stride = cfg.decision_stride();

  SpectralField initial = options.nudged_initial.value_or(SpectralField(n));
  if (initial.size() != n) throw ConfigError("nudged initial state has the wrong grid size");
  StepperState nudged = make_state(std::move(initial), reference.time, cfg.dt, cfg.nu);
  MovementState ms = initial_movement(scheme);

  const ExplicitRhs reference_rhs = [&](const SpectralField& w, double) {
    return rhs_explicit(w, forcing, nullptr, 0.0);
  };

  auto feedback = [&](const SpectralField& diff) -> std::optional<SpectralField> {
    if (as.mu == 0.0) return std::nullopt;
    switch (ms.phase) {
      case Phase::delayed:
        return std::nullopt;
      case Phase::spectral:
        return apply_spectral_projection(diff, scheme.kind == SchemeKind::hybrid ? scheme.switch_modes : as.modes);
      case Phase::nudging:
        if (as.nudge == NudgeKind::none) return std::nullopt;
        return apply_local_filtered(diff, as.p, ms.current);
    }
    return std::nullopt;
  };

  TwinResult result;
  const long steps = std::lround(cfg.run.t_end / cfg.dt);
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const SpectralField diff = nudged.omega - reference.omega;
    std::optional<GridField> diff_grid;
    if (needs_decision_data(ms, t, scheme)) diff_grid = detail::to_grid_unchecked(diff);
    advance(ms, t, diff_grid ? &*diff_grid : nullptr, scheme, n, stride);

    if (k % cfg.run.output_stride == 0 || k == steps) {
      if (!diff_grid) diff_grid = detail::to_grid_unchecked(diff);
      ErrorRecord rec = make_record(t, nudged.omega, reference.omega, diff, *diff_grid, ms, as.mu, cfg.nu);
      if (options.on_record) options.on_record(rec);
      result.records.push_back(rec);
      if (options.stop_below && rec.rel_l2_error < *options.stop_below) break;
    }
    if (k == steps) break;

    const std::optional<SpectralField> nudge_now = feedback(diff);
    const double t_now = nudged.time;
    advance(reference, reference_rhs);

    const ExplicitRhs nudged_rhs = [&](const SpectralField& w, double s) {
      if (std::abs(s - t_now) < 0.5 * cfg.dt) {
        return rhs_explicit(w, forcing, nudge_now ? &*nudge_now : nullptr, as.mu);
      }
      // startup stage at t + dt: compare against the already-advanced reference
      const auto later = feedback(w - reference.omega);
      return rhs_explicit(w, forcing, later ? &*later : nullptr, as.mu);
    };
    advance(nudged, nudged_rhs);
  }
  result.reference = std::move(reference);
  result.nudged = std::move(nudged);
  if (!cfg.run.checkpoint_path.empty()) {
    checkpoint_write(cfg.run.checkpoint_path + ".ref", result.reference);
    checkpoint_write(cfg.run.checkpoint_path + ".nudged", result.nudged);
  }
  return result;
}

// --- output ----------------------------------------------------------------

void write_csv_header(std::ostream& out) {
  out << "t,rel_l2_error,window_index,anchor_x,anchor_y,phase,local_ratio,dirichlet_q,scenario\n";
}

void write_csv_row(std::ostream& out, const ErrorRecord& r) {
  out << format_double(r.t) << ',' << format_double(r.rel_l2_error) << ',' << r.window_index << ','
      << format_double(r.anchor_x) << ',' << format_double(r.anchor_y) << ',' << to_string(r.phase) << ','
      << format_double(r.local_ratio) << ',' << format_double(r.dirichlet_q) << ',' << r.scenario << '\n';
}

void write_csv(std::ostream& out, const std::vector<ErrorRecord>& records) {
  write_csv_header(out);
  for (const auto& r : records) write_csv_row(out, r);
}

void write_grid_csv(std::ostream& out, const SpectralField& omega) {
  const GridField g = to_grid(omega);
  const double dx = g.spacing();
  out << "i,j,x,y,omega\n";
  for (int j = 0; j < g.size(); ++j) {
    for (int i = 0; i < g.size(); ++i) {
      out << i << ',' << j << ',' << format_double(i * dx) << ',' << format_double(j * dx) << ','
          << format_double(g(i, j)) << '\n';
    }
  }
}

// --- sweeps ----------------------------------------------------------------

std::vector<SweepRow> sweep(const SimConfig& base, const std::string& axis, const std::vector<std::string>& values,
                            const std::filesystem::path& out_dir, double tol) {
  std::filesystem::create_directories(out_dir);
  const std::size_t count = values.size();
  std::vector<SweepRow> rows(count);
  std::vector<std::optional<SimConfig>> configs(count);
  for (std::size_t i = 0; i < count; ++i) {
    rows[i].value = values[i];
    try {
      SimConfig cfg = base;
      apply_setting(cfg, axis, values[i]);
      validate(cfg);
      configs[i] = cfg;
    } catch (const std::exception& e) {
      rows[i].status = std::string("error: ") + e.what();
    }
  }

  // one spin-up per distinct reference, shared by every run that needs it
  std::map<std::string, SimConfig> unique;
  for (const auto& c : configs) {
    if (c) unique.emplace(spinup_key(*c), *c);
  }
  std::vector<SimConfig> spinups;
  for (const auto& [key, cfg] : unique) spinups.push_back(cfg);
  const auto cache = out_dir / "spinup";
  std::vector<std::string> spinup_errors(spinups.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < spinups.size(); ++i) {
    try {
      spinup_cached(spinups[i], cache);
    } catch (const std::exception& e) {
      spinup_errors[i] = e.what();
    }
  }

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < count; ++i) {
    if (!configs[i]) continue;
    const SimConfig& cfg = *configs[i];
    try {
      StepperState ref = spinup_cached(cfg, cache);
      TwinResult res = run_twin(cfg, std::move(ref));
      std::ofstream csv(out_dir / ("run_" + std::to_string(i) + ".csv"));
      write_csv(csv, res.records);
      rows[i].time_to_tol = time_to(res.records, tol);
      rows[i].final_error = res.records.back().rel_l2_error;
      const auto kind = cfg.assimilation.scheme.kind;
      if (kind == SchemeKind::discontinuous_periodic || kind == SchemeKind::continuous_periodic) {
        rows[i].distinct_windows = distinct_windows_per_cycle(cfg.assimilation.scheme, cfg.dt);
      }
    } catch (const std::exception& e) {
      rows[i].status = std::string("error: ") + e.what();
    }
  }

  std::ofstream summary(out_dir / "summary.csv");
  write_summary(summary, axis, rows);
  return rows;
}

void write_summary(std::ostream& out, const std::string& axis, const std::vector<SweepRow>& rows) {
  out << axis << ",time_to_1e-6,final_error,distinct_windows_per_cycle,status\n";
  for (const auto& r : rows) {
    out << r.value << ',' << format_double(r.time_to_tol) << ',' << format_double(r.final_error) << ','
        << (r.distinct_windows >= 0 ? std::to_string(r.distinct_windows) : std::string("NA")) << ','
        << '"' << r.status << '"' << '\n';
  }
}

// --- theory report ---------------------------------------------------------

theory::TheoryParams theory_params(const SimConfig& cfg) {
  theory::TheoryParams p;
  p.nu = cfg.nu;
  p.lambda1 = 1.0;
  p.G = 2.0 * cfg.forcing.grashof_trad;
  p.C_L = cfg.theory.C_L;
  p.C_I = cfg.theory.C_I;
  p.c0 = cfg.theory.c0;
  p.c_star = cfg.theory.c_star;
  p.c_psi = cfg.theory.c_psi;
  const auto& s = cfg.assimilation.scheme;
  p.N = s.partition;
  p.mu = cfg.assimilation.mu;
  p.L = kTwoPi;
  if (cfg.assimilation.nudge == NudgeKind::spectral_projection && s.kind == SchemeKind::none) {
    p.h = kTwoPi / cfg.assimilation.modes;
  } else {
    p.h = static_cast<double>(1 << cfg.assimilation.p) * kTwoPi / cfg.grid;
  }
  SchemeKind kind = s.kind == SchemeKind::hybrid ? s.then : s.kind;
  switch (kind) {
    case SchemeKind::discontinuous_periodic:
    case SchemeKind::continuous_periodic:
      p.tau_C = 1.0 / s.F;
      break;
    case SchemeKind::dominant:
    case SchemeKind::random:
      p.tau_C = static_cast<double>(p.N) * p.N * s.T;
      break;
    default:
      p.tau_C = 0.0;
  }
  return p;
}

std::vector<std::pair<std::string, std::string>> theory_report(const SimConfig& cfg) {
  validate(cfg);
  const theory::TheoryParams p = theory_params(cfg);
  std::vector<std::pair<std::string, std::string>> out;
  auto put = [&](std::string key, double v) { out.emplace_back(std::move(key), format_double(v)); };
  const double f_l2 = cfg.forcing.grashof_trad * cfg.nu * cfg.nu;
  const auto gr = theory::grashof(f_l2, cfg.nu, 1.0);
  put("nu", p.nu);
  put("lambda1", p.lambda1);
  put("force_l2", f_l2);
  put("grashof_trad", gr.G_trad);
  put("grashof", gr.G);
  put("N", p.N);
  put("c0", p.c0);
  put("c_star", p.c_star);
  put("C_L", p.C_L);
  put("C_I", p.C_I);
  put("c_psi", p.c_psi);
  put("mu", p.mu);
  put("h", p.h);
  put("tau_C", p.tau_C);
  put("gamma", theory::gamma(p.N, p.c0));
  put("tau_Q", theory::tau_Q(p));
  const double r = theory::default_margin(p);
  const double M = theory::default_energy_bound(p);
  put("r", r);
  put("M", M);
  const auto cb = theory::cycling_bounds(p, r, M);
  put("tau_C_bound_C5", cb.c5);
  put("tau_C_bound_C6", cb.c6);
  put("tau_C_bound_C7", cb.c7);
  const auto tb = theory::theorem_bounds(p);
  put("mu_min_stated", tb.mu_min_stated);
  put("mu_min", tb.mu_min);
  put("h_max", tb.h_max);
  put("tau_C_max", tb.tau_C_max);
  for (const auto& c : theory::check_conditions(p)) {
    out.emplace_back(c.name, c.holds ? "true" : "false");
    put(c.name + ".lhs", c.lhs);
    put(c.name + ".rhs", c.rhs);
  }
  put("decay_envelope_t0", theory::decay_envelope(0.0, p));
  const auto& s = cfg.assimilation.scheme;
  const SchemeKind kind = s.kind == SchemeKind::hybrid ? s.then : s.kind;
  if (kind == SchemeKind::dominant && cfg.assimilation.nudge == NudgeKind::local_filtered) {
    put("observations_per_step",
        observations_per_step(cfg.grid, s.partition, cfg.assimilation.p, cfg.decision_stride(), s.T, cfg.dt));
  }
  return out;
}

}  // namespace mnda
