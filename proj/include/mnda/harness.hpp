// Experiment orchestration: forcing, spin-up, the reference/nudged twin run,
// CSV output, parameter sweeps and the theory report.
#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mnda/config.hpp"
#include "mnda/integrator.hpp"
#include "mnda/theory.hpp"

namespace mnda {

/// Curl of the body force: unit-magnitude, seeded random phases on
/// lo ≤ |k| < hi, scaled so ‖f‖ = grashof_trad·ν²λ1 with |f̂| = |ĝ|/|k|.
SpectralField build_forcing(const SimConfig& cfg);

/// ‖f‖ recovered from its curl g.
double force_l2_from_curl(const SpectralField& g);

/// Evolves the reference from ω = 0 for run.spinup_time. When `out` is set
/// the final state is written there; on blow-up the last finite state is
/// written to `<out>.lastgood` before the NumericalError propagates.
StepperState spinup(const SimConfig& cfg, const std::optional<std::filesystem::path>& out = {});

/// Spin-up reused through a checkpoint file in `cache_dir`, keyed by the
/// fields that determine the reference state.
StepperState spinup_cached(const SimConfig& cfg, const std::filesystem::path& cache_dir);

struct ErrorRecord {
  double t = 0.0;
  double rel_l2_error = 0.0;
  int window_index = 0;
  double anchor_x = 0.0;
  double anchor_y = 0.0;
  Phase phase = Phase::nudging;
  double local_ratio = 0.0;
  double dirichlet_q = 0.0;
  int scenario = 0;  // 1, 2, or 0 once synchronized
};

struct TwinOptions {
  /// Nudged twin initial vorticity; zero when absent.
  std::optional<SpectralField> nudged_initial;
  /// Called for every emitted record.
  std::function<void(const ErrorRecord&)> on_record;
  /// Stop after the first record whose error is below this value.
  std::optional<double> stop_below;
};

struct TwinResult {
  std::vector<ErrorRecord> records;
  StepperState reference;
  StepperState nudged;
};

/// Co-evolves reference and nudged twin for run.t_end time units starting
/// from `reference`; records every run.output_stride steps and at the end.
TwinResult run_twin(const SimConfig& cfg, StepperState reference, const TwinOptions& options = {});

/// Relative L² vorticity error ‖ω̃ − ω‖/‖ω‖ (absolute when ‖ω‖ = 0).
double relative_error(const SpectralField& nudged, const SpectralField& reference);

/// Velocity-difference diagnostics at one instant: energies, Q, scenario,
/// per-partition-window energies (fine-grid trapezoid) and dominant index.
theory::DiagnosticsSample diagnostics(const SpectralField& diff_vorticity, double t, int partition,
                                      double mu, double nu);

/// First record time with rel_l2_error < tol; NaN if never reached.
double time_to(const std::vector<ErrorRecord>& records, double tol);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ErrorRecord& r);
void write_csv(std::ostream& out, const std::vector<ErrorRecord>& records);

/// Nodal dump: i,j,x,y,omega.
void write_grid_csv(std::ostream& out, const SpectralField& omega);

struct SweepRow {
  std::string value;
  double time_to_tol = std::numeric_limits<double>::quiet_NaN();
  double final_error = std::numeric_limits<double>::quiet_NaN();
  int distinct_windows = -1;  // periodic schemes only
  std::string status = "ok";
};

/// One run per axis value (parallel across runs), per-run CSV
/// `run_<i>.csv` plus `summary.csv` in out_dir. Failures are recorded and
/// the sweep continues.
std::vector<SweepRow> sweep(const SimConfig& base, const std::string& axis, const std::vector<std::string>& values,
                            const std::filesystem::path& out_dir, double tol = 1e-6);

void write_summary(std::ostream& out, const std::string& axis, const std::vector<SweepRow>& rows);

/// Theory parameters implied by a run config.
theory::TheoryParams theory_params(const SimConfig& cfg);

/// Ordered key=value lines for the `bounds` report.
std::vector<std::pair<std::string, std::string>> theory_report(const SimConfig& cfg);

std::string format_double(double v);

}  // namespace mnda
