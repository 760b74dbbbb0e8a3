// Experiment description and its flat `key = value` text form.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "mnda/movement.hpp"
#include "mnda/nudging.hpp"

namespace mnda {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ForcingConfig {
  int annulus_lo = 10;
  int annulus_hi = 12;
  double grashof_trad = 2.5e4;
  std::uint64_t seed = 1;
};

struct AssimilationConfig {
  double mu = 50.0;
  NudgeKind nudge = NudgeKind::local_filtered;
  int p = 1;
  int modes = 32;
  int decision_stride = 0;  // 0: grid / 32
  SchemeSpec scheme;
};

struct RunConfig {
  double t_end = 20.0;
  double spinup_time = 500.0;
  int output_stride = 10;
  std::string checkpoint_path;
};

struct TheoryOverrides {
  double C_L = 1.0;
  double C_I = 1.0;
  double c0 = 2.0;
  double c_star = 0.1;
  double c_psi = 1.0;
};

/// Defaults are the desk-scale profile.
struct SimConfig {
  int grid = 128;
  double nu = 5e-3;
  double dt = 1e-3;
  ForcingConfig forcing;
  AssimilationConfig assimilation;
  RunConfig run;
  TheoryOverrides theory;

  int decision_stride() const;
};

void validate(const SimConfig& cfg);

/// Sets one dotted key; throws ConfigError on unknown keys or bad values.
void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value);

SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

/// Canonical text form (every key, fixed order); parse_config round-trips it.
std::string to_text(const SimConfig& cfg);

/// Canonical text of the fields that determine the spun-up reference state.
std::string spinup_key(const SimConfig& cfg);

const char* to_string(NudgeKind k);
const char* to_string(SchemeKind k);

}  // namespace mnda
