// Binary stepper checkpoints.
//
// Layout (little-endian): "MNDA", u32 version, u32 N, f64 time, f64 nu,
// u32 history count, then ω followed by each history field, every field as
// N×N (real, imag) f64 pairs in row-major (k_y, k_x) FFT order.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "mnda/integrator.hpp"

namespace mnda {

inline constexpr std::uint32_t kCheckpointVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void checkpoint_write(std::ostream& out, const StepperState& state);
void checkpoint_write(const std::filesystem::path& path, const StepperState& state);

/// Restores ω, time, ν and history; dt comes from the caller since the
/// format does not carry it.
StepperState checkpoint_read(std::istream& in, double dt);
StepperState checkpoint_read(const std::filesystem::path& path, double dt);

}  // namespace mnda
