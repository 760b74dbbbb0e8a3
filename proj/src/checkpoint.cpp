#include "mnda/checkpoint.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace mnda {

namespace {

constexpr std::array<char, 4> kMagic{'M', 'N', 'D', 'A'};

template <typename U>
void put_le(std::ostream& out, U v) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

template <typename U>
U get_le(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) throw FormatError("checkpoint truncated");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(bytes[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

void put_field(std::ostream& out, const SpectralField& f) {
  for (const auto& c : f.data()) {
    put_f64(out, c.real());
    put_f64(out, c.imag());
  }
}

SpectralField get_field(std::istream& in, int n) {
  SpectralField f(n);
  for (auto& c : f.data()) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    c = Complex(re, im);
  }
  return f;
}

}  // namespace

void checkpoint_write(std::ostream& out, const StepperState& s) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.omega.size()));
  put_f64(out, s.time);
  put_f64(out, s.nu);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.history.size()));
  put_field(out, s.omega);
  for (const auto& h : s.history) put_field(out, h);
  if (!out) throw FormatError("checkpoint write failed");
}

void checkpoint_write(const std::filesystem::path& path, const StepperState& s) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  checkpoint_write(out, s);
}

StepperState checkpoint_read(std::istream& in, double dt) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4) throw FormatError("checkpoint truncated");
  if (magic != kMagic) throw FormatError("not a checkpoint (bad magic)");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto n = get_le<std::uint32_t>(in);
  if (n < 4 || n > (1u << 16) || !is_power_of_two(static_cast<int>(n))) {
    throw FormatError("bad checkpoint grid size " + std::to_string(n));
  }
  const double time = get_f64(in);
  const double nu = get_f64(in);
  const auto count = get_le<std::uint32_t>(in);
  if (count > 2) throw FormatError("bad checkpoint history count " + std::to_string(count));
  SpectralField omega = get_field(in, static_cast<int>(n));
  StepperState s = make_state(std::move(omega), time, dt, nu);
  for (std::uint32_t i = 0; i < count; ++i) s.history.push_back(get_field(in, static_cast<int>(n)));
  return s;
}

StepperState checkpoint_read(const std::filesystem::path& path, double dt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  return checkpoint_read(in, dt);
}

}  // namespace mnda
