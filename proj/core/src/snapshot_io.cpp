#include "fbz/snapshot_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "fbz/error.hpp"

namespace fbz {
namespace {

constexpr std::array<char, 4> kMagic{'F', 'B', 'Z', '1'};

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw ValidationError("snapshot: truncated stream");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= U(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_snapshot(std::ostream& out, const DistributionFunction& f, double time) {
  const PhaseGrid& g = f.grid();
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.dx()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.Nx()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.Nv()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.Nomega()));
  put_le<double>(out, g.Lx());
  put_le<double>(out, g.vmax());
  put_le<double>(out, time);
  for (double v : f.values()) put_le<double>(out, v);
}

void write_snapshot(const std::filesystem::path& path, const DistributionFunction& f,
                    double time) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("snapshot: cannot open '" + path.string() + "' for writing");
  write_snapshot(out, f, time);
  if (!out) throw ValidationError("snapshot: write failed for '" + path.string() + "'");
}

Snapshot read_snapshot(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw ValidationError("snapshot: bad magic (expected FBZ1)");
  const auto dx = get_le<std::uint32_t>(in);
  const auto Nx = get_le<std::uint32_t>(in);
  const auto Nv = get_le<std::uint32_t>(in);
  const auto Nomega = get_le<std::uint32_t>(in);
  const double Lx = get_le<double>(in);
  const double vmax = get_le<double>(in);
  const double time = get_le<double>(in);
  if (dx > 2 || Nx > (1u << 16) || Nv > (1u << 12) || Nomega > (1u << 16))
    throw ValidationError("snapshot: implausible header");
  PhaseGrid grid = make_grid(static_cast<int>(dx), Lx, static_cast<int>(Nx), vmax,
                             static_cast<int>(Nv), static_cast<int>(Nomega));
  std::vector<double> values(grid.size());
  for (double& v : values) v = get_le<double>(in);
  Snapshot s{DistributionFunction(std::move(grid), std::move(values)), time};
  s.f.validate();
  return s;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("snapshot: cannot open '" + path.string() + "'");
  return read_snapshot(in);
}

}  // namespace fbz
