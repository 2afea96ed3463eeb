#include "kplab/snapshot.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>

#include "kplab/errors.hpp"

namespace kplab::spectral {
namespace {

constexpr std::array<char, 4> kMagic{'K', 'P', 'F', '1'};

template <class UInt>
void put_le(std::ostream& out, UInt v) {
  std::array<char, sizeof(UInt)> bytes{};
  for (std::size_t b = 0; b < sizeof(UInt); ++b) {
    bytes[b] = static_cast<char>((v >> (8 * b)) & 0xFFu);
  }
  out.write(bytes.data(), bytes.size());
}

template <class UInt>
UInt get_le(std::istream& in) {
  std::array<unsigned char, sizeof(UInt)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw IoError("KPF1: truncated stream");
  UInt v = 0;
  for (std::size_t b = 0; b < sizeof(UInt); ++b) {
    v |= static_cast<UInt>(bytes[b]) << (8 * b);
  }
  return v;
}

void put_f64(std::ostream& out, double x) { put_le(out, std::bit_cast<std::uint64_t>(x)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

}  // namespace

void write_snapshot(std::ostream& out, const RealField& u, double t) {
  out.write(kMagic.data(), kMagic.size());
  put_le(out, static_cast<std::uint32_t>(u.grid.nx()));
  put_le(out, static_cast<std::uint32_t>(u.grid.ny()));
  put_f64(out, u.grid.length_x());
  put_f64(out, u.grid.lambda_y());
  put_f64(out, t);
  for (double v : u.values) put_f64(out, v);
  if (!out) throw IoError("KPF1: write failed");
}

Snapshot read_snapshot(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw IoError("KPF1: bad magic bytes");
  const auto nx = get_le<std::uint32_t>(in);
  const auto ny = get_le<std::uint32_t>(in);
  const double length_x = get_f64(in);
  const double lambda_y = get_f64(in);
  const double t = get_f64(in);
  if (nx > (1u << 24) || ny > (1u << 24)) throw IoError("KPF1: implausible grid size");
  Grid grid = [&] {
    try {
      return Grid(static_cast<int>(nx), static_cast<int>(ny), length_x, lambda_y);
    } catch (const ContractError& e) {
      throw IoError(std::string("KPF1: invalid header: ") + e.what());
    }
  }();
  std::vector<double> values(grid.size());
  for (double& v : values) v = get_f64(in);
  try {
    return Snapshot{RealField(grid, std::move(values)), t};
  } catch (const ContractError& e) {
    throw IoError(std::string("KPF1: invalid payload: ") + e.what());
  }
}

void write_snapshot(const std::filesystem::path& path, const RealField& u, double t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_snapshot(out, u, t);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace kplab::spectral
