#pragma once

#include <filesystem>
#include <iosfwd>

#include "kplab/grid.hpp"

namespace kplab::spectral {

/// A field together with its simulation time.
struct Snapshot {
  RealField field;
  double t = 0.0;
};

// "KPF1" binary layout, all little-endian:
//   bytes 'K' 'P' 'F' '1'
//   u32 nx, u32 ny, f64 L_x, f64 lambda_y, f64 t
//   nx * ny f64 values, x index fastest
void write_snapshot(std::ostream& out, const RealField& u, double t);
Snapshot read_snapshot(std::istream& in);

void write_snapshot(const std::filesystem::path& path, const RealField& u, double t);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace kplab::spectral
