#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sllg/grid.hpp"

namespace sllg {

/// Binary field snapshot.
///
/// Layout (little-endian): "SLLG", u32 version, u32 dim, u32 points per axis
/// for three axes (unused axes hold 1), f64 time; 32 bytes in total. The
/// header is followed by one f64 triple (Mx, My, Mz) per grid point in
/// row-major order, axis 0 slowest.
struct Snapshot {
  static constexpr std::uint32_t kVersion = 1;
  static constexpr std::size_t kHeaderBytes = 32;

  std::uint32_t dim = 2;
  std::array<std::uint32_t, 3> points{1, 1, 1};
  double time = 0.0;
  std::vector<double> values;  // 3 * point count
};

Snapshot make_snapshot(const MagnetizationField& field, double time);
/// Rebuilds a field on `grid`; throws if the snapshot shape does not match.
MagnetizationField snapshot_field(const Snapshot& snap, const GridPtr& grid);

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
void write_snapshot(const std::filesystem::path& path, const MagnetizationField& field,
                    double time);
Snapshot read_snapshot(const std::filesystem::path& path);

/// One CSV table per component: `<stem>_Mx.csv`, `<stem>_My.csv`, `<stem>_Mz.csv`.
/// In 2D each row is one value of the first index; in 3D rows run over the
/// first two indices.
void write_component_csv(const std::filesystem::path& directory, const std::string& stem,
                         const MagnetizationField& field);

/// Shortest round-trip decimal representation (17 significant digits).
std::string format_double(double v);

}  // namespace sllg
