#include "sllg/snapshot.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <type_traits>

namespace sllg {

namespace {

template <class T>
void put_le(std::vector<unsigned char>& buf, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(U); ++b) buf.push_back(static_cast<unsigned char>(bits >> (8 * b)));
}

template <class T>
T get_le(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) bits |= static_cast<U>(p[b]) << (8 * b);
  return std::bit_cast<T>(bits);
}

}  // namespace

Snapshot make_snapshot(const MagnetizationField& field, double time) {
  const auto& g = *field.grid();
  Snapshot snap;
  snap.dim = static_cast<std::uint32_t>(g.dim());
  for (int a = 0; a < g.dim(); ++a) snap.points[a] = static_cast<std::uint32_t>(g.points());
  snap.time = time;
  snap.values.resize(3 * g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int c = 0; c < 3; ++c) snap.values[3 * i + c] = field.component(c)[i];
  return snap;
}

MagnetizationField snapshot_field(const Snapshot& snap, const GridPtr& grid) {
  if (snap.dim != static_cast<std::uint32_t>(grid->dim()))
    throw std::invalid_argument("snapshot dimension does not match the grid");
  for (int a = 0; a < 3; ++a) {
    const std::uint32_t expect = a < grid->dim() ? static_cast<std::uint32_t>(grid->points()) : 1u;
    if (snap.points[a] != expect)
      throw std::invalid_argument("snapshot points per axis do not match the grid");
  }
  MagnetizationField field(grid);
  for (std::size_t i = 0; i < grid->size(); ++i)
    for (int c = 0; c < 3; ++c) field.component(c)[i] = snap.values[3 * i + c];
  return field;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  std::vector<unsigned char> buf;
  buf.reserve(Snapshot::kHeaderBytes + 8 * snap.values.size());
  for (char ch : {'S', 'L', 'L', 'G'}) buf.push_back(static_cast<unsigned char>(ch));
  put_le(buf, Snapshot::kVersion);
  put_le(buf, snap.dim);
  for (auto p : snap.points) put_le(buf, p);
  put_le(buf, snap.time);
  for (double v : snap.values) put_le(buf, v);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("failed writing snapshot: " + path.string());
}

void write_snapshot(const std::filesystem::path& path, const MagnetizationField& field,
                    double time) {
  write_snapshot(path, make_snapshot(field, time));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < Snapshot::kHeaderBytes || std::memcmp(buf.data(), "SLLG", 4) != 0)
    throw std::runtime_error("not a snapshot file: " + path.string());
  Snapshot snap;
  const auto version = get_le<std::uint32_t>(buf.data() + 4);
  if (version != Snapshot::kVersion)
    throw std::runtime_error("unsupported snapshot version in " + path.string());
  snap.dim = get_le<std::uint32_t>(buf.data() + 8);
  for (int a = 0; a < 3; ++a) snap.points[a] = get_le<std::uint32_t>(buf.data() + 12 + 4 * a);
  snap.time = get_le<double>(buf.data() + 24);
  std::size_t count = 1;
  for (auto p : snap.points) count *= p;
  if (buf.size() != Snapshot::kHeaderBytes + 24 * count)
    throw std::runtime_error("snapshot payload size mismatch in " + path.string());
  snap.values.resize(3 * count);
  for (std::size_t i = 0; i < snap.values.size(); ++i)
    snap.values[i] = get_le<double>(buf.data() + Snapshot::kHeaderBytes + 8 * i);
  return snap;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_component_csv(const std::filesystem::path& directory, const std::string& stem,
                         const MagnetizationField& field) {
  const auto& g = *field.grid();
  const char* names[3] = {"Mx", "My", "Mz"};
  const std::size_t row = static_cast<std::size_t>(g.points());
  for (int c = 0; c < 3; ++c) {
    const auto path = directory / (stem + "_" + names[c] + ".csv");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    const auto values = field.component(c);
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << format_double(values[i]);
      out << ((i + 1) % row == 0 ? '\n' : ',');
    }
  }
}

}  // namespace sllg
