#include "css_peaks/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "css_peaks/error.hpp"

namespace css {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  is.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!is) throw IoError("snapshot: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(const ScalarField& field, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("snapshot: cannot open " + path.string());
  os.write("CSSF", 4);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(field.n()));
  put<double>(os, field.grid().L);
  for (double v : field.values()) put<double>(os, v);
  if (!os) throw IoError("snapshot: write failed for " + path.string());
}

ScalarField read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("snapshot: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "CSSF", 4) != 0) throw IoError("snapshot: bad magic in " + path.string());
  Grid2D grid;
  grid.n = static_cast<int>(get<std::uint32_t>(is));
  grid.L = get<double>(is);
  grid.validate();
  ScalarField field(grid);
  for (std::size_t k = 0; k < field.size(); ++k) field[k] = get<double>(is);
  return field;
}

void export_csv(const ScalarField& field, const std::filesystem::path& path, int stride) {
  std::ofstream os(path);
  if (!os) throw IoError("csv: cannot open " + path.string());
  os << "x1,x2,value\n" << std::setprecision(17);
  const Grid2D& g = field.grid();
  for (int j = 0; j < g.n; j += stride) {
    for (int i = 0; i < g.n; i += stride) {
      os << g.coord(i) << ',' << g.coord(j) << ',' << field(i, j) << '\n';
    }
  }
}

}  // namespace css
