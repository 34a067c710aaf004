#include "qoz/grid_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "qoz/csv.hpp"

static_assert(std::endian::native == std::endian::little,
              "qozgrid writer assumes a little-endian host");

namespace qoz {
namespace {

constexpr char kMagic[8] = {'Q', 'O', 'Z', 'G', 'R', 'I', 'D', '1'};
constexpr std::size_t kHeaderBytes = 64;

void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_i64(std::ostream& os, std::int64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
double get_f64(std::istream& is) {
  double v;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
std::int64_t get_i64(std::istream& is) {
  std::int64_t v;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void write_qozgrid(const std::string& path, const ComplexGrid& grid) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_qozgrid: cannot open " + path);

  os.write(kMagic, sizeof kMagic);
  put_i64(os, grid.rank());
  const char zeros[kHeaderBytes] = {};
  os.write(zeros, kHeaderBytes - 16);

  for (int a = 0; a < grid.rank(); ++a) {
    const Axis& ax = grid.axis(a);
    put_f64(os, ax.origin);
    put_f64(os, ax.spacing);
    put_i64(os, static_cast<std::int64_t>(ax.count));
  }
  for (const Complex& z : grid.data()) {
    put_f64(os, z.real());
    put_f64(os, z.imag());
  }
  if (!os) throw std::runtime_error("write_qozgrid: write failed for " + path);
}

ComplexGrid read_qozgrid(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_qozgrid: cannot open " + path);

  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw std::runtime_error("read_qozgrid: bad magic in " + path);
  const std::int64_t rank = get_i64(is);
  if (rank < 1 || rank > 3) throw std::runtime_error("read_qozgrid: bad rank");
  is.ignore(kHeaderBytes - 16);

  std::vector<Axis> axes;
  std::size_t total = 1;
  for (std::int64_t a = 0; a < rank; ++a) {
    const double origin = get_f64(is);
    const double spacing = get_f64(is);
    const std::int64_t count = get_i64(is);
    if (!is || count <= 0) throw std::runtime_error("read_qozgrid: bad axis record");
    axes.emplace_back(origin, spacing, static_cast<std::size_t>(count));
    total *= static_cast<std::size_t>(count);
  }
  std::vector<Complex> data(total);
  for (std::size_t i = 0; i < total; ++i) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    data[i] = Complex(re, im);
  }
  if (!is) throw std::runtime_error("read_qozgrid: truncated data in " + path);
  return ComplexGrid(std::move(axes), std::move(data));
}

void write_grid_csv(std::ostream& os, const ComplexGrid& grid,
                    const std::vector<std::string>& axis_names) {
  const int rank = grid.rank();
  for (int a = 0; a < rank; ++a) {
    if (a < static_cast<int>(axis_names.size()))
      os << axis_names[static_cast<std::size_t>(a)];
    else
      os << "x" << a;
    os << ',';
  }
  os << "re,im\n";

  std::array<std::size_t, 3> idx{0, 0, 0};
  const std::size_t n = grid.size();
  for (std::size_t flat = 0; flat < n; ++flat) {
    for (int a = 0; a < rank; ++a)
      os << fmt17(grid.axis(a).coord(idx[static_cast<std::size_t>(a)])) << ',';
    const Complex& z = grid.data()[flat];
    os << fmt17(z.real()) << ',' << fmt17(z.imag()) << '\n';
    // advance the multi-index, last axis fastest
    for (int a = rank - 1; a >= 0; --a) {
      auto& i = idx[static_cast<std::size_t>(a)];
      if (++i < grid.axis(a).count) break;
      i = 0;
    }
  }
}

void write_grid_csv(const std::string& path, const ComplexGrid& grid,
                    const std::vector<std::string>& axis_names) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_grid_csv: cannot open " + path);
  write_grid_csv(os, grid, axis_names);
}

}  // namespace qoz
