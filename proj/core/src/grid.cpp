#include "qoz/grid.hpp"

#include <cmath>
#include <sstream>

namespace qoz {

Axis::Axis(double origin_, double spacing_, std::size_t count_)
    : origin(origin_), spacing(spacing_), count(count_) {
  if (!(spacing > 0.0)) throw std::invalid_argument("Axis: spacing must be > 0");
  if (count == 0) throw std::invalid_argument("Axis: count must be > 0");
}

Axis Axis::symmetric(double half_span, std::size_t count) {
  if (count % 2 == 0) throw std::invalid_argument("Axis::symmetric: count must be odd");
  if (count == 1) return Axis(0.0, 1.0, 1);
  const double spacing = 2.0 * half_span / static_cast<double>(count - 1);
  return Axis(-half_span, spacing, count);
}

Axis Axis::linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw std::invalid_argument("Axis::linspace: count must be >= 2");
  return Axis(lo, (hi - lo) / static_cast<double>(count - 1), count);
}

namespace {
std::string bounds_message(int axis, double value, const Axis& ax) {
  std::ostringstream os;
  os << "grid interpolation out of bounds on axis " << axis << ": " << value
     << " not in [" << ax.origin << ", " << ax.upper() << "]";
  return os.str();
}
}  // namespace

GridBoundsError::GridBoundsError(int axis_, double value_, const Axis& ax)
    : std::out_of_range(bounds_message(axis_, value_, ax)), axis(axis_), value(value_) {}

ComplexGrid::ComplexGrid(std::vector<Axis> axes, std::vector<Complex> data)
    : axes_(std::move(axes)), data_(std::move(data)) {
  if (axes_.empty() || axes_.size() > 3)
    throw std::invalid_argument("ComplexGrid: rank must be 1..3");
  std::size_t expect = 1;
  for (const Axis& a : axes_) expect *= a.count;
  if (expect != data_.size())
    throw std::invalid_argument("ComplexGrid: data length does not match axis counts");
}

ComplexGrid ComplexGrid::zeros(std::vector<Axis> axes) {
  std::size_t n = 1;
  for (const Axis& a : axes) n *= a.count;
  return ComplexGrid(std::move(axes), std::vector<Complex>(n));
}

std::size_t ComplexGrid::index(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < axes_.size(); ++a) flat = flat * axes_[a].count + idx[a];
  return flat;
}

Complex& ComplexGrid::at2(std::size_t i, std::size_t j) {
  return data_[i * axes_[1].count + j];
}
const Complex& ComplexGrid::at2(std::size_t i, std::size_t j) const {
  return data_[i * axes_[1].count + j];
}
Complex& ComplexGrid::at3(std::size_t i, std::size_t j, std::size_t k) {
  return data_[(i * axes_[1].count + j) * axes_[2].count + k];
}
const Complex& ComplexGrid::at3(std::size_t i, std::size_t j, std::size_t k) const {
  return data_[(i * axes_[1].count + j) * axes_[2].count + k];
}

Complex ComplexGrid::interpolate(std::span<const double> point) const {
  if (point.size() != axes_.size())
    throw std::invalid_argument("interpolate: point rank mismatch");

  std::array<std::size_t, 3> cell{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    const Axis& ax = axes_[a];
    double t = (point[a] - ax.origin) / ax.spacing;
    const double tmax = static_cast<double>(ax.count - 1);
    const double tol = 1e-9;  // admit edge points up to rounding
    if (t < -tol || t > tmax + tol)
      throw GridBoundsError(static_cast<int>(a), point[a], ax);
    if (t < 0.0) t = 0.0;
    if (t > tmax) t = tmax;
    std::size_t i = static_cast<std::size_t>(t);
    if (i >= ax.count - 1 && ax.count > 1) i = ax.count - 2;
    cell[a] = i;
    frac[a] = (ax.count > 1) ? t - static_cast<double>(i) : 0.0;
  }

  const std::size_t rank = axes_.size();
  Complex acc{0.0, 0.0};
  const std::size_t corners = std::size_t{1} << rank;
  for (std::size_t m = 0; m < corners; ++m) {
    double w = 1.0;
    std::array<std::size_t, 3> idx{};
    for (std::size_t a = 0; a < rank; ++a) {
      const bool hi = (m >> a) & 1u;
      if (axes_[a].count == 1) {
        if (hi) { w = 0.0; break; }
        idx[a] = 0;
        continue;
      }
      idx[a] = cell[a] + (hi ? 1 : 0);
      w *= hi ? frac[a] : (1.0 - frac[a]);
    }
    if (w != 0.0) acc += w * at(std::span<const std::size_t>(idx.data(), rank));
  }
  return acc;
}

Complex grid_interpolate(const ComplexGrid& grid, std::span<const double> point) {
  return grid.interpolate(point);
}

double symmetric_coord(const Axis& axis, std::size_t i) {
  const double a = axis.coord(i);
  const double b = axis.coord(axis.count - 1 - i);
  if (std::abs(a + b) < 1e-9 * axis.spacing) return 0.5 * (a - b);
  return a;
}

}  // namespace qoz
