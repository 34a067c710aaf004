#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qoz/types.hpp"

namespace qoz {

/// Uniform axis: origin + spacing * i for i in [0, count).
struct Axis {
  double origin = 0.0;
  double spacing = 1.0;
  std::size_t count = 0;

  Axis() = default;
  Axis(double origin_, double spacing_, std::size_t count_);

  double coord(std::size_t i) const { return origin + spacing * static_cast<double>(i); }
  double upper() const { return coord(count - 1); }

  /// Symmetric axis [-half_span, +half_span] with an odd node count, so zero
  /// is always a node.
  static Axis symmetric(double half_span, std::size_t count);
  /// [lo, hi] inclusive with `count` nodes.
  static Axis linspace(double lo, double hi, std::size_t count);
};

/// Thrown by interpolation when a query point leaves the grid; `axis` is the
/// first offending axis.
class GridBoundsError : public std::out_of_range {
 public:
  GridBoundsError(int axis_, double value_, const Axis& ax);
  int axis;
  double value;
};

/// Rank 1..3 rectangular grid of complex values, row-major (last axis fastest).
class ComplexGrid {
 public:
  ComplexGrid() = default;
  ComplexGrid(std::vector<Axis> axes, std::vector<Complex> data);
  static ComplexGrid zeros(std::vector<Axis> axes);

  int rank() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t size() const { return data_.size(); }

  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

  std::size_t index(std::span<const std::size_t> idx) const;
  Complex& at(std::span<const std::size_t> idx) { return data_[index(idx)]; }
  const Complex& at(std::span<const std::size_t> idx) const { return data_[index(idx)]; }

  Complex& at1(std::size_t i) { return data_[i]; }
  Complex& at2(std::size_t i, std::size_t j);
  Complex& at3(std::size_t i, std::size_t j, std::size_t k);
  const Complex& at2(std::size_t i, std::size_t j) const;
  const Complex& at3(std::size_t i, std::size_t j, std::size_t k) const;

  /// Multilinear interpolation at a rank-dimensional point.
  Complex interpolate(std::span<const double> point) const;

 private:
  std::vector<Axis> axes_;
  std::vector<Complex> data_;
};

/// Multilinear interpolation of stored complex values;
/// throws GridBoundsError outside the axes.
Complex grid_interpolate(const ComplexGrid& grid, std::span<const double> point);

/// Coordinate of node i, adjusted on negation-symmetric axes so mirrored
/// nodes are exact negatives. Fields built from these coordinates keep
/// their reflection symmetries to the last bit even where values cancel
/// by many orders of magnitude.
double symmetric_coord(const Axis& axis, std::size_t i);

}  // namespace qoz
