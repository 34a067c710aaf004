#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qoz/grid.hpp"

namespace qoz {

/// Binary grid container. Layout, all little-endian:
///   bytes 0..7    magic "QOZGRID1"
///   bytes 8..15   rank as int64
///   bytes 16..63  reserved, zero
///   then rank records of (origin f64, spacing f64, count int64)
///   then count-product nodes of (re f64, im f64), row-major
void write_qozgrid(const std::string& path, const ComplexGrid& grid);
ComplexGrid read_qozgrid(const std::string& path);

/// One row per node: coordinates then re, im. 17 significant digits so a
/// round trip through text is lossless.
void write_grid_csv(std::ostream& os, const ComplexGrid& grid,
                    const std::vector<std::string>& axis_names = {});
void write_grid_csv(const std::string& path, const ComplexGrid& grid,
                    const std::vector<std::string>& axis_names = {});

}  // namespace qoz
