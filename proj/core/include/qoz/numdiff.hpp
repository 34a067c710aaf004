#pragma once

#include <span>
#include <vector>

#include "qoz/types.hpp"

namespace qoz {

/// Second-order first derivative on a uniform grid: central in the interior,
/// one-sided three-point stencils at the two boundary nodes.
void derivative1(std::span<const Complex> f, double h, std::span<Complex> out);
void derivative1(std::span<const double> f, double h, std::span<double> out);

/// Second-order second derivative, same stencil policy.
void derivative2(std::span<const Complex> f, double h, std::span<Complex> out);
void derivative2(std::span<const double> f, double h, std::span<double> out);

std::vector<Complex> derivative1(const std::vector<Complex>& f, double h);
std::vector<double> derivative1(const std::vector<double>& f, double h);
std::vector<Complex> derivative2(const std::vector<Complex>& f, double h);
std::vector<double> derivative2(const std::vector<double>& f, double h);

}  // namespace qoz
