#pragma once

#include <string>

namespace qoz {

/// Shortest decimal rendering with 17 significant digits; round trips every
/// finite double exactly.
std::string fmt17(double v);

}  // namespace qoz
