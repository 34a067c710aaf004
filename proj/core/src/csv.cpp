#include "qoz/csv.hpp"

#include <cstdio>

namespace qoz {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace qoz
