#pragma once

#include <cstdio>
#include <string>

namespace ncg {

/// Shortest "%.17g" rendering; round-trips every finite double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace ncg
