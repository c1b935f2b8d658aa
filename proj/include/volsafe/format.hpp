#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace volsafe {

/// Shortest round-trip text for a double (17 significant digits);
/// "inf"/"-inf" for infinities.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace volsafe
