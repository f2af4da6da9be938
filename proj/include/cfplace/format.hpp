#pragma once

#include <cstdio>
#include <string>

namespace cfplace {

// Shortest round-trippable-ish text for tabular output; %.9g keeps CSV files
// stable across runs without dumping 17 digits everywhere.
inline std::string fmt_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::string(buf);
}

inline std::string fmt_g17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace cfplace
