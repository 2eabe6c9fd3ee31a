#include "eim/csv.hpp"

#include <cstdio>

namespace eim {

std::string fmt_num(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace eim
