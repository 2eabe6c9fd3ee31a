#pragma once

#include <string>

namespace eim {

/// Number formatting shared by every CSV writer: 9 significant digits.
std::string fmt_num(double v);

}  // namespace eim
