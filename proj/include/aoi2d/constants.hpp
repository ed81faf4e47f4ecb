#pragma once

#include <limits>

namespace aoi2d {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace aoi2d
