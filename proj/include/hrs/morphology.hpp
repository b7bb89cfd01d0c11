#pragma once

#include "hrs/types.hpp"

namespace hrs {

// 3x3 all-ones structuring element; out-of-frame counts as background.
RegionMask erode3x3(const RegionMask& m);
RegionMask dilate3x3(const RegionMask& m);

}  // namespace hrs
