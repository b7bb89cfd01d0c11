// Foreground/background seed labeling for the random walker: in-mask local
// maxima, hit-or-miss pruning of isolated single-pixel maxima, [-1,1]
// rescale, background thresholding.

#pragma once

#include "hrs/params.hpp"
#include "hrs/preprocess.hpp"
#include "hrs/types.hpp"

namespace hrs {

enum class SeedLabel : std::uint8_t {
    OutsideMask = 0,
    Unseeded = 1,
    Foreground = 2,
    Background = 3,
};

struct SeedMap {
    Grid<SeedLabel> labels;
    Image rescaled;  // whole-frame [-1,1] intensities, reused as walker node values
    std::size_t foreground_count = 0;
    std::size_t background_count = 0;
};

// A pixel is a maximum when it is >= every in-mask 8-neighbor and > at least
// one of them; pixels without in-mask neighbors never qualify, so constant
// regions produce none and plateaus produce multi-pixel maxima.
RegionMask find_local_maxima(const Image& image, const RegionMask& mask);

// Removes maxima whose full 8-neighborhood holds no other maximum
// (out-of-frame counts as background).
RegionMask prune_isolated(const RegionMask& maxima);

// 2*(v - min)/(max - min) - 1 over the whole frame. Throws on a constant
// image (degenerate scan).
Image rescale_bipolar(const Image& image);

// Foreground = pruned maxima of the corrected image; background = in-mask
// pixels with rescaled value below params.background_threshold. A maximum
// below the threshold stays foreground.
SeedMap build_seed_map(const CorrectedScan& corrected, const Params& params);

}  // namespace hrs
