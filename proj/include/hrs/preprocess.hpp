// ONL working mask and illumination equalization: boundary smoothing, band
// mask with erosion, per-column bias field, division, ELM band suppression.

#pragma once

#include "hrs/params.hpp"
#include "hrs/types.hpp"

namespace hrs {

struct CorrectedScan {
    Image image;                        // equalized + ELM-suppressed intensities
    RegionMask onl_mask;                // eroded working mask
    std::vector<double> bias_field;     // per-column, unit mean over valid columns
    LayerBoundaries boundaries_smoothed;
};

// Centered moving average of width window_px (odd); edge columns use the
// truncated window. Invalid columns are skipped while averaging and get
// values interpolated from the nearest valid columns first. Ordering is
// re-checked on the result. Throws if every column is invalid.
LayerBoundaries smooth_boundaries(const LayerBoundaries& b, int window_px);

// Band round(opl) < row < round(isos) per valid column, then
// erosion_iterations passes of 3x3 binary erosion (out-of-frame counts as
// background). May return an empty mask.
RegionMask build_onl_mask(const LayerBoundaries& b, int erosion_iterations, int height, int width);

// Axial mean projection of positive in-mask values per column; empty columns
// take the nearest valid column's value (ties to the left); the profile is
// smoothed with a Gaussian of sigma_px (kernel cut at 4 sigma, renormalized
// at the edges) and scaled to unit mean over the columns that had valid raw
// values. Throws if the mask is empty or all masked values are zero.
std::vector<double> compute_bias_field(const Image& image, const RegionMask& mask, double sigma_px);

// In-mask pixels divided by the per-column field (floored at 1e-6 of its
// mean); everything outside the mask is copied unchanged.
Image equalize(const Image& image, const RegionMask& mask, const std::vector<double>& field);

// Rescales the in-mask band within band_px rows of round(elm[col]) so its
// mean lands 1% below the mean of the rest of the mask; no-op when the band
// mean does not exceed it or either region is empty.
Image suppress_elm(const Image& image, const std::vector<double>& elm, int band_px,
                   const RegionMask& mask);

// Full stage: smooth -> mask -> bias -> equalize -> suppress.
CorrectedScan preprocess(const Image& image, const LayerBoundaries& boundaries, const Params& params);

}  // namespace hrs
