// Instance extraction from the walker mask and the constraint cascade:
// size, intensity against span statistics, relative axial position with the
// high-intensity override, and boundary detachment.

#pragma once

#include "hrs/params.hpp"
#include "hrs/preprocess.hpp"
#include "hrs/types.hpp"

namespace hrs {

enum class FilterId : std::uint8_t { Size = 0, Intensity = 1, Position = 2, Detachment = 3 };

const char* filter_name(FilterId id);

struct FilterOutcome {
    std::vector<FeatureInstance> kept;
    std::vector<std::pair<FeatureInstance, FilterId>> rejected;  // first failed filter
};

// 8-connected components ordered by (row_min, col_min). max_intensity and
// axial_mean_row are filled from `intensity` (pass the corrected image).
std::vector<FeatureInstance> connected_components(const RegionMask& mask, const Image& intensity);

// Bounding-box extents against the pixel minimums.
bool filter_size(const FeatureInstance& inst, int min_axial_px, int min_transverse_px);

// T = mean + k*std (population) over in-mask corrected values in the
// instance's column span, the instance's own pixels included. Returns
// {T, max > T}; an empty span fails with T = +inf.
std::pair<double, bool> intensity_threshold(const FeatureInstance& inst, const Image& corrected,
                                            const RegionMask& onl_mask, double k);

// r = (isos_mean - axial_mean_row) / (isos_mean - opl_mean) over the span,
// using the smoothed boundaries; passes when lo <= r <= hi or when
// max_intensity >= override_factor * T. Degenerate span (isos <= opl) fails
// the band test. Outparams report r, the raw band verdict, and the override.
bool position_filter(const FeatureInstance& inst, const LayerBoundaries& smoothed, double lo,
                     double hi, double override_factor, double T, double* r_out = nullptr,
                     bool* band_out = nullptr, bool* override_out = nullptr);

// Every pixel at least gap_px rows clear of the rounded smoothed boundaries.
bool detachment_filter(const FeatureInstance& inst, const LayerBoundaries& smoothed, int gap_px);

// Cascade in the fixed order size -> intensity -> position -> detachment;
// all verdicts are recorded, the tag is the first failure.
FilterOutcome apply_all(const RegionMask& mask, const CorrectedScan& corrected, const Params& params);

}  // namespace hrs
