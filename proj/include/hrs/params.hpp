// Detection parameters, pixel-valued, plus the physical-units form and the
// spacing-based conversion between them.

#pragma once

#include "hrs/types.hpp"

namespace hrs {

struct Params {
    double bias_sigma_px = 30.0;       // Gaussian sigma of the bias-field smoother
    int elm_band_px = 5;               // half-height of the ELM suppression band
    double background_threshold = -0.9;  // on the [-1,1] rescaled image
    double rw_beta = 90.0;             // edge-weight sharpness on [-1,1] intensities
    double rw_tolerance = 1e-8;        // CG relative-residual stop
    long rw_max_iter = 0;              // 0 = auto (10 * unseeded node count)
    int min_axial_px = 4;
    int min_transverse_px = 3;
    double intensity_k = 2.0;          // T = mean + k * std over the span
    double position_lo = 0.25;
    double position_hi = 0.8;
    double override_factor = 2.0;      // position override at max >= factor * T
    int boundary_smooth_window_px = 15;
    int erosion_iterations = 1;
    int detachment_gap_px = 2;         // clear rows required to each boundary
    double staple_threshold = 2.0 / 3.0;

    void validate() const;  // throws ValidationError
};

// Lengths in micrometers; everything dimensionless is carried in `base` and
// copied through unchanged by scale_params.
struct PhysicalParams {
    double bias_sigma_um = 150.0;
    double elm_band_um = 4.45;
    double min_axial_um = 3.56;
    double min_transverse_um = 15.0;
    Params base;
};

// Pixel-valued parameters for the given spacing. Band widths round half-up,
// minimum sizes use a guarded ceiling so "minimum" stays conservative across
// resolutions without tripping on representation error.
Params scale_params(const PhysicalParams& physical, const PixelSpacing& spacing);

}  // namespace hrs
