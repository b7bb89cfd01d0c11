#include "hrs/params.hpp"

#include <cmath>

namespace hrs {

namespace {

// Ceiling with a small guard so a quotient that is an integer up to
// representation error (3.56/0.89 == 4) does not jump to the next pixel.
int ceil_px(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }

}  // namespace

void Params::validate() const {
    if (!(bias_sigma_px > 0.0)) throw ValidationError("bias_sigma_px must be positive");
    if (elm_band_px < 0) throw ValidationError("elm_band_px must be nonnegative");
    if (!(rw_beta > 0.0)) throw ValidationError("rw_beta must be positive");
    if (!(rw_tolerance > 0.0)) throw ValidationError("rw_tolerance must be positive");
    if (min_axial_px < 1 || min_transverse_px < 1)
        throw ValidationError("minimum feature sizes must be at least 1 px");
    if (!(intensity_k >= 0.0)) throw ValidationError("intensity_k must be nonnegative");
    if (!(position_lo < position_hi) || position_lo <= 0.0 || position_hi >= 1.0)
        throw ValidationError("require 0 < position_lo < position_hi < 1");
    if (!(override_factor > 0.0)) throw ValidationError("override_factor must be positive");
    if (boundary_smooth_window_px < 1 || boundary_smooth_window_px % 2 == 0)
        throw ValidationError("boundary_smooth_window_px must be odd and >= 1");
    if (erosion_iterations < 0) throw ValidationError("erosion_iterations must be nonnegative");
    if (detachment_gap_px < 0) throw ValidationError("detachment_gap_px must be nonnegative");
    if (!(staple_threshold > 0.0 && staple_threshold < 1.0))
        throw ValidationError("staple_threshold must lie in (0,1)");
}

Params scale_params(const PhysicalParams& physical, const PixelSpacing& spacing) {
    if (!spacing.valid())
        throw ValidationError("scale_params requires positive finite spacing");
    Params p = physical.base;
    p.bias_sigma_px = physical.bias_sigma_um / spacing.transverse_um;
    p.elm_band_px = round_half_up(physical.elm_band_um / spacing.axial_um);
    p.min_axial_px = ceil_px(physical.min_axial_um / spacing.axial_um);
    p.min_transverse_px = ceil_px(physical.min_transverse_um / spacing.transverse_um);
    p.validate();
    return p;
}

}  // namespace hrs
