#include "hrs/postfilter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hrs {

const char* filter_name(FilterId id) {
    switch (id) {
        case FilterId::Size: return "size";
        case FilterId::Intensity: return "intensity";
        case FilterId::Position: return "position";
        case FilterId::Detachment: return "detachment";
    }
    return "?";
}

std::vector<FeatureInstance> connected_components(const RegionMask& mask, const Image& intensity) {
    if (!mask.same_dims(intensity)) throw ValidationError("mask/intensity dimension mismatch");
    std::vector<FeatureInstance> out;
    RegionMask seen(mask.height, mask.width, 0);
    std::vector<PixelCoord> stack;

    for (int r0 = 0; r0 < mask.height; ++r0) {
        for (int c0 = 0; c0 < mask.width; ++c0) {
            if (!mask.at(r0, c0) || seen.at(r0, c0)) continue;
            FeatureInstance inst;
            inst.bbox = {r0, r0, c0, c0};
            inst.max_intensity = -std::numeric_limits<double>::infinity();
            double row_sum = 0.0;
            seen.at(r0, c0) = 1;
            stack.push_back({r0, c0});
            while (!stack.empty()) {
                const auto [r, c] = stack.back();
                stack.pop_back();
                inst.pixels.push_back({r, c});
                inst.bbox.row_min = std::min(inst.bbox.row_min, r);
                inst.bbox.row_max = std::max(inst.bbox.row_max, r);
                inst.bbox.col_min = std::min(inst.bbox.col_min, c);
                inst.bbox.col_max = std::max(inst.bbox.col_max, c);
                inst.max_intensity = std::max(inst.max_intensity, intensity.at(r, c));
                row_sum += r;
                for (int dr = -1; dr <= 1; ++dr)
                    for (int dc = -1; dc <= 1; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        const int rr = r + dr, cc = c + dc;
                        if (mask.inside(rr, cc) && mask.at(rr, cc) && !seen.at(rr, cc)) {
                            seen.at(rr, cc) = 1;
                            stack.push_back({rr, cc});
                        }
                    }
            }
            inst.axial_mean_row = row_sum / static_cast<double>(inst.pixels.size());
            out.push_back(std::move(inst));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const FeatureInstance& a, const FeatureInstance& b) {
        if (a.bbox.row_min != b.bbox.row_min) return a.bbox.row_min < b.bbox.row_min;
        return a.bbox.col_min < b.bbox.col_min;
    });
    return out;
}

bool filter_size(const FeatureInstance& inst, int min_axial_px, int min_transverse_px) {
    return inst.bbox.rows() >= min_axial_px && inst.bbox.cols() >= min_transverse_px;
}

std::pair<double, bool> intensity_threshold(const FeatureInstance& inst, const Image& corrected,
                                            const RegionMask& onl_mask, double k) {
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (int c = inst.bbox.col_min; c <= inst.bbox.col_max; ++c) {
        for (int r = 0; r < corrected.height; ++r) {
            if (!onl_mask.at(r, c)) continue;
            const double v = corrected.at(r, c);
            sum += v;
            sum2 += v * v;
            ++n;
        }
    }
    if (n == 0) return {std::numeric_limits<double>::infinity(), false};
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    const double t = mean + k * std::sqrt(var);
    return {t, inst.max_intensity > t};
}

bool position_filter(const FeatureInstance& inst, const LayerBoundaries& smoothed, double lo,
                     double hi, double override_factor, double T, double* r_out, bool* band_out,
                     bool* override_out) {
    double opl_sum = 0.0, isos_sum = 0.0;
    int n = 0;
    for (int c = inst.bbox.col_min; c <= inst.bbox.col_max && c < smoothed.width(); ++c) {
        opl_sum += smoothed.opl[c];
        isos_sum += smoothed.isos[c];
        ++n;
    }
    const bool override_hit = std::isfinite(T) && inst.max_intensity >= override_factor * T;
    if (override_out) *override_out = override_hit;

    bool band_ok = false;
    double r = std::numeric_limits<double>::quiet_NaN();
    if (n > 0) {
        const double opl_m = opl_sum / n;
        const double isos_m = isos_sum / n;
        if (isos_m > opl_m) {  // degenerate span leaves only the override
            r = (isos_m - inst.axial_mean_row) / (isos_m - opl_m);
            band_ok = lo <= r && r <= hi;
        }
    }
    if (r_out) *r_out = r;
    if (band_out) *band_out = band_ok;
    return band_ok || override_hit;
}

bool detachment_filter(const FeatureInstance& inst, const LayerBoundaries& smoothed, int gap_px) {
    for (const auto& px : inst.pixels) {
        if (px.col >= smoothed.width()) return false;
        const int top = round_half_up(smoothed.opl[px.col]);
        const int bottom = round_half_up(smoothed.isos[px.col]);
        if (px.row < top + gap_px || px.row > bottom - gap_px) return false;
    }
    return true;
}

FilterOutcome apply_all(const RegionMask& mask, const CorrectedScan& corrected, const Params& params) {
    FilterOutcome out;
    for (FeatureInstance& inst : connected_components(mask, corrected.image)) {
        inst.verdicts.size = filter_size(inst, params.min_axial_px, params.min_transverse_px);
        const auto [t, intensity_ok] =
            intensity_threshold(inst, corrected.image, corrected.onl_mask, params.intensity_k);
        inst.intensity_threshold = t;
        inst.verdicts.intensity = intensity_ok;
        bool band_ok = false, override_hit = false;
        const bool position_ok =
            position_filter(inst, corrected.boundaries_smoothed, params.position_lo,
                            params.position_hi, params.override_factor, t, &inst.relative_position,
                            &band_ok, &override_hit);
        inst.verdicts.position = band_ok;
        inst.verdicts.position_override = override_hit;
        inst.verdicts.detachment =
            detachment_filter(inst, corrected.boundaries_smoothed, params.detachment_gap_px);

        if (!inst.verdicts.size) {
            out.rejected.emplace_back(std::move(inst), FilterId::Size);
        } else if (!intensity_ok) {
            out.rejected.emplace_back(std::move(inst), FilterId::Intensity);
        } else if (!position_ok) {
            out.rejected.emplace_back(std::move(inst), FilterId::Position);
        } else if (!inst.verdicts.detachment) {
            out.rejected.emplace_back(std::move(inst), FilterId::Detachment);
        } else {
            out.kept.push_back(std::move(inst));
        }
    }
    return out;
}

}  // namespace hrs
