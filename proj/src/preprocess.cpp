#include "hrs/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hrs {

namespace {

// Moving average over valid columns only; the window is truncated at the
// array ends.
std::vector<double> moving_average(const std::vector<double>& v,
                                   const std::vector<std::uint8_t>& invalid, int window) {
    const int n = static_cast<int>(v.size());
    const int half = window / 2;
    std::vector<double> out(v.size());
    for (int c = 0; c < n; ++c) {
        double sum = 0.0;
        int count = 0;
        for (int k = std::max(0, c - half); k <= std::min(n - 1, c + half); ++k) {
            if (invalid[k]) continue;
            sum += v[k];
            ++count;
        }
        out[c] = count > 0 ? sum / count : v[c];
    }
    return out;
}

// Replaces invalid entries by the nearest valid value (left wins ties).
void fill_from_nearest(std::vector<double>& v, const std::vector<std::uint8_t>& missing) {
    const int n = static_cast<int>(v.size());
    for (int c = 0; c < n; ++c) {
        if (!missing[c]) continue;
        int best = -1;
        for (int d = 1; d < n; ++d) {
            if (c - d >= 0 && !missing[c - d]) { best = c - d; break; }
            if (c + d < n && !missing[c + d]) { best = c + d; break; }
        }
        if (best >= 0) v[c] = v[best];
    }
}

RegionMask erode3x3(const RegionMask& m) {
    RegionMask out(m.height, m.width, 0);
    for (int r = 0; r < m.height; ++r) {
        for (int c = 0; c < m.width; ++c) {
            if (!m.at(r, c)) continue;
            bool keep = true;
            for (int dr = -1; dr <= 1 && keep; ++dr)
                for (int dc = -1; dc <= 1 && keep; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (!m.inside(rr, cc) || !m.at(rr, cc)) keep = false;
                }
            if (keep) out.at(r, c) = 1;
        }
    }
    return out;
}

}  // namespace

LayerBoundaries smooth_boundaries(const LayerBoundaries& b, int window_px) {
    if (window_px < 1 || window_px % 2 == 0)
        throw ValidationError("smoothing window must be odd and >= 1");
    if (std::all_of(b.invalid.begin(), b.invalid.end(), [](std::uint8_t x) { return x != 0; }))
        throw ValidationError("all boundary columns are invalid");

    LayerBoundaries s;
    s.opl = b.opl;
    s.elm = b.elm;
    s.isos = b.isos;
    fill_from_nearest(s.opl, b.invalid);
    fill_from_nearest(s.elm, b.invalid);
    fill_from_nearest(s.isos, b.invalid);

    // Interpolated columns now carry plausible values, so the average runs
    // over the original valid set only and the filled values just provide
    // output positions.
    s.opl = moving_average(s.opl, b.invalid, window_px);
    s.elm = moving_average(s.elm, b.invalid, window_px);
    s.isos = moving_average(s.isos, b.invalid, window_px);

    s.invalid.assign(s.opl.size(), 0);
    for (std::size_t c = 0; c < s.opl.size(); ++c)
        if (!(s.opl[c] < s.elm[c] && s.elm[c] < s.isos[c])) s.invalid[c] = 1;
    return s;
}

RegionMask build_onl_mask(const LayerBoundaries& b, int erosion_iterations, int height, int width) {
    RegionMask mask(height, width, 0);
    for (int c = 0; c < width && c < b.width(); ++c) {
        if (!b.column_valid(c)) continue;
        const int top = round_half_up(b.opl[c]);
        const int bottom = round_half_up(b.isos[c]);
        for (int r = top + 1; r < bottom; ++r)
            if (r >= 0 && r < height) mask.at(r, c) = 1;
    }
    for (int i = 0; i < erosion_iterations; ++i) mask = erode3x3(mask);
    return mask;
}

std::vector<double> compute_bias_field(const Image& image, const RegionMask& mask, double sigma_px) {
    if (!image.same_dims(mask)) throw ValidationError("image/mask dimension mismatch");
    if (!(sigma_px > 0.0)) throw ValidationError("bias sigma must be positive");

    const int w = image.width;
    std::vector<double> raw(w, 0.0);
    std::vector<std::uint8_t> empty(w, 1);
    bool any = false;
    for (int c = 0; c < w; ++c) {
        double sum = 0.0;
        int count = 0;
        for (int r = 0; r < image.height; ++r) {
            if (!mask.at(r, c)) continue;
            const double v = image.at(r, c);
            if (v > 0.0) { sum += v; ++count; }  // zero values excluded from the projection
        }
        if (count > 0) {
            raw[c] = sum / count;
            empty[c] = 0;
            any = true;
        }
    }
    if (!any) throw ValidationError("bias field undefined: mask empty or all masked values zero");
    fill_from_nearest(raw, empty);

    const int radius = static_cast<int>(std::ceil(4.0 * sigma_px));
    std::vector<double> kernel(2 * radius + 1);
    for (int k = -radius; k <= radius; ++k)
        kernel[k + radius] = std::exp(-0.5 * (k / sigma_px) * (k / sigma_px));

    std::vector<double> field(w, 0.0);
    for (int c = 0; c < w; ++c) {
        double acc = 0.0, wsum = 0.0;
        for (int k = -radius; k <= radius; ++k) {
            const int cc = c + k;
            if (cc < 0 || cc >= w) continue;
            acc += kernel[k + radius] * raw[cc];
            wsum += kernel[k + radius];
        }
        field[c] = acc / wsum;
    }

    double mean = 0.0;
    int valid = 0;
    for (int c = 0; c < w; ++c)
        if (!empty[c]) { mean += field[c]; ++valid; }
    mean /= valid;
    if (!(mean > 0.0)) throw ValidationError("bias field has nonpositive mean");
    for (double& f : field) f /= mean;
    return field;
}

Image equalize(const Image& image, const RegionMask& mask, const std::vector<double>& field) {
    if (!image.same_dims(mask)) throw ValidationError("image/mask dimension mismatch");
    if (field.size() != static_cast<std::size_t>(image.width))
        throw ValidationError("bias field length must equal image width");

    const double mean = std::accumulate(field.begin(), field.end(), 0.0) / field.size();
    const double floor_value = 1e-6 * mean;

    Image out = image;
    for (int c = 0; c < image.width; ++c) {
        const double f = std::max(field[c], floor_value);
        for (int r = 0; r < image.height; ++r)
            if (mask.at(r, c)) out.at(r, c) = image.at(r, c) / f;
    }
    return out;
}

Image suppress_elm(const Image& image, const std::vector<double>& elm, int band_px,
                   const RegionMask& mask) {
    if (band_px < 0) throw ValidationError("elm band must be nonnegative");
    if (elm.size() != static_cast<std::size_t>(image.width))
        throw ValidationError("elm array length must equal image width");

    double band_sum = 0.0, rest_sum = 0.0;
    std::size_t band_n = 0, rest_n = 0;
    for (int c = 0; c < image.width; ++c) {
        const int center = round_half_up(elm[c]);
        for (int r = 0; r < image.height; ++r) {
            if (!mask.at(r, c)) continue;
            if (std::abs(r - center) <= band_px) {
                band_sum += image.at(r, c);
                ++band_n;
            } else {
                rest_sum += image.at(r, c);
                ++rest_n;
            }
        }
    }
    if (band_n == 0 || rest_n == 0) return image;

    const double m_band = band_sum / band_n;
    const double m_rest = rest_sum / rest_n;
    if (!(m_band > m_rest)) return image;

    // "just below": land the band mean 1% under the remaining-ONL mean.
    const double f = 0.99 * m_rest / m_band;
    Image out = image;
    for (int c = 0; c < image.width; ++c) {
        const int center = round_half_up(elm[c]);
        for (int r = std::max(0, center - band_px); r <= std::min(image.height - 1, center + band_px); ++r)
            if (mask.at(r, c)) out.at(r, c) = image.at(r, c) * f;
    }
    return out;
}

CorrectedScan preprocess(const Image& image, const LayerBoundaries& boundaries, const Params& params) {
    CorrectedScan cs;
    cs.boundaries_smoothed = smooth_boundaries(boundaries, params.boundary_smooth_window_px);
    cs.onl_mask = build_onl_mask(cs.boundaries_smoothed, params.erosion_iterations, image.height,
                                 image.width);
    cs.bias_field = compute_bias_field(image, cs.onl_mask, params.bias_sigma_px);
    cs.image = equalize(image, cs.onl_mask, cs.bias_field);
    cs.image = suppress_elm(cs.image, cs.boundaries_smoothed.elm, params.elm_band_px, cs.onl_mask);
    return cs;
}

}  // namespace hrs
