#include "hrs/seeds.hpp"

#include <algorithm>
#include <limits>

namespace hrs {

RegionMask find_local_maxima(const Image& image, const RegionMask& mask) {
    if (!image.same_dims(mask)) throw ValidationError("image/mask dimension mismatch");
    RegionMask out(image.height, image.width, 0);
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) {
            if (!mask.at(r, c)) continue;
            const double v = image.at(r, c);
            bool ge_all = true;
            bool gt_one = false;
            for (int dr = -1; dr <= 1 && ge_all; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const int rr = r + dr, cc = c + dc;
                    if (!mask.inside(rr, cc) || !mask.at(rr, cc)) continue;
                    const double u = image.at(rr, cc);
                    if (v < u) { ge_all = false; break; }
                    if (v > u) gt_one = true;
                }
            }
            if (ge_all && gt_one) out.at(r, c) = 1;
        }
    }
    return out;
}

RegionMask prune_isolated(const RegionMask& maxima) {
    RegionMask out = maxima;
    for (int r = 0; r < maxima.height; ++r) {
        for (int c = 0; c < maxima.width; ++c) {
            if (!maxima.at(r, c)) continue;
            bool has_neighbor = false;
            for (int dr = -1; dr <= 1 && !has_neighbor; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const int rr = r + dr, cc = c + dc;
                    if (maxima.inside(rr, cc) && maxima.at(rr, cc)) { has_neighbor = true; break; }
                }
            if (!has_neighbor) out.at(r, c) = 0;
        }
    }
    return out;
}

Image rescale_bipolar(const Image& image) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : image.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo < hi)) throw ValidationError("constant image: bipolar rescale undefined");
    Image out(image.height, image.width);
    const double scale = 2.0 / (hi - lo);
    for (std::size_t i = 0; i < image.size(); ++i) out.data[i] = (image.data[i] - lo) * scale - 1.0;
    return out;
}

SeedMap build_seed_map(const CorrectedScan& corrected, const Params& params) {
    SeedMap sm;
    sm.rescaled = rescale_bipolar(corrected.image);

    const RegionMask maxima = prune_isolated(find_local_maxima(corrected.image, corrected.onl_mask));

    sm.labels = Grid<SeedLabel>(corrected.image.height, corrected.image.width, SeedLabel::OutsideMask);
    for (int r = 0; r < corrected.image.height; ++r) {
        for (int c = 0; c < corrected.image.width; ++c) {
            if (!corrected.onl_mask.at(r, c)) continue;
            if (maxima.at(r, c)) {
                sm.labels.at(r, c) = SeedLabel::Foreground;  // foreground wins over the threshold
                ++sm.foreground_count;
            } else if (sm.rescaled.at(r, c) < params.background_threshold) {
                sm.labels.at(r, c) = SeedLabel::Background;
                ++sm.background_count;
            } else {
                sm.labels.at(r, c) = SeedLabel::Unseeded;
            }
        }
    }
    return sm;
}

}  // namespace hrs
