#include "hrs/evaluation.hpp"

namespace hrs {

namespace {

Metrics make_metrics(std::uint64_t tp_like, std::uint64_t p_den, std::uint64_t r_den) {
    Metrics m;
    if (p_den > 0) m.precision = static_cast<double>(tp_like) / static_cast<double>(p_den);
    if (r_den > 0) m.recall = static_cast<double>(tp_like) / static_cast<double>(r_den);
    if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0)
        m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    return m;
}

}  // namespace

PixelTally tally_pixels(const RegionMask& detection, const RegionMask& ground_truth) {
    if (!detection.same_dims(ground_truth))
        throw ValidationError("detection/ground-truth dimension mismatch");
    PixelTally t;
    for (std::size_t i = 0; i < detection.size(); ++i) {
        const bool det = detection.data[i] != 0;
        const bool gt = ground_truth.data[i] != 0;
        if (det && gt) ++t.tp;
        else if (det) ++t.fp;
        else if (gt) ++t.fn;
    }
    return t;
}

Metrics pixel_metrics(const PixelTally& tally) {
    return make_metrics(tally.tp, tally.tp + tally.fp, tally.tp + tally.fn);
}

InstanceTally tally_instances(const std::vector<FeatureInstance>& gt_instances,
                              const std::vector<FeatureInstance>& det_instances, int height,
                              int width) {
    RegionMask det_cover(height, width, 0);
    for (const auto& inst : det_instances)
        for (const auto& p : inst.pixels) det_cover.at(p.row, p.col) = 1;
    RegionMask gt_cover(height, width, 0);
    for (const auto& inst : gt_instances)
        for (const auto& p : inst.pixels) gt_cover.at(p.row, p.col) = 1;

    InstanceTally t;
    t.gt_total = gt_instances.size();
    for (const auto& inst : gt_instances)
        for (const auto& p : inst.pixels)
            if (det_cover.at(p.row, p.col)) { ++t.gt_matched; break; }
    for (const auto& inst : det_instances) {
        bool hit = false;
        for (const auto& p : inst.pixels)
            if (gt_cover.at(p.row, p.col)) { hit = true; break; }
        if (!hit) ++t.det_fp;
    }
    return t;
}

Metrics instance_metrics(const InstanceTally& tally) {
    return make_metrics(tally.gt_matched, tally.gt_matched + tally.det_fp, tally.gt_total);
}

std::optional<FeatureStats> feature_stats(const std::vector<FeatureInstance>& instances,
                                          const PixelSpacing& spacing) {
    if (instances.empty()) return std::nullopt;
    FeatureStats s;
    for (const auto& inst : instances) {
        s.mean_transverse_px += inst.bbox.cols();
        s.mean_axial_px += inst.bbox.rows();
        s.mean_area_px += static_cast<double>(inst.pixels.size());
    }
    const double n = static_cast<double>(instances.size());
    s.mean_transverse_px /= n;
    s.mean_axial_px /= n;
    s.mean_area_px /= n;
    s.mean_area_um2 = s.mean_area_px * spacing.axial_um * spacing.transverse_um;
    return s;
}

}  // namespace hrs
