// Scoring: accumulated pixel confusion tallies and instance-level metrics
// with the one-pixel-overlap rule. Note the instance precision convention:
// matched ground-truth instances over matched plus false-positive detections
// (66/(66+44) = 60%), not matched detections.

#pragma once

#include <optional>

#include "hrs/types.hpp"

namespace hrs {

struct PixelTally {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    PixelTally& operator+=(const PixelTally& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

struct InstanceTally {
    std::uint64_t gt_total = 0;
    std::uint64_t gt_matched = 0;
    std::uint64_t det_fp = 0;

    InstanceTally& operator+=(const InstanceTally& o) {
        gt_total += o.gt_total;
        gt_matched += o.gt_matched;
        det_fp += o.det_fp;
        return *this;
    }
};

// Zero denominators yield absent metrics, never 0 or 1.
struct Metrics {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

PixelTally tally_pixels(const RegionMask& detection, const RegionMask& ground_truth);

Metrics pixel_metrics(const PixelTally& tally);

// Instances are 8-connected components; a GT instance is matched by >= 1 px
// of detection overlap, a detection is a false positive when it overlaps no
// GT pixel. A detection covering two GT instances matches both.
InstanceTally tally_instances(const std::vector<FeatureInstance>& gt_instances,
                              const std::vector<FeatureInstance>& det_instances, int height,
                              int width);

Metrics instance_metrics(const InstanceTally& tally);

struct FeatureStats {
    double mean_transverse_px = 0.0;
    double mean_axial_px = 0.0;
    double mean_area_px = 0.0;
    double mean_area_um2 = 0.0;
};

std::optional<FeatureStats> feature_stats(const std::vector<FeatureInstance>& instances,
                                          const PixelSpacing& spacing);

}  // namespace hrs
