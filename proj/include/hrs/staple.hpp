// Multi-reader mask fusion: binary STAPLE expectation-maximization with
// per-rater sensitivity/specificity estimates, posterior thresholding, and
// the reader-agreement statistics.

#pragma once

#include <optional>

#include "hrs/postfilter.hpp"
#include "hrs/types.hpp"

namespace hrs {

struct RaterSet {
    std::vector<RegionMask> masks;  // >= 2, equal dims
    RegionMask region;              // pixels considered; empty grid = whole frame

    void validate() const;
    bool in_region(int r, int c) const {
        return region.size() == 0 || region.at(r, c) != 0;
    }
};

struct StapleResult {
    Image posterior;                 // per-pixel foreground probability (0 outside the region)
    std::vector<double> sensitivity;  // p_j, clamped to [1e-4, 1-1e-4]
    std::vector<double> specificity;  // q_j, same clamp
    RegionMask fused;                // posterior >= threshold
    int iterations = 0;
    double prior = 0.0;
    bool degenerate = false;         // all-empty or all-full rater input
};

// prior < 0 selects auto = mean rater foreground fraction inside the region
// (clamped to [1e-6, 1-1e-6]). Initialization p = q = 0.99; convergence when
// max_j(|dp_j| + |dq_j|) < tol.
StapleResult staple(const RaterSet& raters, double threshold, double prior = -1.0,
                    double tol = 1e-6, int max_iter = 100);

// STAPLE at `threshold`, then the full postfilter cascade on the fused mask;
// the union of kept instances is the ground-truth mask.
RegionMask fuse_to_ground_truth(const RaterSet& raters, double threshold,
                                const CorrectedScan& corrected, const Params& params);

struct AgreementStats {
    std::size_t union_instances = 0;
    std::optional<double> all_rater_fraction;   // labeled by every reader
    std::optional<double> surviving_fraction;   // >= 1 px overlap with the fused mask
};

// Instances are 8-connected components of the union of rater masks.
AgreementStats agreement_stats(const RaterSet& raters, const RegionMask& fused);

}  // namespace hrs
