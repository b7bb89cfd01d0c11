#include "hrs/staple.hpp"

#include <algorithm>
#include <cmath>

namespace hrs {

namespace {

constexpr double kParamClampLo = 1e-4;
constexpr double kParamClampHi = 1.0 - 1e-4;

double clamp_param(double v) { return std::clamp(v, kParamClampLo, kParamClampHi); }

}  // namespace

void RaterSet::validate() const {
    if (masks.size() < 2) throw ValidationError("STAPLE requires at least 2 raters");
    for (const auto& m : masks)
        if (!m.same_dims(masks.front()))
            throw ValidationError("rater masks must share dimensions");
    if (region.size() != 0 && !region.same_dims(masks.front()))
        throw ValidationError("evaluation region must match rater mask dimensions");
}

StapleResult staple(const RaterSet& raters, double threshold, double prior, double tol,
                    int max_iter) {
    raters.validate();
    const int h = raters.masks.front().height;
    const int w = raters.masks.front().width;
    const std::size_t nraters = raters.masks.size();

    // Gather the region's pixels once; decisions stored rater-major.
    std::vector<PixelCoord> px;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            if (raters.in_region(r, c)) px.push_back({r, c});
    const std::size_t n = px.size();
    if (n == 0) throw ValidationError("STAPLE evaluation region is empty");

    std::vector<std::uint8_t> d(nraters * n);
    std::size_t total_fg = 0;
    for (std::size_t j = 0; j < nraters; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            d[j * n + i] = raters.masks[j].at(px[i].row, px[i].col) ? 1 : 0;
            total_fg += d[j * n + i];
        }

    StapleResult res;
    res.posterior = Image(h, w, 0.0);
    res.sensitivity.assign(nraters, 0.99);
    res.specificity.assign(nraters, 0.99);

    if (prior < 0.0)
        prior = static_cast<double>(total_fg) / (static_cast<double>(nraters) * n);
    prior = std::clamp(prior, 1e-6, 1.0 - 1e-6);
    res.prior = prior;

    res.degenerate = (total_fg == 0) || (total_fg == nraters * n);
    std::vector<double> weight(n, prior);

    if (!res.degenerate) {
        for (res.iterations = 1; res.iterations <= max_iter; ++res.iterations) {
            // E-step: posterior that each pixel is truly foreground.
            for (std::size_t i = 0; i < n; ++i) {
                double a = prior, b = 1.0 - prior;
                for (std::size_t j = 0; j < nraters; ++j) {
                    const double p = res.sensitivity[j], q = res.specificity[j];
                    if (d[j * n + i]) {
                        a *= p;
                        b *= 1.0 - q;
                    } else {
                        a *= 1.0 - p;
                        b *= q;
                    }
                }
                weight[i] = a / (a + b);
            }
            // M-step: rater performance from the current weights.
            double wsum = 0.0;
            for (double v : weight) wsum += v;
            const double csum = static_cast<double>(n) - wsum;
            double delta = 0.0;
            for (std::size_t j = 0; j < nraters; ++j) {
                double pw = 0.0, qw = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (d[j * n + i]) pw += weight[i];
                    else qw += 1.0 - weight[i];
                }
                const double p_new = clamp_param(wsum > 0.0 ? pw / wsum : res.sensitivity[j]);
                const double q_new = clamp_param(csum > 0.0 ? qw / csum : res.specificity[j]);
                delta = std::max(delta, std::abs(p_new - res.sensitivity[j]) +
                                            std::abs(q_new - res.specificity[j]));
                res.sensitivity[j] = p_new;
                res.specificity[j] = q_new;
            }
            if (delta < tol) break;
        }
        res.iterations = std::min(res.iterations, max_iter);
    }

    res.fused = RegionMask(h, w, 0);
    for (std::size_t i = 0; i < n; ++i) {
        res.posterior.at(px[i].row, px[i].col) = weight[i];
        if (weight[i] >= threshold) res.fused.at(px[i].row, px[i].col) = 1;
    }
    return res;
}

RegionMask fuse_to_ground_truth(const RaterSet& raters, double threshold,
                                const CorrectedScan& corrected, const Params& params) {
    const StapleResult fusion = staple(raters, threshold);
    const FilterOutcome outcome = apply_all(fusion.fused, corrected, params);
    RegionMask gt(fusion.fused.height, fusion.fused.width, 0);
    for (const auto& inst : outcome.kept)
        for (const auto& p : inst.pixels) gt.at(p.row, p.col) = 1;
    return gt;
}

AgreementStats agreement_stats(const RaterSet& raters, const RegionMask& fused) {
    raters.validate();
    const int h = raters.masks.front().height;
    const int w = raters.masks.front().width;
    RegionMask uni(h, w, 0);
    for (const auto& m : raters.masks)
        for (std::size_t i = 0; i < uni.size(); ++i) uni.data[i] |= (m.data[i] != 0);

    const Image dummy(h, w, 0.0);
    const auto instances = connected_components(uni, dummy);

    AgreementStats stats;
    stats.union_instances = instances.size();
    if (instances.empty()) return stats;

    std::size_t all_rater = 0, surviving = 0;
    for (const auto& inst : instances) {
        bool everyone = true;
        for (const auto& m : raters.masks) {
            bool hit = false;
            for (const auto& p : inst.pixels)
                if (m.at(p.row, p.col)) { hit = true; break; }
            if (!hit) { everyone = false; break; }
        }
        if (everyone) ++all_rater;
        for (const auto& p : inst.pixels)
            if (fused.at(p.row, p.col)) { ++surviving; break; }
    }
    stats.all_rater_fraction = static_cast<double>(all_rater) / instances.size();
    stats.surviving_fraction = static_cast<double>(surviving) / instances.size();
    return stats;
}

}  // namespace hrs
