#include "hrs/types.hpp"

#include <cmath>

namespace hrs {

void BScan::validate() const {
    if (width <= 0 || height <= 0)
        throw ValidationError("BScan dimensions must be positive");
    if (intensities.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw ValidationError("BScan intensity count does not match width*height");
    if (!spacing.valid())
        throw ValidationError("BScan pixel spacing must be positive and finite");
    for (float v : intensities) {
        if (!std::isfinite(v))
            throw ValidationError("BScan contains non-finite intensity");
        if (v < 0.0f)
            throw ValidationError("BScan contains negative intensity");
    }
}

Image BScan::to_image() const {
    Image img(height, width);
    for (std::size_t i = 0; i < intensities.size(); ++i)
        img.data[i] = static_cast<double>(intensities[i]);
    return img;
}

void LayerBoundaries::refresh_validity(int height) {
    const std::size_t n = opl.size();
    if (elm.size() != n || isos.size() != n)
        throw ValidationError("layer boundary arrays must have equal length");
    invalid.assign(n, 0);
    for (std::size_t c = 0; c < n; ++c) {
        const double o = opl[c], e = elm[c], i = isos[c];
        if (!std::isfinite(o) || !std::isfinite(e) || !std::isfinite(i))
            throw ValidationError("layer boundary value is not finite");
        if (o < 0.0 || i < 0.0 || o >= height || e < 0.0 || e >= height || i >= height)
            throw ValidationError("layer boundary row outside [0, height)");
        if (!(o < e && e < i)) invalid[c] = 1;
    }
}

}  // namespace hrs
