// Shared domain types for the OCT speck-detection pipeline.
//
// Grid convention: row-major storage, rows run along the axial (depth) axis
// and increase toward the posterior, columns index A-scans (transverse axis).

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hrs {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Micrometers per pixel along each axis.
struct PixelSpacing {
    double axial_um = 0.0;
    double transverse_um = 0.0;

    bool valid() const {
        return axial_um > 0.0 && transverse_um > 0.0 && std::isfinite(axial_um) &&
               std::isfinite(transverse_um);
    }
};

template <typename T>
struct Grid {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Grid() = default;
    Grid(int h, int w, T fill = T{})
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    T& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
    const T& at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }
    bool inside(int row, int col) const { return row >= 0 && row < height && col >= 0 && col < width; }
    std::size_t size() const { return data.size(); }
    bool same_dims(const Grid& other) const { return width == other.width && height == other.height; }
};

// Working image: 64-bit values regardless of the 32-bit storage format.
using Image = Grid<double>;

// Binary mask over a B-scan frame (0 = off, 1 = on).
using RegionMask = Grid<std::uint8_t>;

inline std::size_t mask_count(const RegionMask& m) {
    std::size_t n = 0;
    for (auto v : m.data) n += (v != 0);
    return n;
}

// One OCT cross-section as stored on disk: raw float32 intensities.
struct BScan {
    int width = 0;   // A-scan count (columns)
    int height = 0;  // axial pixel count (rows)
    std::vector<float> intensities;  // row-major, length width*height
    PixelSpacing spacing;

    float at(int row, int col) const { return intensities[static_cast<std::size_t>(row) * width + col]; }

    // Throws ValidationError on non-finite or negative samples, size or
    // spacing violations. Minimum dims for detection (w>=3, h>=4) are
    // checked at pipeline entry, not here, so tiny containers stay loadable.
    void validate() const;

    Image to_image() const;
};

// Per-column axial positions (subpixel) of the three required boundaries.
// Ordering opl < elm < isos must hold per column; violating columns are
// flagged invalid and excluded from the ONL mask.
struct LayerBoundaries {
    std::vector<double> opl;
    std::vector<double> elm;
    std::vector<double> isos;
    std::vector<std::uint8_t> invalid;  // 1 = ordering violated in this column

    int width() const { return static_cast<int>(opl.size()); }
    bool column_valid(int col) const { return invalid[col] == 0; }

    // Recomputes the invalid flags; throws if array lengths disagree or a
    // value falls outside [0, height).
    void refresh_validity(int height);
};

struct PixelCoord {
    int row = 0;
    int col = 0;
};

struct BBox {
    int row_min = 0;
    int row_max = 0;
    int col_min = 0;
    int col_max = 0;

    int rows() const { return row_max - row_min + 1; }
    int cols() const { return col_max - col_min + 1; }
};

struct FilterVerdicts {
    bool size = false;
    bool intensity = false;
    bool position = false;           // raw [lo, hi] band test
    bool position_override = false;  // max_intensity >= override_factor * T
    bool detachment = false;
};

// One connected detected feature (8-connected component of a binary mask).
struct FeatureInstance {
    std::vector<PixelCoord> pixels;
    BBox bbox;
    double max_intensity = 0.0;      // on the illumination-corrected image
    double axial_mean_row = 0.0;
    double relative_position = 0.0;  // 0 = IS/OS, 1 = OPL
    double intensity_threshold = 0.0;  // span statistic T this instance was tested against
    FilterVerdicts verdicts;
};

// Boundary rows are real-valued; masks and row tests use half-up rounding.
inline int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

}  // namespace hrs
