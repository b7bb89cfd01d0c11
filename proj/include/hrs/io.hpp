// File formats:
//   <name>.f32    raw little-endian float32, row-major
//   <name>.meta   JSON sidecar {width, height, axial_um, transverse_um}
//   <name>.layers JSON {opl: [...], elm: [...], isos: [...]}
//   <name>.mask   8-byte header (u32 LE width, u32 LE height), then the
//                 width*height bit sequence packed row-major, LSB-first,
//                 zero-padded to a whole byte at the end.
// All writes go through a temp file and a rename so outputs are atomic.

#pragma once

#include <filesystem>

#include "hrs/types.hpp"

namespace hrs {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

BScan load_bscan(const std::filesystem::path& image_path, const std::filesystem::path& meta_path);
void save_bscan(const BScan& scan, const std::filesystem::path& image_path,
                const std::filesystem::path& meta_path);

LayerBoundaries load_boundaries(const std::filesystem::path& path, int width, int height);
void save_boundaries(const LayerBoundaries& b, const std::filesystem::path& path);

RegionMask load_mask(const std::filesystem::path& path);
void save_mask(const RegionMask& mask, const std::filesystem::path& path);

void atomic_write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hrs
