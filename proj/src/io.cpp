#include "hrs/io.hpp"

#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace hrs {

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write_bytes(const fs::path& path, const void* bytes, std::size_t n) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(static_cast<const char*>(bytes), static_cast<std::streamsize>(n));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

nlohmann::json parse_json(const fs::path& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

std::vector<double> json_array(const nlohmann::json& j, const char* key, const fs::path& path) {
    if (!j.contains(key) || !j[key].is_array())
        throw IoError(path.string() + ": missing array '" + key + "'");
    std::vector<double> out;
    out.reserve(j[key].size());
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw IoError(path.string() + ": non-numeric entry in '" + key + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

void atomic_write_text(const fs::path& path, const std::string& text) {
    atomic_write_bytes(path, text.data(), text.size());
}

BScan load_bscan(const fs::path& image_path, const fs::path& meta_path) {
    const nlohmann::json meta = parse_json(meta_path);
    for (const char* key : {"width", "height", "axial_um", "transverse_um"})
        if (!meta.contains(key) || !meta[key].is_number())
            throw IoError(meta_path.string() + ": missing numeric field '" + std::string(key) + "'");

    BScan scan;
    scan.width = meta["width"].get<int>();
    scan.height = meta["height"].get<int>();
    scan.spacing.axial_um = meta["axial_um"].get<double>();
    scan.spacing.transverse_um = meta["transverse_um"].get<double>();
    if (scan.width <= 0 || scan.height <= 0)
        throw IoError(meta_path.string() + ": nonpositive dimensions");

    const std::string raw = read_file(image_path);
    const std::size_t expect = static_cast<std::size_t>(scan.width) * scan.height * sizeof(float);
    if (raw.size() != expect)
        throw IoError(image_path.string() + ": file holds " + std::to_string(raw.size() / sizeof(float)) +
                      " floats but metadata requires " +
                      std::to_string(static_cast<std::size_t>(scan.width) * scan.height));

    // Host is assumed little-endian, matching the on-disk layout.
    scan.intensities.resize(static_cast<std::size_t>(scan.width) * scan.height);
    std::memcpy(scan.intensities.data(), raw.data(), raw.size());
    scan.validate();
    return scan;
}

void save_bscan(const BScan& scan, const fs::path& image_path, const fs::path& meta_path) {
    scan.validate();
    atomic_write_bytes(image_path, scan.intensities.data(), scan.intensities.size() * sizeof(float));
    nlohmann::ordered_json meta;
    meta["width"] = scan.width;
    meta["height"] = scan.height;
    meta["axial_um"] = scan.spacing.axial_um;
    meta["transverse_um"] = scan.spacing.transverse_um;
    atomic_write_text(meta_path, meta.dump(2) + "\n");
}

LayerBoundaries load_boundaries(const fs::path& path, int width, int height) {
    const nlohmann::json j = parse_json(path);
    LayerBoundaries b;
    b.opl = json_array(j, "opl", path);
    b.elm = json_array(j, "elm", path);
    b.isos = json_array(j, "isos", path);
    if (b.opl.size() != static_cast<std::size_t>(width) || b.elm.size() != b.opl.size() ||
        b.isos.size() != b.opl.size())
        throw IoError(path.string() + ": boundary arrays must have length " + std::to_string(width));
    b.refresh_validity(height);
    return b;
}

void save_boundaries(const LayerBoundaries& b, const fs::path& path) {
    nlohmann::ordered_json j;
    j["opl"] = b.opl;
    j["elm"] = b.elm;
    j["isos"] = b.isos;
    atomic_write_text(path, j.dump() + "\n");
}

RegionMask load_mask(const fs::path& path) {
    const std::string raw = read_file(path);
    if (raw.size() < 8) throw IoError(path.string() + ": truncated mask header");
    std::uint32_t w = 0, h = 0;
    std::memcpy(&w, raw.data(), 4);
    std::memcpy(&h, raw.data() + 4, 4);
    const std::size_t nbits = static_cast<std::size_t>(w) * h;
    const std::size_t nbytes = (nbits + 7) / 8;
    if (raw.size() != 8 + nbytes)
        throw IoError(path.string() + ": mask payload size mismatch");
    RegionMask m(static_cast<int>(h), static_cast<int>(w));
    for (std::size_t i = 0; i < nbits; ++i) {
        const unsigned char byte = static_cast<unsigned char>(raw[8 + i / 8]);
        m.data[i] = (byte >> (i % 8)) & 1u;
    }
    return m;
}

void save_mask(const RegionMask& mask, const fs::path& path) {
    const std::size_t nbits = mask.size();
    std::vector<unsigned char> buf(8 + (nbits + 7) / 8, 0);
    const std::uint32_t w = static_cast<std::uint32_t>(mask.width);
    const std::uint32_t h = static_cast<std::uint32_t>(mask.height);
    std::memcpy(buf.data(), &w, 4);
    std::memcpy(buf.data() + 4, &h, 4);
    for (std::size_t i = 0; i < nbits; ++i)
        if (mask.data[i]) buf[8 + i / 8] |= static_cast<unsigned char>(1u << (i % 8));
    atomic_write_bytes(path, buf.data(), buf.size());
}

}  // namespace hrs
