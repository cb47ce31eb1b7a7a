// Multi-band raster container and the DTRAST01 on-disk format.
//
// File layout (bit-exact, little endian):
//   bytes 0..7   magic "DTRAST01"
//   u32 width, u32 height, u32 bands
//   f32 samples, band-sequential, row-major within each band
//
// Geolocation (gsd/origin) is simulation-side metadata and is not persisted.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dtsim {

struct Raster {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t bands = 1;
    double gsd_km = 1.0;
    double origin_along_km = 0.0;  // along-track position of row 0 edge
    double origin_across_km = 0.0; // across-track position of col 0 edge
    std::vector<float> samples;    // band-sequential, row-major within band

    Raster() = default;
    Raster(std::uint32_t w, std::uint32_t h, std::uint32_t b, float fill = 0.0f)
        : width(w), height(h), bands(b),
          samples(static_cast<std::size_t>(w) * h * b, fill) {}

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * height;
    }
    std::size_t index(std::uint32_t band, std::uint32_t row, std::uint32_t col) const {
        return (static_cast<std::size_t>(band) * height + row) * width + col;
    }
    float at(std::uint32_t band, std::uint32_t row, std::uint32_t col) const {
        return samples[index(band, row, col)];
    }
    float& at(std::uint32_t band, std::uint32_t row, std::uint32_t col) {
        return samples[index(band, row, col)];
    }

    double along_extent_km() const { return height * gsd_km; }
    double across_extent_km() const { return width * gsd_km; }
};

Raster read_raster(const std::string& path);
void write_raster(const Raster& raster, const std::string& path);

// FNV-1a 64 over dimensions and little-endian sample bytes. Used to prove two
// log records consumed the identical scene.
std::uint64_t raster_hash(const Raster& raster);

} // namespace dtsim
