// Lookahead / nadir capture from a ground-truth scene and the instrument
// readout-time model that dominates the timeline budget.
#pragma once

#include "core/geometry.hpp"
#include "core/raster.hpp"

#include <cstdint>
#include <vector>

namespace dtsim::sensor {

struct CaptureRequest {
    geometry::GroundFootprint footprint;
    int decimation = 1;              // keep every k-th pixel on each axis
    std::vector<std::uint32_t> band_subset; // empty = all bands
    bool smear = false;              // accepted but unimplemented; logged only

    void validate(std::uint32_t scene_bands) const;
};

struct ReadoutModel {
    double bytes_per_sample = 2.0;
    double link_rate_bytes_s = 8.0e6;
    double fixed_overhead_s = 0.5;

    void validate() const;
};

// Pixel window of a footprint on a scene, [row_lo,row_hi) x [col_lo,col_hi).
struct CaptureWindow {
    std::uint32_t row_lo = 0, row_hi = 0;
    std::uint32_t col_lo = 0, col_hi = 0;

    std::uint32_t rows() const { return row_hi - row_lo; }
    std::uint32_t cols() const { return col_hi - col_lo; }
};

// Maps a footprint onto scene pixels (nearest pixel edge, clamped to the
// scene). Throws no_coverage if the overlap is empty.
CaptureWindow window_for(const Raster& scene, const geometry::GroundFootprint& fp);

// Crops the footprint, keeps every decimation-th pixel anchored at the
// crop's top-left, and selects the requested bands. Every output sample is
// drawn verbatim from the scene; output size is ceil(crop/decimation).
Raster capture(const Raster& scene, const CaptureRequest& req);

// pixels * bands * bytes_per_sample / link_rate + fixed overhead.
double readout_time(std::uint64_t pixels, std::uint32_t bands, const ReadoutModel& model);

} // namespace dtsim::sensor
