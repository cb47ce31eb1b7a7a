#include "core/sensor.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace dtsim::sensor {

void CaptureRequest::validate(std::uint32_t scene_bands) const {
    require(decimation >= 1, Errc::invalid_argument, "decimation must be >= 1");
    require(footprint.along_track_extent_km > 0.0 &&
                footprint.across_track_extent_km > 0.0,
            Errc::invalid_argument, "footprint extents must be > 0");
    if (!band_subset.empty()) {
        std::set<std::uint32_t> seen;
        for (std::uint32_t b : band_subset) {
            require(b < scene_bands, Errc::invalid_argument,
                    "band index " + std::to_string(b) + " out of range");
            require(seen.insert(b).second, Errc::invalid_argument,
                    "duplicate band index " + std::to_string(b));
        }
    }
}

void ReadoutModel::validate() const {
    require(bytes_per_sample > 0.0, Errc::invalid_argument,
            "readout: bytes_per_sample must be > 0");
    require(link_rate_bytes_s > 0.0, Errc::invalid_argument,
            "readout: link_rate_bytes_s must be > 0");
    require(fixed_overhead_s >= 0.0, Errc::invalid_argument,
            "readout: fixed_overhead_s must be >= 0");
}

CaptureWindow window_for(const Raster& scene, const geometry::GroundFootprint& fp) {
    const double row_lo_km = fp.along_track_center_km - fp.along_track_extent_km / 2.0;
    const double row_hi_km = fp.along_track_center_km + fp.along_track_extent_km / 2.0;
    const double col_lo_km = fp.across_track_center_km - fp.across_track_extent_km / 2.0;
    const double col_hi_km = fp.across_track_center_km + fp.across_track_extent_km / 2.0;

    auto to_index = [](double pos_km, double origin_km, double gsd_km) {
        return std::llround((pos_km - origin_km) / gsd_km);
    };
    const auto clamp_to = [](long long v, long long hi) {
        return static_cast<std::uint32_t>(std::clamp(v, 0ll, hi));
    };

    CaptureWindow w;
    w.row_lo = clamp_to(to_index(row_lo_km, scene.origin_along_km, scene.gsd_km),
                        scene.height);
    w.row_hi = clamp_to(to_index(row_hi_km, scene.origin_along_km, scene.gsd_km),
                        scene.height);
    w.col_lo = clamp_to(to_index(col_lo_km, scene.origin_across_km, scene.gsd_km),
                        scene.width);
    w.col_hi = clamp_to(to_index(col_hi_km, scene.origin_across_km, scene.gsd_km),
                        scene.width);
    if (w.row_hi <= w.row_lo || w.col_hi <= w.col_lo)
        fail(Errc::no_coverage, "capture footprint does not overlap the scene");
    return w;
}

Raster capture(const Raster& scene, const CaptureRequest& req) {
    req.validate(scene.bands);
    const CaptureWindow w = window_for(scene, req.footprint);

    std::vector<std::uint32_t> bands = req.band_subset;
    if (bands.empty()) {
        bands.resize(scene.bands);
        for (std::uint32_t b = 0; b < scene.bands; ++b) bands[b] = b;
    }

    const std::uint32_t k = static_cast<std::uint32_t>(req.decimation);
    const std::uint32_t out_rows = (w.rows() + k - 1) / k;
    const std::uint32_t out_cols = (w.cols() + k - 1) / k;

    Raster out(out_cols, out_rows, static_cast<std::uint32_t>(bands.size()));
    out.gsd_km = scene.gsd_km * k;
    out.origin_along_km = scene.origin_along_km + w.row_lo * scene.gsd_km;
    out.origin_across_km = scene.origin_across_km + w.col_lo * scene.gsd_km;

    for (std::uint32_t bi = 0; bi < bands.size(); ++bi)
        for (std::uint32_t r = 0; r < out_rows; ++r)
            for (std::uint32_t c = 0; c < out_cols; ++c)
                out.at(bi, r, c) =
                    scene.at(bands[bi], w.row_lo + r * k, w.col_lo + c * k);
    return out;
}

double readout_time(std::uint64_t pixels, std::uint32_t bands, const ReadoutModel& model) {
    model.validate();
    return static_cast<double>(pixels) * bands * model.bytes_per_sample /
               model.link_rate_bytes_s +
           model.fixed_overhead_s;
}

} // namespace dtsim::sensor
