#include "core/targeting.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dtsim::targeting {

namespace {
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
}

Policy policy_from_string(const std::string& name) {
    if (name == "cloud_avoid") return Policy::cloud_avoid;
    if (name == "cloud_seek") return Policy::cloud_seek;
    if (name == "thermal_hunt") return Policy::thermal_hunt;
    fail(Errc::bad_config,
         "unknown policy '" + name + "' (expected cloud_avoid, cloud_seek or thermal_hunt)");
}

std::string to_string(Policy policy) {
    switch (policy) {
        case Policy::cloud_avoid: return "cloud_avoid";
        case Policy::cloud_seek: return "cloud_seek";
        case Policy::thermal_hunt: return "thermal_hunt";
    }
    return "unknown";
}

void tile_columns(std::uint32_t width, int n_tiles, int tile_index,
                  std::uint32_t& col_lo, std::uint32_t& col_hi) {
    col_lo = static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(tile_index) * width / n_tiles);
    col_hi = static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(tile_index + 1) * width / n_tiles);
}

std::vector<TileScore> tile_scores(const AnalysisProduct& product, int n_tiles,
                                   double max_across_track_deg,
                                   const geometry::OrbitConfig& orbit) {
    orbit.validate();
    require(n_tiles >= 1 && n_tiles % 2 == 1, Errc::invalid_argument,
            "n_tiles must be odd and >= 1 so the nadir tile is always available");
    require(product.width >= static_cast<std::uint32_t>(n_tiles), Errc::invalid_argument,
            "lookahead image narrower than the tile count");
    require(max_across_track_deg >= 0.0, Errc::invalid_argument,
            "max_across_track_deg must be >= 0");

    const double width_km = product.width * product.gsd_km;

    std::vector<TileScore> scores;
    scores.reserve(static_cast<std::size_t>(n_tiles));
    for (int t = 0; t < n_tiles; ++t) {
        TileScore ts;
        ts.tile_index = t;

        // Continuous strip center, exactly zero for the middle tile.
        const double center_frac = (t + 0.5) / n_tiles - 0.5;
        const double center_km = product.origin_across_km + width_km * (0.5 + center_frac);
        ts.across_track_offset_deg =
            std::atan(center_km / orbit.altitude_km) * kRadToDeg;
        ts.reachable = std::abs(ts.across_track_offset_deg) <= max_across_track_deg;

        std::uint32_t col_lo = 0, col_hi = 0;
        tile_columns(product.width, n_tiles, t, col_lo, col_hi);

        switch (product.policy) {
            case Policy::cloud_avoid:
            case Policy::cloud_seek: {
                require(product.cloud.has_value(), Errc::invalid_argument,
                        "cloud policy requires a cloud mask in the product");
                ts.cloud_fraction = product.cloud->fraction_in(col_lo, col_hi);
                ts.score = product.policy == Policy::cloud_avoid
                               ? 1.0 - ts.cloud_fraction
                               : ts.cloud_fraction;
                break;
            }
            case Policy::thermal_hunt: {
                double best = 0.0;
                for (const auto& det : product.detections)
                    if (det.col >= col_lo && det.col < col_hi)
                        best = std::max(best, det.score);
                ts.score = best;
                break;
            }
        }
        scores.push_back(ts);
    }
    return scores;
}

PointingCommand select_target(const std::vector<TileScore>& scores, Policy policy,
                              double along_track_slew_deg) {
    require(along_track_slew_deg >= 40.0 && along_track_slew_deg <= 50.0,
            Errc::invalid_argument,
            "along-track slew must be in [40, 50] deg for the configured lookahead");

    PointingCommand cmd;
    cmd.along_track_slew_deg = along_track_slew_deg;

    const TileScore* best = nullptr;
    for (const TileScore& ts : scores) {
        if (!ts.reachable) continue;
        if (!best) {
            best = &ts;
            continue;
        }
        const bool better =
            ts.score > best->score ||
            (ts.score == best->score &&
             (std::abs(ts.across_track_offset_deg) <
                  std::abs(best->across_track_offset_deg) ||
              (std::abs(ts.across_track_offset_deg) ==
                   std::abs(best->across_track_offset_deg) &&
               ts.tile_index < best->tile_index)));
        if (better) best = &ts;
    }

    if (!best || (policy == Policy::thermal_hunt && best->score <= 0.0)) {
        cmd.fallback = true;
        cmd.across_track_deg = 0.0;
        return cmd;
    }
    cmd.across_track_deg = best->across_track_offset_deg;
    return cmd;
}

} // namespace dtsim::targeting
