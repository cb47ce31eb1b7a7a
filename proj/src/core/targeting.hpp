// Converts lookahead analysis products into an across-track tile choice and
// a pointing command under agility limits.
#pragma once

#include "core/analysis.hpp"
#include "core/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dtsim::targeting {

enum class Policy { cloud_avoid, cloud_seek, thermal_hunt };

Policy policy_from_string(const std::string& name);
std::string to_string(Policy policy);

// Analysis results positioned over the lookahead image footprint.
struct AnalysisProduct {
    std::uint32_t width = 0;  // pixels across track
    std::uint32_t height = 0; // pixels along track
    double gsd_km = 1.0;
    double origin_across_km = 0.0;
    Policy policy = Policy::cloud_avoid;
    std::optional<analysis::CloudMask> cloud;
    std::vector<analysis::ThermalDetection> detections;
};

struct TileScore {
    int tile_index = 0;
    double across_track_offset_deg = 0.0; // pointing angle to the tile center
    double score = 0.0;
    double cloud_fraction = 0.0; // meaningful for cloud policies
    bool reachable = true;
};

struct PointingCommand {
    double across_track_deg = 0.0;
    double along_track_slew_deg = 0.0; // lookahead angle back to near nadir
    bool fallback = false;             // true = default nadir
};

// Partitions the lookahead image into n_tiles equal across-track strips and
// scores each per policy (cloud-avoid: 1 - cloud fraction; cloud-seek: cloud
// fraction; thermal: max detection score in the strip, 0 if none). Offsets
// come from flat-Earth geometry of the strip centers; strips steeper than
// max_across_track_deg are flagged unreachable. n_tiles must be odd so the
// nadir strip is always a choice.
std::vector<TileScore> tile_scores(const AnalysisProduct& product, int n_tiles,
                                   double max_across_track_deg,
                                   const geometry::OrbitConfig& orbit);

// Argmax score over reachable tiles; ties prefer the smallest across-track
// offset magnitude, then the lowest tile index. Thermal products with all
// scores zero, and score lists with no reachable tile, fall back to nadir.
PointingCommand select_target(const std::vector<TileScore>& scores, Policy policy,
                              double along_track_slew_deg);

// Pixel column range [lo, hi) of one tile strip.
void tile_columns(std::uint32_t width, int n_tiles, int tile_index,
                  std::uint32_t& col_lo, std::uint32_t& col_hi);

} // namespace dtsim::targeting
