// DT cycle state machine: phase scheduling against the lead-time deadline,
// trapezoidal slew model, and early-slew overlap optimization.
#pragma once

#include "core/analysis.hpp"
#include "core/geometry.hpp"
#include "core/scene.hpp"
#include "core/sensor.hpp"
#include "core/targeting.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace dtsim::executor {

struct SpacecraftAgility {
    double max_rate_deg_s = 2.0;
    double max_accel_deg_s2 = 1.0;
    double settle_time_s = 1.0;

    void validate() const;
};

struct PhaseBudget {
    double acquire_s = 2.0;
    double transfer_s = 0.0; // normally computed from the readout model
    double analyze_s = 5.0;
    double decide_s = 0.5;
    double nadir_acquire_s = 2.0;
    double nadir_analyze_s = 5.0;
    double downlink_s = 3.0;

    void validate() const;
};

struct PhaseSpan {
    std::string name;
    double start_s = 0.0;
    double end_s = 0.0;
};

struct CycleSchedule {
    std::vector<PhaseSpan> phases;
    double critical_path_s = 0.0; // end of all pre-nadir work
    double deadline_s = 0.0;      // lead time minus margin
    bool feasible = false;
    bool overlap_used = false;

    const PhaseSpan* find(const std::string& name) const;
};

// Bang-bang trapezoid plus settle time. Rate-limited maneuvers take
// delta/rate + rate/accel, short ones 2*sqrt(delta/accel); delta = 0 costs
// settle only.
double slew_time(double delta_deg, const SpacecraftAgility& agility);

// The maneuver time alone, without the settle term (0 for delta = 0).
double slew_move_time(double delta_deg, const SpacecraftAgility& agility);

// Builds the phase schedule for one cycle. Serial mode runs acquire ->
// transfer -> analyze -> decide -> one combined slew of the vector angle
// sqrt(along^2 + across^2). Overlap mode starts the precomputable
// along-track component right after acquire and only the across-track
// component after decide; settle is applied once after the later of the two.
// Infeasibility is a result, not an error. Nadir acquire/analyze/downlink
// are appended at/after the nadir crossing.
CycleSchedule plan_cycle(const geometry::LookaheadGeometry& geom,
                         const PhaseBudget& budgets, const SpacecraftAgility& agility,
                         const targeting::PointingCommand& command, bool overlap,
                         double margin_s);

// Everything run_cycle needs besides the scene and orbit.
struct CycleParams {
    double lookahead_angle_deg = 45.0;
    bool overlap = true;
    double margin_s = 5.0;
    targeting::Policy policy = targeting::Policy::cloud_avoid;
    double t_bright = 0.6;
    double t_sat = 0.2;
    double t_hot = 0.8;
    double t_ratio = 2.0;
    double stretch_p_low = 1.0;
    double stretch_p_high = 99.0;
    int n_tiles = 5;
    double max_across_track_deg = 30.0;
    SpacecraftAgility agility;
    PhaseBudget budgets;
    sensor::ReadoutModel readout;
    int decimation = 1;
    bool smear = false;
    double hotspot_match_radius_px = 3.0;
};

// One event-log record; a (cycle, mode) pair maps to exactly one record.
// Field names and order are fixed so logs are byte-stable.
struct CycleRecord {
    std::uint64_t cycle_id = 0;
    std::string mode = "dt"; // "dt" or "baseline"
    std::uint64_t seed = 0;
    std::string policy;
    std::uint64_t scene_hash = 0;
    bool has_geometry = false;
    geometry::LookaheadGeometry geometry;
    CycleSchedule schedule;
    std::vector<targeting::TileScore> tiles;
    int chosen_tile = 0;
    bool fallback = false;
    bool smear_requested = false;
    double slack_s = 0.0;
    double capture_cloud_fraction = 0.0;
    std::vector<analysis::ThermalDetection> capture_detections;
    std::uint32_t hotspots_total = 0;
    std::uint32_t hotspots_matched = 0;
    std::string error; // empty unless the cycle failed

    nlohmann::ordered_json to_json() const;
    static CycleRecord from_json(const nlohmann::json& j);
};

enum class CycleMode { dt, baseline };

// Runs one full cycle on a ground-truth scene: lookahead capture at the
// configured angle (transfer time from the readout model), analysis,
// targeting with decision-time slew feasibility, scheduling, then nadir
// capture of the commanded tile (nadir fallback when infeasible). Baseline
// mode skips the lookahead entirely and always captures the center tile.
// Capture quality metrics (cloud fraction, hotspot matches) are scored
// against the scene's ground truth.
CycleRecord run_cycle(const scene::GroundTruthScene& scene,
                      const geometry::OrbitConfig& orbit, const CycleParams& params,
                      std::uint64_t cycle_id, std::uint64_t seed,
                      CycleMode mode = CycleMode::dt);

} // namespace dtsim::executor
