#include "core/executor.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dtsim::executor {

using nlohmann::ordered_json;

void SpacecraftAgility::validate() const {
    require(max_rate_deg_s > 0.0, Errc::invalid_argument,
            "agility: max_rate_deg_s must be > 0");
    require(max_accel_deg_s2 > 0.0, Errc::invalid_argument,
            "agility: max_accel_deg_s2 must be > 0");
    require(settle_time_s >= 0.0, Errc::invalid_argument,
            "agility: settle_time_s must be >= 0");
}

void PhaseBudget::validate() const {
    for (double v : {acquire_s, transfer_s, analyze_s, decide_s, nadir_acquire_s,
                     nadir_analyze_s, downlink_s})
        require(v >= 0.0, Errc::invalid_argument, "phase budgets must be >= 0");
}

const PhaseSpan* CycleSchedule::find(const std::string& name) const {
    for (const PhaseSpan& p : phases)
        if (p.name == name) return &p;
    return nullptr;
}

double slew_move_time(double delta_deg, const SpacecraftAgility& agility) {
    agility.validate();
    require(delta_deg >= 0.0, Errc::invalid_argument, "slew angle must be >= 0");
    if (delta_deg == 0.0) return 0.0;
    const double w = agility.max_rate_deg_s;
    const double a = agility.max_accel_deg_s2;
    const double boundary = w * w / a; // angle at which peak rate is reached
    if (delta_deg >= boundary) return delta_deg / w + w / a;
    return 2.0 * std::sqrt(delta_deg / a);
}

double slew_time(double delta_deg, const SpacecraftAgility& agility) {
    return slew_move_time(delta_deg, agility) + agility.settle_time_s;
}

CycleSchedule plan_cycle(const geometry::LookaheadGeometry& geom,
                         const PhaseBudget& budgets, const SpacecraftAgility& agility,
                         const targeting::PointingCommand& command, bool overlap,
                         double margin_s) {
    budgets.validate();
    agility.validate();
    require(margin_s >= 0.0, Errc::invalid_argument, "margin_s must be >= 0");

    const double along = std::abs(command.along_track_slew_deg);
    const double across = std::abs(command.across_track_deg);

    CycleSchedule s;
    s.overlap_used = overlap;
    s.deadline_s = geom.lead_time_s - margin_s;

    const double acquire_end = budgets.acquire_s;
    const double transfer_end = acquire_end + budgets.transfer_s;
    const double analyze_end = transfer_end + budgets.analyze_s;
    const double decide_end = analyze_end + budgets.decide_s;

    s.phases.push_back({"acquire", 0.0, acquire_end});
    s.phases.push_back({"transfer", acquire_end, transfer_end});
    s.phases.push_back({"analyze", transfer_end, analyze_end});
    s.phases.push_back({"decide", analyze_end, decide_end});

    double settle_start = 0.0;
    if (overlap) {
        // The along-track return is known before the analysis finishes, so
        // that component starts as soon as the lookahead image is acquired.
        const double along_end = acquire_end + slew_move_time(along, agility);
        const double across_end = decide_end + slew_move_time(across, agility);
        s.phases.push_back({"slew_along", acquire_end, along_end});
        s.phases.push_back({"slew_across", decide_end, across_end});
        settle_start = std::max(along_end, across_end);
    } else {
        const double combined = std::sqrt(along * along + across * across);
        const double slew_end = decide_end + slew_move_time(combined, agility);
        s.phases.push_back({"slew", decide_end, slew_end});
        settle_start = slew_end;
    }
    const double settle_end = settle_start + agility.settle_time_s;
    s.phases.push_back({"settle", settle_start, settle_end});

    s.critical_path_s = settle_end;
    s.feasible = s.critical_path_s <= s.deadline_s;

    // Nadir-side work happens at/after the nadir crossing; it is not part of
    // the pre-nadir budget.
    const double nadir_start = std::max(geom.lead_time_s, settle_end);
    const double nacq_end = nadir_start + budgets.nadir_acquire_s;
    const double nana_end = nacq_end + budgets.nadir_analyze_s;
    s.phases.push_back({"nadir_acquire", nadir_start, nacq_end});
    s.phases.push_back({"nadir_analyze", nacq_end, nana_end});
    s.phases.push_back({"downlink", nana_end, nana_end + budgets.downlink_s});
    return s;
}

namespace {

geometry::GroundFootprint full_scene_footprint(const Raster& scene) {
    geometry::GroundFootprint fp;
    fp.along_track_extent_km = scene.along_extent_km();
    fp.across_track_extent_km = scene.across_extent_km();
    fp.along_track_center_km = scene.origin_along_km + fp.along_track_extent_km / 2.0;
    fp.across_track_center_km = scene.origin_across_km + fp.across_track_extent_km / 2.0;
    return fp;
}

geometry::GroundFootprint tile_footprint(const Raster& scene, int n_tiles, int tile) {
    std::uint32_t col_lo = 0, col_hi = 0;
    targeting::tile_columns(scene.width, n_tiles, tile, col_lo, col_hi);
    geometry::GroundFootprint fp;
    fp.along_track_extent_km = scene.along_extent_km();
    fp.along_track_center_km = scene.origin_along_km + fp.along_track_extent_km / 2.0;
    fp.across_track_extent_km = (col_hi - col_lo) * scene.gsd_km;
    fp.across_track_center_km =
        scene.origin_across_km + (col_lo + col_hi) / 2.0 * scene.gsd_km;
    return fp;
}

double truth_cloud_fraction(const scene::GroundTruthScene& scene,
                            const sensor::CaptureWindow& w) {
    if (!scene.cloud_opacity) return 0.0;
    const Raster& op = *scene.cloud_opacity;
    std::size_t cloudy = 0;
    for (std::uint32_t r = w.row_lo; r < w.row_hi; ++r)
        for (std::uint32_t c = w.col_lo; c < w.col_hi; ++c)
            cloudy += op.at(0, r, c) > 0.5f ? 1 : 0;
    return static_cast<double>(cloudy) /
           (static_cast<double>(w.rows()) * w.cols());
}

std::uint32_t match_hotspots(const scene::GroundTruthScene& scene,
                             const sensor::CaptureWindow& w,
                             const std::vector<analysis::ThermalDetection>& detections,
                             double radius_px) {
    std::uint32_t matched = 0;
    for (const scene::Hotspot& hs : scene.hotspots) {
        bool hit = false;
        for (const auto& det : detections) {
            const double dr = static_cast<double>(w.row_lo + det.row) - hs.row;
            const double dc = static_cast<double>(w.col_lo + det.col) - hs.col;
            if (std::sqrt(dr * dr + dc * dc) <= radius_px) {
                hit = true;
                break;
            }
        }
        if (hit) ++matched;
    }
    return matched;
}

} // namespace

ordered_json CycleRecord::to_json() const {
    ordered_json j;
    j["type"] = "cycle";
    j["cycle_id"] = cycle_id;
    j["mode"] = mode;
    j["seed"] = seed;
    j["policy"] = policy;
    j["scene_hash"] = scene_hash;
    if (has_geometry) {
        j["geometry"] = {{"look_angle_deg", geometry.look_angle_deg},
                         {"central_angle_rad", geometry.central_angle_rad},
                         {"ground_distance_km", geometry.ground_distance_km},
                         {"lead_time_s", geometry.lead_time_s}};
    } else {
        j["geometry"] = nullptr;
    }
    ordered_json phases = ordered_json::array();
    for (const PhaseSpan& p : schedule.phases)
        phases.push_back({{"phase", p.name}, {"start_s", p.start_s}, {"end_s", p.end_s}});
    j["phases"] = std::move(phases);
    j["deadline_s"] = schedule.deadline_s;
    j["critical_path_s"] = schedule.critical_path_s;
    j["feasible"] = schedule.feasible;
    j["overlap_used"] = schedule.overlap_used;
    ordered_json tiles_json = ordered_json::array();
    for (const auto& t : tiles)
        tiles_json.push_back({{"tile", t.tile_index},
                              {"offset_deg", t.across_track_offset_deg},
                              {"score", t.score},
                              {"cloud_fraction", t.cloud_fraction},
                              {"reachable", t.reachable}});
    j["tile_scores"] = std::move(tiles_json);
    j["chosen_tile"] = chosen_tile;
    j["fallback"] = fallback;
    j["smear_requested"] = smear_requested;
    j["slack_s"] = slack_s;
    ordered_json dets = ordered_json::array();
    for (const auto& d : capture_detections)
        dets.push_back({{"row", d.row}, {"col", d.col}, {"score", d.score}});
    j["capture"] = {{"cloud_fraction", capture_cloud_fraction},
                    {"detections", std::move(dets)},
                    {"hotspots_total", hotspots_total},
                    {"hotspots_matched", hotspots_matched}};
    j["error"] = error;
    return j;
}

CycleRecord CycleRecord::from_json(const nlohmann::json& j) {
    CycleRecord r;
    r.cycle_id = j.at("cycle_id").get<std::uint64_t>();
    r.mode = j.at("mode").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.policy = j.at("policy").get<std::string>();
    r.scene_hash = j.at("scene_hash").get<std::uint64_t>();
    if (!j.at("geometry").is_null()) {
        r.has_geometry = true;
        const auto& g = j.at("geometry");
        r.geometry.look_angle_deg = g.at("look_angle_deg").get<double>();
        r.geometry.central_angle_rad = g.at("central_angle_rad").get<double>();
        r.geometry.ground_distance_km = g.at("ground_distance_km").get<double>();
        r.geometry.lead_time_s = g.at("lead_time_s").get<double>();
    }
    for (const auto& p : j.at("phases"))
        r.schedule.phases.push_back({p.at("phase").get<std::string>(),
                                     p.at("start_s").get<double>(),
                                     p.at("end_s").get<double>()});
    r.schedule.deadline_s = j.at("deadline_s").get<double>();
    r.schedule.critical_path_s = j.at("critical_path_s").get<double>();
    r.schedule.feasible = j.at("feasible").get<bool>();
    r.schedule.overlap_used = j.at("overlap_used").get<bool>();
    for (const auto& t : j.at("tile_scores")) {
        targeting::TileScore ts;
        ts.tile_index = t.at("tile").get<int>();
        ts.across_track_offset_deg = t.at("offset_deg").get<double>();
        ts.score = t.at("score").get<double>();
        ts.cloud_fraction = t.at("cloud_fraction").get<double>();
        ts.reachable = t.at("reachable").get<bool>();
        r.tiles.push_back(ts);
    }
    r.chosen_tile = j.at("chosen_tile").get<int>();
    r.fallback = j.at("fallback").get<bool>();
    r.smear_requested = j.at("smear_requested").get<bool>();
    r.slack_s = j.at("slack_s").get<double>();
    const auto& cap = j.at("capture");
    r.capture_cloud_fraction = cap.at("cloud_fraction").get<double>();
    for (const auto& d : cap.at("detections"))
        r.capture_detections.push_back({d.at("row").get<std::uint32_t>(),
                                        d.at("col").get<std::uint32_t>(),
                                        d.at("score").get<double>()});
    r.hotspots_total = cap.at("hotspots_total").get<std::uint32_t>();
    r.hotspots_matched = cap.at("hotspots_matched").get<std::uint32_t>();
    r.error = j.at("error").get<std::string>();
    return r;
}

CycleRecord run_cycle(const scene::GroundTruthScene& scene,
                      const geometry::OrbitConfig& orbit, const CycleParams& params,
                      std::uint64_t cycle_id, std::uint64_t seed, CycleMode mode) {
    require(scene.image.bands == 4, Errc::dimension_mismatch,
            "run_cycle expects a 4-band scene");

    CycleRecord rec;
    rec.cycle_id = cycle_id;
    rec.mode = mode == CycleMode::dt ? "dt" : "baseline";
    rec.seed = seed;
    rec.policy = targeting::to_string(params.policy);
    rec.scene_hash = raster_hash(scene.image);
    rec.smear_requested = params.smear;
    rec.hotspots_total = static_cast<std::uint32_t>(scene.hotspots.size());

    const int center_tile = (params.n_tiles - 1) / 2;

    auto score_capture = [&](int tile) {
        const auto fp = tile_footprint(scene.image, params.n_tiles, tile);
        const auto window = sensor::window_for(scene.image, fp);
        sensor::CaptureRequest req;
        req.footprint = fp; // nadir capture: full resolution, all bands
        const Raster capture = sensor::capture(scene.image, req);
        rec.capture_cloud_fraction = truth_cloud_fraction(scene, window);
        if (params.policy == targeting::Policy::thermal_hunt) {
            rec.capture_detections =
                analysis::thermal_anomalies(capture, params.t_hot, params.t_ratio);
            rec.hotspots_matched = match_hotspots(scene, window, rec.capture_detections,
                                                  params.hotspot_match_radius_px);
        }
    };

    if (mode == CycleMode::baseline) {
        // Control strategy: always image nadir, no lookahead, no deadline.
        rec.chosen_tile = center_tile;
        PhaseBudget b = params.budgets;
        const double nacq_end = b.nadir_acquire_s;
        const double nana_end = nacq_end + b.nadir_analyze_s;
        rec.schedule.phases.push_back({"nadir_acquire", 0.0, nacq_end});
        rec.schedule.phases.push_back({"nadir_analyze", nacq_end, nana_end});
        rec.schedule.phases.push_back({"downlink", nana_end, nana_end + b.downlink_s});
        rec.schedule.feasible = true;
        score_capture(center_tile);
        return rec;
    }

    rec.has_geometry = true;
    rec.geometry = geometry::lead_time(orbit, params.lookahead_angle_deg);

    // Lookahead capture of the whole scene at the configured decimation; the
    // transfer budget comes from the readout model, not from config.
    sensor::CaptureRequest look_req;
    look_req.footprint = full_scene_footprint(scene.image);
    look_req.decimation = params.decimation;
    look_req.smear = params.smear;
    const Raster lookahead = sensor::capture(scene.image, look_req);

    PhaseBudget budgets = params.budgets;
    budgets.transfer_s =
        sensor::readout_time(lookahead.pixel_count(), lookahead.bands, params.readout);

    targeting::AnalysisProduct product;
    product.width = lookahead.width;
    product.height = lookahead.height;
    product.gsd_km = lookahead.gsd_km;
    product.origin_across_km = lookahead.origin_across_km;
    product.policy = params.policy;
    if (params.policy == targeting::Policy::thermal_hunt) {
        product.detections =
            analysis::thermal_anomalies(lookahead, params.t_hot, params.t_ratio);
    } else {
        const Raster stretched =
            analysis::stretch(lookahead, params.stretch_p_low, params.stretch_p_high);
        product.cloud = analysis::cloud_mask(stretched, params.t_bright, params.t_sat);
    }

    rec.tiles = targeting::tile_scores(product, params.n_tiles,
                                       params.max_across_track_deg, orbit);

    // Decision-time reachability: a tile is only reachable if its cycle plan
    // actually meets the deadline, not just the static angle cap.
    for (auto& tile : rec.tiles) {
        if (!tile.reachable) continue;
        targeting::PointingCommand probe;
        probe.across_track_deg = tile.across_track_offset_deg;
        probe.along_track_slew_deg = params.lookahead_angle_deg;
        const CycleSchedule plan = plan_cycle(rec.geometry, budgets, params.agility,
                                              probe, params.overlap, params.margin_s);
        if (!plan.feasible) tile.reachable = false;
    }

    targeting::PointingCommand cmd =
        targeting::select_target(rec.tiles, params.policy, params.lookahead_angle_deg);
    rec.fallback = cmd.fallback;
    rec.chosen_tile = center_tile;
    if (!cmd.fallback) {
        for (const auto& tile : rec.tiles)
            if (tile.reachable && tile.across_track_offset_deg == cmd.across_track_deg) {
                rec.chosen_tile = tile.tile_index;
                break;
            }
    }

    rec.schedule = plan_cycle(rec.geometry, budgets, params.agility, cmd,
                              params.overlap, params.margin_s);
    rec.slack_s = rec.schedule.deadline_s - rec.schedule.critical_path_s;

    // Infeasible plans degrade to the default nadir capture.
    if (!rec.schedule.feasible && !rec.fallback) {
        rec.fallback = true;
        rec.chosen_tile = center_tile;
    }
    score_capture(rec.chosen_tile);
    return rec;
}

} // namespace dtsim::executor
