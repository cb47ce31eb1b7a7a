// Mission configuration: a flat, sectioned key=value file with eagerly
// validated, field-precise errors. Unknown sections or keys are hard errors
// so threshold typos cannot slip through silently.
#pragma once

#include "core/executor.hpp"
#include "core/geometry.hpp"
#include "core/sensor.hpp"
#include "core/targeting.hpp"

#include <cstdint>
#include <string>

namespace dtsim::mission {

struct SceneParams {
    std::uint32_t width = 128;
    std::uint32_t height = 128;
    double gsd_km = 0.5;
    double coverage = 0.5;        // cloud scenes
    double correlation_px = 32.0; // cloud scenes
    std::uint32_t n_hotspots = 2; // thermal scenes
    double hotspot_sigma_px = 3.0;
    double background_level = 0.2;
};

struct MissionConfig {
    geometry::OrbitConfig orbit;
    double lookahead_angle_deg = 45.0;
    double margin_s = 5.0;
    bool overlap = true;

    targeting::Policy policy = targeting::Policy::cloud_avoid;
    double t_bright = 0.6;
    double t_sat = 0.2;
    double t_hot = 0.8;
    double t_ratio = 2.0;
    double cloud_free_threshold = 0.1;
    double stretch_p_low = 1.0;
    double stretch_p_high = 99.0;
    double hotspot_match_radius_px = 3.0;

    int n_tiles = 5;
    double max_across_track_deg = 30.0;

    executor::SpacecraftAgility agility;
    executor::PhaseBudget budgets;
    sensor::ReadoutModel readout;
    int decimation = 1;
    bool smear = false;

    SceneParams scene;

    std::uint32_t n_cycles = 100;
    std::uint64_t seed = 42;
    int workers = 1;

    std::string log_path = "dt_events.jsonl";
    std::string metrics_path = "dt_metrics.csv";

    // Applies one "section.key" assignment; unknown keys are bad_config
    // errors. `where` names the source (file:line or CLI flag) for messages.
    void set(const std::string& dotted_key, const std::string& value,
             const std::string& where);

    // Checks every module precondition up front.
    void validate() const;

    executor::CycleParams cycle_params() const;

    static MissionConfig from_file(const std::string& path);
    static MissionConfig from_string(const std::string& text,
                                     const std::string& source_name = "<config>");

    // A config file with every key at its default value, as documentation.
    static std::string example_file();
};

} // namespace dtsim::mission
