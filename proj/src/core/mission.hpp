// Mission driver: runs DT and baseline cycles over seeded scenes, writes the
// JSON Lines event log and CSV metrics, and recomputes metrics from logs.
//
// Determinism contract: the same MissionConfig (including seed) produces
// byte-identical log and metrics files regardless of worker count. Cycle
// results are buffered and written strictly in cycle-index order.
#pragma once

#include "core/config.hpp"
#include "core/executor.hpp"
#include "core/scene.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dtsim::mission {

struct MissionMetrics {
    std::uint32_t cycles_total = 0;
    std::uint32_t cycles_feasible = 0;
    double dt_cloud_free_fraction = 0.0;
    double baseline_cloud_free_fraction = 0.0;
    double dt_hotspot_recall = 0.0;
    double baseline_hotspot_recall = 0.0;
    double mean_timeline_slack_s = 0.0;

    bool operator==(const MissionMetrics&) const = default;
};

// Builds the ground-truth scene for one cycle; the scene family follows the
// policy (cloud scenes for cloud policies, thermal scenes for thermal_hunt).
scene::GroundTruthScene build_scene(const MissionConfig& config, std::uint64_t cycle_seed);

// Runs the mission: for each cycle, a DT record and a baseline record on the
// identical scene. Writes the event log (JSONL) and metrics (CSV) to the
// config's output paths and returns the aggregated metrics.
MissionMetrics run_mission(const MissionConfig& config);

// Aggregates metrics from records in log order. A capture is cloud-free iff
// its truth cloud fraction < cloud_free_threshold; failed cycles count in
// the denominator but never as cloud-free or feasible.
MissionMetrics compute_metrics(const std::vector<executor::CycleRecord>& records,
                               double cloud_free_threshold);

struct ReportResult {
    MissionMetrics metrics;
    std::string summary; // human-readable
};

// Recomputes MissionMetrics from an event log. Reproduces run_mission's
// metrics exactly; malformed records raise parse errors naming the line.
// When metrics_out_path is non-empty the CSV is (re)written there.
ReportResult report(const std::string& log_path, const std::string& metrics_out_path = "");

// Fixed-header CSV serialization of the metrics (one data row).
std::string metrics_csv(const MissionMetrics& metrics);

} // namespace dtsim::mission
