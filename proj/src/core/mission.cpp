#include "core/mission.hpp"

#include "core/errors.hpp"
#include "core/rng.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

namespace dtsim::mission {

using executor::CycleRecord;
using nlohmann::ordered_json;

namespace {

// Shortest round-trip decimal form; locale-independent and byte-stable.
std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

ordered_json header_json(const MissionConfig& config) {
    ordered_json j;
    j["type"] = "header";
    j["format_version"] = 1;
    j["policy"] = targeting::to_string(config.policy);
    j["cycles"] = config.n_cycles;
    j["seed"] = config.seed;
    j["cloud_free_threshold"] = config.cloud_free_threshold;
    j["lookahead_angle_deg"] = config.lookahead_angle_deg;
    j["overlap"] = config.overlap;
    j["tiles"] = config.n_tiles;
    return j;
}

CycleRecord failed_record(const MissionConfig& config, std::uint64_t cycle_id,
                          std::uint64_t seed, executor::CycleMode mode,
                          const std::string& what) {
    CycleRecord rec;
    rec.cycle_id = cycle_id;
    rec.mode = mode == executor::CycleMode::dt ? "dt" : "baseline";
    rec.seed = seed;
    rec.policy = targeting::to_string(config.policy);
    rec.chosen_tile = (config.n_tiles - 1) / 2;
    rec.fallback = true;
    rec.error = what;
    return rec;
}

} // namespace

scene::GroundTruthScene build_scene(const MissionConfig& config, std::uint64_t cycle_seed) {
    scene::GroundTruthScene gt;
    const SceneParams& sp = config.scene;
    if (config.policy == targeting::Policy::thermal_hunt) {
        scene::ThermalScene ts = scene::generate_thermal_scene(
            cycle_seed, sp.width, sp.height, sp.n_hotspots, sp.hotspot_sigma_px,
            sp.background_level);
        gt.image = std::move(ts.image);
        gt.hotspots = std::move(ts.hotspots);
    } else {
        Raster opacity = scene::generate_cloud_field(cycle_seed, sp.width, sp.height,
                                                     sp.coverage, sp.correlation_px);
        gt.image = scene::render_cloud_scene(opacity);
        gt.cloud_opacity = std::move(opacity);
    }
    // Center the scene across track on the ground track.
    for (Raster* r :
         {&gt.image, gt.cloud_opacity ? &*gt.cloud_opacity : nullptr}) {
        if (!r) continue;
        r->gsd_km = sp.gsd_km;
        r->origin_along_km = 0.0;
        r->origin_across_km = -0.5 * sp.width * sp.gsd_km;
    }
    return gt;
}

MissionMetrics compute_metrics(const std::vector<CycleRecord>& records,
                               double cloud_free_threshold) {
    MissionMetrics m;
    std::uint32_t dt_count = 0, baseline_count = 0;
    std::uint32_t dt_cloud_free = 0, baseline_cloud_free = 0;
    std::uint64_t dt_hits = 0, dt_truth = 0, baseline_hits = 0, baseline_truth = 0;
    double slack_sum = 0.0;

    for (const CycleRecord& rec : records) {
        const bool ok = rec.error.empty();
        if (rec.mode == "dt") {
            ++dt_count;
            if (ok && rec.schedule.feasible) ++m.cycles_feasible;
            if (ok && rec.capture_cloud_fraction < cloud_free_threshold) ++dt_cloud_free;
            dt_hits += rec.hotspots_matched;
            dt_truth += rec.hotspots_total;
            if (ok) slack_sum += rec.slack_s;
        } else {
            ++baseline_count;
            if (ok && rec.capture_cloud_fraction < cloud_free_threshold)
                ++baseline_cloud_free;
            baseline_hits += rec.hotspots_matched;
            baseline_truth += rec.hotspots_total;
        }
    }
    m.cycles_total = dt_count;
    if (dt_count > 0) {
        m.dt_cloud_free_fraction = static_cast<double>(dt_cloud_free) / dt_count;
        m.mean_timeline_slack_s = slack_sum / dt_count;
    }
    if (baseline_count > 0)
        m.baseline_cloud_free_fraction =
            static_cast<double>(baseline_cloud_free) / baseline_count;
    if (dt_truth > 0)
        m.dt_hotspot_recall = static_cast<double>(dt_hits) / static_cast<double>(dt_truth);
    if (baseline_truth > 0)
        m.baseline_hotspot_recall =
            static_cast<double>(baseline_hits) / static_cast<double>(baseline_truth);
    return m;
}

std::string metrics_csv(const MissionMetrics& m) {
    std::ostringstream out;
    out << "cycles_total,cycles_feasible,dt_cloud_free_fraction,"
           "baseline_cloud_free_fraction,dt_hotspot_recall,baseline_hotspot_recall,"
           "mean_timeline_slack_s\n";
    out << m.cycles_total << ',' << m.cycles_feasible << ','
        << format_double(m.dt_cloud_free_fraction) << ','
        << format_double(m.baseline_cloud_free_fraction) << ','
        << format_double(m.dt_hotspot_recall) << ','
        << format_double(m.baseline_hotspot_recall) << ','
        << format_double(m.mean_timeline_slack_s) << '\n';
    return out.str();
}

MissionMetrics run_mission(const MissionConfig& config) {
    config.validate();
    const executor::CycleParams params = config.cycle_params();
    const std::uint32_t n = config.n_cycles;

    // One (dt, baseline) pair per cycle; slots are written by exactly one
    // worker each, then flushed in index order.
    std::vector<std::pair<CycleRecord, CycleRecord>> results(n);
    std::atomic<std::uint32_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::uint32_t i = next.fetch_add(1);
            if (i >= n) return;
            const std::uint64_t cycle_seed = mix_seed(config.seed, i);
            try {
                const scene::GroundTruthScene gt = build_scene(config, cycle_seed);
                results[i].first = executor::run_cycle(gt, config.orbit, params, i,
                                                       cycle_seed, executor::CycleMode::dt);
                results[i].second =
                    executor::run_cycle(gt, config.orbit, params, i, cycle_seed,
                                        executor::CycleMode::baseline);
            } catch (const DtError& e) {
                results[i].first = failed_record(config, i, cycle_seed,
                                                 executor::CycleMode::dt, e.what());
                results[i].second = failed_record(config, i, cycle_seed,
                                                  executor::CycleMode::baseline, e.what());
            }
        }
    };

    const int n_workers = std::min<int>(config.workers, static_cast<int>(n));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::ofstream log(config.log_path, std::ios::binary | std::ios::trunc);
    if (!log) fail(Errc::io_error, "cannot open event log for writing: " + config.log_path);
    log << header_json(config).dump() << '\n';
    std::vector<CycleRecord> flat;
    flat.reserve(2ull * n);
    for (std::uint32_t i = 0; i < n; ++i) {
        log << results[i].first.to_json().dump() << '\n';
        log << results[i].second.to_json().dump() << '\n';
        flat.push_back(std::move(results[i].first));
        flat.push_back(std::move(results[i].second));
    }
    if (!log.flush()) fail(Errc::io_error, "event log write failed: " + config.log_path);

    const MissionMetrics metrics = compute_metrics(flat, config.cloud_free_threshold);
    std::ofstream csv(config.metrics_path, std::ios::binary | std::ios::trunc);
    if (!csv) fail(Errc::io_error, "cannot open metrics file for writing: " + config.metrics_path);
    csv << metrics_csv(metrics);
    if (!csv.flush()) fail(Errc::io_error, "metrics write failed: " + config.metrics_path);
    return metrics;
}

ReportResult report(const std::string& log_path, const std::string& metrics_out_path) {
    std::ifstream in(log_path, std::ios::binary);
    if (!in) fail(Errc::io_error, "cannot open event log: " + log_path);

    double cloud_free_threshold = 0.1;
    std::string policy = "unknown";
    std::vector<CycleRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            fail(Errc::parse_error, log_path + ":" + std::to_string(line_no) +
                                        ": malformed JSON record: " + e.what());
        }
        try {
            const std::string type = j.at("type").get<std::string>();
            if (type == "header") {
                cloud_free_threshold = j.at("cloud_free_threshold").get<double>();
                policy = j.at("policy").get<std::string>();
            } else if (type == "cycle") {
                records.push_back(CycleRecord::from_json(j));
            } else {
                fail(Errc::parse_error, log_path + ":" + std::to_string(line_no) +
                                            ": unknown record type '" + type + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            fail(Errc::parse_error, log_path + ":" + std::to_string(line_no) +
                                        ": bad record field: " + e.what());
        }
    }

    ReportResult result;
    result.metrics = compute_metrics(records, cloud_free_threshold);

    std::uint32_t failed = 0, fallbacks = 0;
    for (const CycleRecord& r : records)
        if (r.mode == "dt") {
            if (!r.error.empty()) ++failed;
            if (r.fallback) ++fallbacks;
        }

    const MissionMetrics& m = result.metrics;
    std::ostringstream s;
    s << "mission report (" << log_path << ")\n"
      << "  policy:                  " << policy << "\n"
      << "  cycles:                  " << m.cycles_total << " total, "
      << m.cycles_feasible << " feasible, " << fallbacks << " fallback, " << failed
      << " failed\n"
      << "  cloud-free captures:     dt " << format_double(m.dt_cloud_free_fraction)
      << " vs baseline " << format_double(m.baseline_cloud_free_fraction) << "\n"
      << "  hotspot recall:          dt " << format_double(m.dt_hotspot_recall)
      << " vs baseline " << format_double(m.baseline_hotspot_recall) << "\n"
      << "  mean timeline slack [s]: " << format_double(m.mean_timeline_slack_s) << "\n";
    result.summary = s.str();

    if (!metrics_out_path.empty()) {
        std::ofstream csv(metrics_out_path, std::ios::binary | std::ios::trunc);
        if (!csv) fail(Errc::io_error, "cannot open metrics file for writing: " + metrics_out_path);
        csv << metrics_csv(result.metrics);
        if (!csv.flush()) fail(Errc::io_error, "metrics write failed: " + metrics_out_path);
    }
    return result;
}

} // namespace dtsim::mission
