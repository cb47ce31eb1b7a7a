#include "core/config.hpp"

#include "core/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dtsim::mission {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, const std::string& where) {
    double out = 0.0;
    const char* end = value.data() + value.size();
    auto [p, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || p != end || !std::isfinite(out))
        fail(Errc::bad_config, where + ": expected a finite number, got '" + value + "'");
    return out;
}

std::int64_t parse_int(const std::string& value, const std::string& where) {
    std::int64_t out = 0;
    const char* end = value.data() + value.size();
    auto [p, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || p != end)
        fail(Errc::bad_config, where + ": expected an integer, got '" + value + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& value, const std::string& where) {
    std::uint64_t out = 0;
    const char* end = value.data() + value.size();
    auto [p, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || p != end)
        fail(Errc::bad_config, where + ": expected an unsigned integer, got '" + value + "'");
    return out;
}

bool parse_bool(const std::string& value, const std::string& where) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    fail(Errc::bad_config, where + ": expected true/false, got '" + value + "'");
}

} // namespace

void MissionConfig::set(const std::string& dotted_key, const std::string& value,
                        const std::string& where) {
    const auto msg = where + " (" + dotted_key + ")";
    const auto dot = dotted_key.find('.');
    require(dot != std::string::npos, Errc::bad_config,
            where + ": key '" + dotted_key + "' must be section.key");
    const std::string section = dotted_key.substr(0, dot);
    const std::string key = dotted_key.substr(dot + 1);

    if (section == "orbit") {
        if (key == "altitude_km") orbit.altitude_km = parse_double(value, msg);
        else if (key == "ground_speed_km_s") orbit.ground_speed_km_s = parse_double(value, msg);
        else if (key == "earth_radius_km") orbit.earth_radius_km = parse_double(value, msg);
        else fail(Errc::bad_config, where + ": unknown key 'orbit." + key + "'");
    } else if (section == "lookahead") {
        if (key == "angle_deg") lookahead_angle_deg = parse_double(value, msg);
        else if (key == "margin_s") margin_s = parse_double(value, msg);
        else if (key == "overlap") overlap = parse_bool(value, msg);
        else fail(Errc::bad_config, where + ": unknown key 'lookahead." + key + "'");
    } else if (section == "policy") {
        if (key == "name") policy = targeting::policy_from_string(value);
        else if (key == "t_bright") t_bright = parse_double(value, msg);
        else if (key == "t_sat") t_sat = parse_double(value, msg);
        else if (key == "t_hot") t_hot = parse_double(value, msg);
        else if (key == "t_ratio") t_ratio = parse_double(value, msg);
        else if (key == "cloud_free_threshold") cloud_free_threshold = parse_double(value, msg);
        else if (key == "stretch_p_low") stretch_p_low = parse_double(value, msg);
        else if (key == "stretch_p_high") stretch_p_high = parse_double(value, msg);
        else if (key == "hotspot_match_radius_px") hotspot_match_radius_px = parse_double(value, msg);
        else fail(Errc::bad_config, where + ": unknown key 'policy." + key + "'");
    } else if (section == "tiles") {
        if (key == "count") n_tiles = static_cast<int>(parse_int(value, msg));
        else if (key == "max_across_track_deg") max_across_track_deg = parse_double(value, msg);
        else fail(Errc::bad_config, where + ": unknown key 'tiles." + key + "'");
    } else if (section == "agility") {
        if (key == "max_rate_deg_s") agility.max_rate_deg_s = parse_double(value, msg);
        else if (key == "max_accel_deg_s2") agility.max_accel_deg_s2 = parse_double(value, msg);
        else if (key == "settle_time_s") agility.settle_time_s = parse_double(value, msg);
        else fail(Errc::bad_config, where + ": unknown key 'agility." + key + "'");
    } else if (section == "budgets") {
        if (key == "acquire_s") budgets.acquire_s = parse_double(value, msg);
        else if (key == "analyze_s") budgets.analyze_s = parse_double(value, msg);
        else if (key == "decide_s") budgets.decide_s = parse_double(value, msg);
        else if (key == "nadir_acquire_s") budgets.nadir_acquire_s = parse_double(value, msg);
        else if (key == "nadir_analyze_s") budgets.nadir_analyze_s = parse_double(value, msg);
        else if (key == "downlink_s") budgets.downlink_s = parse_double(value, msg);
        else fail(Errc::bad_config, where + ": unknown key 'budgets." + key + "'");
    } else if (section == "readout") {
        if (key == "bytes_per_sample") readout.bytes_per_sample = parse_double(value, msg);
        else if (key == "link_rate_bytes_s") readout.link_rate_bytes_s = parse_double(value, msg);
        else if (key == "fixed_overhead_s") readout.fixed_overhead_s = parse_double(value, msg);
        else fail(Errc::bad_config, where + ": unknown key 'readout." + key + "'");
    } else if (section == "sensor") {
        if (key == "decimation") decimation = static_cast<int>(parse_int(value, msg));
        else if (key == "smear") smear = parse_bool(value, msg);
        else fail(Errc::bad_config, where + ": unknown key 'sensor." + key + "'");
    } else if (section == "scene") {
        if (key == "width") scene.width = static_cast<std::uint32_t>(parse_int(value, msg));
        else if (key == "height") scene.height = static_cast<std::uint32_t>(parse_int(value, msg));
        else if (key == "gsd_km") scene.gsd_km = parse_double(value, msg);
        else if (key == "coverage") scene.coverage = parse_double(value, msg);
        else if (key == "correlation_px") scene.correlation_px = parse_double(value, msg);
        else if (key == "n_hotspots") scene.n_hotspots = static_cast<std::uint32_t>(parse_int(value, msg));
        else if (key == "hotspot_sigma_px") scene.hotspot_sigma_px = parse_double(value, msg);
        else if (key == "background_level") scene.background_level = parse_double(value, msg);
        else fail(Errc::bad_config, where + ": unknown key 'scene." + key + "'");
    } else if (section == "mission") {
        if (key == "cycles") n_cycles = static_cast<std::uint32_t>(parse_int(value, msg));
        else if (key == "seed") seed = parse_u64(value, msg);
        else if (key == "workers") workers = static_cast<int>(parse_int(value, msg));
        else fail(Errc::bad_config, where + ": unknown key 'mission." + key + "'");
    } else if (section == "output") {
        if (key == "log") log_path = value;
        else if (key == "metrics") metrics_path = value;
        else fail(Errc::bad_config, where + ": unknown key 'output." + key + "'");
    } else {
        fail(Errc::bad_config, where + ": unknown section '" + section + "'");
    }
}

void MissionConfig::validate() const {
    orbit.validate();
    agility.validate();
    budgets.validate();
    readout.validate();
    require(lookahead_angle_deg >= 40.0 && lookahead_angle_deg <= 50.0, Errc::bad_config,
            "lookahead.angle_deg must be in [40, 50] (the along-track return slew range)");
    require(margin_s >= 0.0, Errc::bad_config, "lookahead.margin_s must be >= 0");
    require(t_bright > 0.0 && t_bright < 1.0, Errc::bad_config,
            "policy.t_bright must be in (0, 1)");
    require(t_sat > 0.0 && t_sat <= 1.0, Errc::bad_config, "policy.t_sat must be in (0, 1]");
    require(t_hot > 0.0 && t_hot < 1.0, Errc::bad_config, "policy.t_hot must be in (0, 1)");
    require(t_ratio > 0.0, Errc::bad_config, "policy.t_ratio must be > 0");
    require(cloud_free_threshold >= 0.0 && cloud_free_threshold <= 1.0, Errc::bad_config,
            "policy.cloud_free_threshold must be in [0, 1]");
    require(stretch_p_low >= 0.0 && stretch_p_low < stretch_p_high && stretch_p_high <= 100.0,
            Errc::bad_config, "policy.stretch percentiles need 0 <= low < high <= 100");
    require(hotspot_match_radius_px > 0.0, Errc::bad_config,
            "policy.hotspot_match_radius_px must be > 0");
    require(n_tiles >= 1 && n_tiles % 2 == 1, Errc::bad_config,
            "tiles.count must be odd and >= 1");
    require(max_across_track_deg >= 0.0 && max_across_track_deg < 90.0, Errc::bad_config,
            "tiles.max_across_track_deg must be in [0, 90)");
    require(decimation >= 1, Errc::bad_config, "sensor.decimation must be >= 1");
    require(scene.width >= static_cast<std::uint32_t>(n_tiles) && scene.height >= 1,
            Errc::bad_config, "scene dimensions must cover at least one pixel per tile");
    require(scene.width / static_cast<std::uint32_t>(decimation) >=
                static_cast<std::uint32_t>(n_tiles),
            Errc::bad_config, "scene.width / sensor.decimation must be >= tiles.count");
    require(scene.gsd_km > 0.0, Errc::bad_config, "scene.gsd_km must be > 0");
    require(scene.coverage >= 0.0 && scene.coverage <= 1.0, Errc::bad_config,
            "scene.coverage must be in [0, 1]");
    require(scene.correlation_px >= 1.0, Errc::bad_config,
            "scene.correlation_px must be >= 1");
    require(scene.hotspot_sigma_px > 0.0, Errc::bad_config,
            "scene.hotspot_sigma_px must be > 0");
    require(scene.background_level >= 0.0 && scene.background_level <= 1.0,
            Errc::bad_config, "scene.background_level must be in [0, 1]");
    require(n_cycles >= 1, Errc::bad_config, "mission.cycles must be >= 1");
    require(workers >= 1 && workers <= 256, Errc::bad_config,
            "mission.workers must be in [1, 256]");
    require(!log_path.empty() && !metrics_path.empty(), Errc::bad_config,
            "output.log and output.metrics must be set");

    // The lookahead angle must also clear the horizon margin.
    geometry::lead_time(orbit, lookahead_angle_deg);
}

executor::CycleParams MissionConfig::cycle_params() const {
    executor::CycleParams p;
    p.lookahead_angle_deg = lookahead_angle_deg;
    p.overlap = overlap;
    p.margin_s = margin_s;
    p.policy = policy;
    p.t_bright = t_bright;
    p.t_sat = t_sat;
    p.t_hot = t_hot;
    p.t_ratio = t_ratio;
    p.stretch_p_low = stretch_p_low;
    p.stretch_p_high = stretch_p_high;
    p.n_tiles = n_tiles;
    p.max_across_track_deg = max_across_track_deg;
    p.agility = agility;
    p.budgets = budgets;
    p.readout = readout;
    p.decimation = decimation;
    p.smear = smear;
    p.hotspot_match_radius_px = hotspot_match_radius_px;
    return p;
}

MissionConfig MissionConfig::from_string(const std::string& text,
                                         const std::string& source_name) {
    MissionConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = source_name + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            require(line.back() == ']', Errc::bad_config, where + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            require(!section.empty(), Errc::bad_config, where + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        require(eq != std::string::npos, Errc::bad_config,
                where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        require(!key.empty(), Errc::bad_config, where + ": empty key");
        require(!section.empty(), Errc::bad_config,
                where + ": key '" + key + "' appears before any [section]");
        cfg.set(section + "." + key, value, where);
    }
    cfg.validate();
    return cfg;
}

MissionConfig MissionConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str(), path);
}

std::string MissionConfig::example_file() {
    return R"([orbit]
altitude_km = 500
ground_speed_km_s = 7.5
earth_radius_km = 6371

[lookahead]
angle_deg = 45        # off-nadir along-track look angle, 40..50
margin_s = 5          # pre-nadir stabilization margin
overlap = true        # start the along-track return slew during analysis

[policy]
name = cloud_avoid    # cloud_avoid | cloud_seek | thermal_hunt
t_bright = 0.6
t_sat = 0.2
t_hot = 0.8
t_ratio = 2.0
cloud_free_threshold = 0.1
stretch_p_low = 1
stretch_p_high = 99
hotspot_match_radius_px = 3

[tiles]
count = 5             # odd, center tile is nadir
max_across_track_deg = 30

[agility]
max_rate_deg_s = 2
max_accel_deg_s2 = 1
settle_time_s = 1

[budgets]
acquire_s = 2
analyze_s = 5
decide_s = 0.5
nadir_acquire_s = 2
nadir_analyze_s = 5
downlink_s = 3

[readout]
bytes_per_sample = 2
link_rate_bytes_s = 8000000
fixed_overhead_s = 0.5

[sensor]
decimation = 1        # keep every k-th pixel per axis in the lookahead
smear = false         # accepted but unimplemented; logged only

[scene]
width = 128
height = 128
gsd_km = 0.5
coverage = 0.5        # cloud scenes
correlation_px = 32   # cloud scenes
n_hotspots = 2        # thermal scenes
hotspot_sigma_px = 3
background_level = 0.2

[mission]
cycles = 100
seed = 42
workers = 1

[output]
log = dt_events.jsonl
metrics = dt_metrics.csv
)";
}

} // namespace dtsim::mission
