// extern-C implementation of include/dtsim/dtsim.h over the C++ core.
#include "dtsim/dtsim.h"

#include "core/analysis.hpp"
#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/executor.hpp"
#include "core/geometry.hpp"
#include "core/mission.hpp"
#include "core/raster.hpp"
#include "core/scene.hpp"
#include "core/sensor.hpp"
#include "core/targeting.hpp"

#include <nlohmann/json.hpp>

#include <cstring>
#include <exception>
#include <new>
#include <span>
#include <string>
#include <vector>

using namespace dtsim;

// Opaque handle types are thin wrappers so the C side never sees C++ layout.
struct dt_raster {
    Raster value;
};
struct dt_mission_config {
    mission::MissionConfig value;
};

namespace {

thread_local std::string t_last_error;

dt_status status_from(Errc code) {
    switch (code) {
        case Errc::invalid_argument: return DT_ERR_INVALID_ARGUMENT;
        case Errc::bad_magic: return DT_ERR_BAD_MAGIC;
        case Errc::truncated: return DT_ERR_TRUNCATED;
        case Errc::non_finite: return DT_ERR_NON_FINITE;
        case Errc::no_coverage: return DT_ERR_NO_COVERAGE;
        case Errc::degenerate_target: return DT_ERR_DEGENERATE_TARGET;
        case Errc::zero_vector: return DT_ERR_ZERO_VECTOR;
        case Errc::dimension_mismatch: return DT_ERR_DIMENSION_MISMATCH;
        case Errc::bad_config: return DT_ERR_BAD_CONFIG;
        case Errc::parse_error: return DT_ERR_PARSE;
        case Errc::io_error: return DT_ERR_IO;
        case Errc::runtime: return DT_ERR_RUNTIME;
    }
    return DT_ERR_RUNTIME;
}

// Runs fn inside the C boundary: exceptions become status codes and the
// thread-local error message.
template <typename Fn>
dt_status guarded(Fn&& fn) {
    try {
        t_last_error.clear();
        fn();
        return DT_OK;
    } catch (const DtError& e) {
        t_last_error = e.what();
        return status_from(e.code());
    } catch (const std::bad_alloc&) {
        t_last_error = "out of memory";
        return DT_ERR_RUNTIME;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return DT_ERR_RUNTIME;
    }
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require_arg(bool ok, const char* what) {
    require(ok, Errc::invalid_argument, what);
}

geometry::OrbitConfig to_orbit(const dt_orbit* orbit) {
    require_arg(orbit != nullptr, "orbit must not be null");
    return {orbit->altitude_km, orbit->ground_speed_km_s, orbit->earth_radius_km};
}

geometry::GroundFootprint to_footprint(const dt_footprint* fp) {
    require_arg(fp != nullptr, "footprint must not be null");
    return {fp->along_track_center_km, fp->across_track_center_km,
            fp->along_track_extent_km, fp->across_track_extent_km};
}

const Raster& raster_of(const dt_raster* raster) {
    require_arg(raster != nullptr, "raster must not be null");
    return raster->value;
}

dt_raster* make_raster(Raster&& r) { return new dt_raster{std::move(r)}; }

scene::EndmemberLibrary library_from(const double* endmembers, std::uint32_t n_endmembers,
                                     std::uint32_t bands) {
    if (endmembers == nullptr) {
        require(bands == 4, Errc::invalid_argument,
                "built-in endmember library is 4-band; pass spectra explicitly");
        return scene::default_library(n_endmembers);
    }
    scene::EndmemberLibrary lib;
    for (std::uint32_t e = 0; e < n_endmembers; ++e) {
        lib.names.push_back("endmember_" + std::to_string(e));
        lib.spectra.emplace_back(endmembers + static_cast<std::size_t>(e) * bands,
                                 endmembers + static_cast<std::size_t>(e + 1) * bands);
    }
    lib.validate();
    return lib;
}

std::string hotspots_jsonl(const std::vector<scene::Hotspot>& hotspots) {
    std::string out;
    for (const scene::Hotspot& h : hotspots) {
        nlohmann::ordered_json j;
        j["type"] = "hotspot";
        j["row"] = h.row;
        j["col"] = h.col;
        j["sigma_px"] = h.sigma_px;
        j["nir_peak"] = h.nir_peak;
        out += j.dump();
        out += '\n';
    }
    return out;
}

dt_mission_metrics to_c_metrics(const mission::MissionMetrics& m) {
    return {m.cycles_total,          m.cycles_feasible,
            m.dt_cloud_free_fraction, m.baseline_cloud_free_fraction,
            m.dt_hotspot_recall,      m.baseline_hotspot_recall,
            m.mean_timeline_slack_s};
}

} // namespace

extern "C" {

const char* dt_version(void) { return "1.0.0"; }

const char* dt_status_name(dt_status status) {
    switch (status) {
        case DT_OK: return "ok";
        case DT_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case DT_ERR_BAD_MAGIC: return "bad_magic";
        case DT_ERR_TRUNCATED: return "truncated";
        case DT_ERR_NON_FINITE: return "non_finite";
        case DT_ERR_NO_COVERAGE: return "no_coverage";
        case DT_ERR_DEGENERATE_TARGET: return "degenerate_target";
        case DT_ERR_ZERO_VECTOR: return "zero_vector";
        case DT_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
        case DT_ERR_BAD_CONFIG: return "bad_config";
        case DT_ERR_PARSE: return "parse_error";
        case DT_ERR_IO: return "io_error";
        case DT_ERR_RUNTIME: return "runtime_error";
    }
    return "unknown";
}

const char* dt_last_error(void) { return t_last_error.c_str(); }

void dt_string_free(char* str) { delete[] str; }

dt_orbit dt_orbit_default(void) { return {500.0, 7.5, 6371.0}; }

dt_status dt_lookahead_from_angle(const dt_orbit* orbit, double look_angle_deg,
                                  dt_lookahead_geometry* out) {
    return guarded([&] {
        require_arg(out != nullptr, "out must not be null");
        const auto g = geometry::lead_time(to_orbit(orbit), look_angle_deg);
        *out = {g.look_angle_deg, g.central_angle_rad, g.ground_distance_km,
                g.lead_time_s};
    });
}

dt_status dt_flat_earth_lead_time(const dt_orbit* orbit, double look_angle_deg,
                                  double* out_s) {
    return guarded([&] {
        require_arg(out_s != nullptr, "out_s must not be null");
        *out_s = geometry::flat_earth_lead_time(to_orbit(orbit), look_angle_deg);
    });
}

dt_status dt_footprint_at(const dt_orbit* orbit, double along_track_pos_km,
                          double pointing_across_track_deg, double sensor_fov_deg,
                          dt_footprint* out) {
    return guarded([&] {
        require_arg(out != nullptr, "out must not be null");
        const auto fp = geometry::footprint_at(to_orbit(orbit), along_track_pos_km,
                                               pointing_across_track_deg, sensor_fov_deg);
        *out = {fp.along_track_center_km, fp.across_track_center_km,
                fp.along_track_extent_km, fp.across_track_extent_km};
    });
}

dt_status dt_raster_read(const char* path, dt_raster** out) {
    return guarded([&] {
        require_arg(path != nullptr && out != nullptr, "path and out must not be null");
        *out = make_raster(read_raster(path));
    });
}

dt_status dt_raster_write(const dt_raster* raster, const char* path) {
    return guarded([&] {
        require_arg(path != nullptr, "path must not be null");
        write_raster(raster_of(raster), path);
    });
}

void dt_raster_free(dt_raster* raster) { delete raster; }

uint32_t dt_raster_width(const dt_raster* raster) {
    return raster ? raster->value.width : 0;
}
uint32_t dt_raster_height(const dt_raster* raster) {
    return raster ? raster->value.height : 0;
}
uint32_t dt_raster_bands(const dt_raster* raster) {
    return raster ? raster->value.bands : 0;
}
double dt_raster_gsd_km(const dt_raster* raster) {
    return raster ? raster->value.gsd_km : 0.0;
}
const float* dt_raster_data(const dt_raster* raster) {
    return raster ? raster->value.samples.data() : nullptr;
}
size_t dt_raster_sample_count(const dt_raster* raster) {
    return raster ? raster->value.samples.size() : 0;
}
uint64_t dt_raster_content_hash(const dt_raster* raster) {
    return raster ? raster_hash(raster->value) : 0;
}

dt_status dt_scene_cloud_field(uint64_t seed, uint32_t width, uint32_t height,
                               double coverage, double correlation_px, double gsd_km,
                               dt_raster** out) {
    return guarded([&] {
        require_arg(out != nullptr, "out must not be null");
        require(gsd_km > 0.0, Errc::invalid_argument, "gsd_km must be > 0");
        Raster r = scene::generate_cloud_field(seed, width, height, coverage,
                                               correlation_px);
        r.gsd_km = gsd_km;
        r.origin_across_km = -0.5 * width * gsd_km;
        *out = make_raster(std::move(r));
    });
}

dt_status dt_scene_render_clouds(const dt_raster* opacity, dt_raster** out) {
    return guarded([&] {
        require_arg(out != nullptr, "out must not be null");
        *out = make_raster(scene::render_cloud_scene(raster_of(opacity)));
    });
}

dt_status dt_scene_thermal(uint64_t seed, uint32_t width, uint32_t height,
                           uint32_t n_hotspots, double hotspot_sigma_px,
                           double background_level, double gsd_km, dt_raster** out,
                           char** truth_jsonl) {
    return guarded([&] {
        require_arg(out != nullptr, "out must not be null");
        require(gsd_km > 0.0, Errc::invalid_argument, "gsd_km must be > 0");
        scene::ThermalScene ts = scene::generate_thermal_scene(
            seed, width, height, n_hotspots, hotspot_sigma_px, background_level);
        ts.image.gsd_km = gsd_km;
        ts.image.origin_across_km = -0.5 * width * gsd_km;
        if (truth_jsonl) *truth_jsonl = copy_string(hotspots_jsonl(ts.hotspots));
        *out = make_raster(std::move(ts.image));
    });
}

dt_status dt_scene_spectral(uint64_t seed, uint32_t width, uint32_t height,
                            const double* endmembers, uint32_t n_endmembers,
                            uint32_t bands, double noise_sigma, double gsd_km,
                            dt_raster** out_image, dt_raster** out_abundance,
                            char** truth_jsonl) {
    return guarded([&] {
        require_arg(out_image != nullptr, "out_image must not be null");
        require(gsd_km > 0.0, Errc::invalid_argument, "gsd_km must be > 0");
        const scene::EndmemberLibrary lib = library_from(endmembers, n_endmembers, bands);
        Raster abundance = scene::procedural_abundance_map(seed, width, height,
                                                           n_endmembers);
        Raster image = scene::generate_spectral_scene(seed, lib, abundance, noise_sigma);
        image.gsd_km = gsd_km;
        image.origin_across_km = -0.5 * width * gsd_km;
        if (truth_jsonl) {
            std::string text;
            for (std::size_t e = 0; e < lib.count(); ++e) {
                nlohmann::ordered_json j;
                j["type"] = "endmember";
                j["index"] = e;
                j["name"] = lib.names[e];
                j["spectrum"] = lib.spectra[e];
                text += j.dump();
                text += '\n';
            }
            *truth_jsonl = copy_string(text);
        }
        if (out_abundance) *out_abundance = make_raster(std::move(abundance));
        *out_image = make_raster(std::move(image));
    });
}

dt_readout_model dt_readout_model_default(void) { return {2.0, 8.0e6, 0.5}; }

dt_status dt_capture(const dt_raster* scene, const dt_footprint* footprint,
                     uint32_t decimation, const uint32_t* band_subset,
                     uint32_t band_subset_len, dt_raster** out) {
    return guarded([&] {
        require_arg(out != nullptr, "out must not be null");
        sensor::CaptureRequest req;
        req.footprint = to_footprint(footprint);
        req.decimation = static_cast<int>(decimation);
        if (band_subset && band_subset_len > 0)
            req.band_subset.assign(band_subset, band_subset + band_subset_len);
        *out = make_raster(sensor::capture(raster_of(scene), req));
    });
}

dt_status dt_readout_time(uint64_t pixels, uint32_t bands, const dt_readout_model* model,
                          double* out_s) {
    return guarded([&] {
        require_arg(model != nullptr && out_s != nullptr,
                    "model and out_s must not be null");
        const sensor::ReadoutModel m{model->bytes_per_sample, model->link_rate_bytes_s,
                                     model->fixed_overhead_s};
        *out_s = sensor::readout_time(pixels, bands, m);
    });
}

dt_status dt_stretch(const dt_raster* image, double p_low, double p_high,
                     dt_raster** out) {
    return guarded([&] {
        require_arg(out != nullptr, "out must not be null");
        *out = make_raster(analysis::stretch(raster_of(image), p_low, p_high));
    });
}

dt_status dt_cloud_mask(const dt_raster* stretched, double t_bright, double t_sat,
                        dt_raster** mask_out, double* fraction_out) {
    return guarded([&] {
        const analysis::CloudMask mask =
            analysis::cloud_mask(raster_of(stretched), t_bright, t_sat);
        if (fraction_out) *fraction_out = mask.cloud_fraction;
        if (mask_out) {
            Raster r(mask.width, mask.height, 1);
            r.gsd_km = stretched->value.gsd_km;
            r.origin_along_km = stretched->value.origin_along_km;
            r.origin_across_km = stretched->value.origin_across_km;
            for (std::size_t i = 0; i < mask.cloudy.size(); ++i)
                r.samples[i] = mask.cloudy[i] ? 1.0f : 0.0f;
            *mask_out = make_raster(std::move(r));
        }
    });
}

dt_status dt_thermal_anomalies(const dt_raster* image, double t_hot, double t_ratio,
                               char** detections_jsonl, uint32_t* count_out) {
    return guarded([&] {
        const auto detections =
            analysis::thermal_anomalies(raster_of(image), t_hot, t_ratio);
        if (count_out) *count_out = static_cast<uint32_t>(detections.size());
        if (detections_jsonl) {
            std::string text;
            for (const auto& d : detections) {
                nlohmann::ordered_json j;
                j["type"] = "thermal_detection";
                j["row"] = d.row;
                j["col"] = d.col;
                j["score"] = d.score;
                text += j.dump();
                text += '\n';
            }
            *detections_jsonl = copy_string(text);
        }
    });
}

dt_status dt_spectral_angle(const double* x, const double* r, uint32_t bands,
                            double* out_rad) {
    return guarded([&] {
        require_arg(x != nullptr && r != nullptr && out_rad != nullptr,
                    "x, r and out_rad must not be null");
        *out_rad = analysis::spectral_angle(std::span(x, bands), std::span(r, bands));
    });
}

dt_status dt_spectral_angle_map(const dt_raster* image, const double* reference,
                                uint32_t bands, dt_raster** out) {
    return guarded([&] {
        require_arg(reference != nullptr && out != nullptr,
                    "reference and out must not be null");
        *out = make_raster(
            analysis::spectral_angle_map(raster_of(image), std::span(reference, bands)));
    });
}

dt_status dt_matched_filter(const dt_raster* image, const double* target, uint32_t bands,
                            dt_raster** score_out) {
    return guarded([&] {
        require_arg(target != nullptr && score_out != nullptr,
                    "target and score_out must not be null");
        *score_out =
            make_raster(analysis::matched_filter(raster_of(image), std::span(target, bands)));
    });
}

dt_status dt_unmix(const double* pixel, uint32_t bands, const double* endmembers,
                   uint32_t n_endmembers, double* abundances_out, double* residual_out) {
    return guarded([&] {
        require_arg(pixel != nullptr && endmembers != nullptr && abundances_out != nullptr,
                    "pixel, endmembers and abundances_out must not be null");
        const auto lib = library_from(endmembers, n_endmembers, bands);
        const analysis::UnmixResult r = analysis::unmix(std::span(pixel, bands), lib);
        for (std::size_t i = 0; i < r.abundances.size(); ++i)
            abundances_out[i] = r.abundances[i];
        if (residual_out) *residual_out = r.residual;
    });
}

dt_status dt_unmix_raster(const dt_raster* image, const double* endmembers,
                          uint32_t n_endmembers, dt_raster** abundance_out) {
    return guarded([&] {
        require_arg(endmembers != nullptr && abundance_out != nullptr,
                    "endmembers and abundance_out must not be null");
        const auto lib =
            library_from(endmembers, n_endmembers, raster_of(image).bands);
        *abundance_out = make_raster(analysis::unmix_raster(raster_of(image), lib));
    });
}

dt_status dt_slew_time(double delta_deg, const dt_agility* agility, double* out_s) {
    return guarded([&] {
        require_arg(agility != nullptr && out_s != nullptr,
                    "agility and out_s must not be null");
        const executor::SpacecraftAgility a{agility->max_rate_deg_s,
                                            agility->max_accel_deg_s2,
                                            agility->settle_time_s};
        *out_s = executor::slew_time(delta_deg, a);
    });
}

dt_status dt_mission_config_load(const char* path, dt_mission_config** out) {
    return guarded([&] {
        require_arg(path != nullptr && out != nullptr, "path and out must not be null");
        *out = new dt_mission_config{mission::MissionConfig::from_file(path)};
    });
}

dt_status dt_mission_config_parse(const char* text, dt_mission_config** out) {
    return guarded([&] {
        require_arg(text != nullptr && out != nullptr, "text and out must not be null");
        *out = new dt_mission_config{mission::MissionConfig::from_string(text)};
    });
}

dt_status dt_mission_config_override(dt_mission_config* config, const char* dotted_key,
                                     const char* value) {
    return guarded([&] {
        require_arg(config != nullptr && dotted_key != nullptr && value != nullptr,
                    "config, dotted_key and value must not be null");
        mission::MissionConfig updated = config->value;
        updated.set(dotted_key, value, std::string("override '") + dotted_key + "'");
        updated.validate();
        config->value = std::move(updated);
    });
}

void dt_mission_config_free(dt_mission_config* config) { delete config; }

dt_status dt_mission_config_example(char** out_text) {
    return guarded([&] {
        require_arg(out_text != nullptr, "out_text must not be null");
        *out_text = copy_string(mission::MissionConfig::example_file());
    });
}

dt_status dt_run_mission(const dt_mission_config* config, dt_mission_metrics* metrics_out) {
    return guarded([&] {
        require_arg(config != nullptr, "config must not be null");
        const mission::MissionMetrics m = mission::run_mission(config->value);
        if (metrics_out) *metrics_out = to_c_metrics(m);
    });
}

dt_status dt_report(const char* log_path, const char* metrics_csv_path,
                    dt_mission_metrics* metrics_out, char** summary_out) {
    return guarded([&] {
        require_arg(log_path != nullptr, "log_path must not be null");
        const mission::ReportResult r =
            mission::report(log_path, metrics_csv_path ? metrics_csv_path : "");
        if (metrics_out) *metrics_out = to_c_metrics(r.metrics);
        if (summary_out) *summary_out = copy_string(r.summary);
    });
}

} // extern "C"
