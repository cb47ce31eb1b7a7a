/*
 * dtsim - dynamic targeting simulator, public C API.
 *
 * A C++ core sits behind this boundary; every entry point returns a
 * dt_status, reports failure details through dt_last_error(), and hands out
 * opaque handles that must be released with the matching *_free call.
 * Strings returned through char** out-parameters are heap copies owned by
 * the caller; release them with dt_string_free.
 */
#ifndef DTSIM_DTSIM_H
#define DTSIM_DTSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DTSIM_API __declspec(dllexport)
#else
#define DTSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dt_status {
    DT_OK = 0,
    DT_ERR_INVALID_ARGUMENT = 1,
    DT_ERR_BAD_MAGIC = 2,
    DT_ERR_TRUNCATED = 3,
    DT_ERR_NON_FINITE = 4,
    DT_ERR_NO_COVERAGE = 5,
    DT_ERR_DEGENERATE_TARGET = 6,
    DT_ERR_ZERO_VECTOR = 7,
    DT_ERR_DIMENSION_MISMATCH = 8,
    DT_ERR_BAD_CONFIG = 9,
    DT_ERR_PARSE = 10,
    DT_ERR_IO = 11,
    DT_ERR_RUNTIME = 12
} dt_status;

DTSIM_API const char* dt_version(void);
DTSIM_API const char* dt_status_name(dt_status status);
/* Message for the most recent failure on this thread; empty if none. */
DTSIM_API const char* dt_last_error(void);
DTSIM_API void dt_string_free(char* str);

/* ------------------------------------------------------------------ */
/* Geometry                                                            */
/* ------------------------------------------------------------------ */

typedef struct dt_orbit {
    double altitude_km;
    double ground_speed_km_s;
    double earth_radius_km;
} dt_orbit;

/* 500 km / 7.5 km/s / spherical mean Earth radius. */
DTSIM_API dt_orbit dt_orbit_default(void);

typedef struct dt_lookahead_geometry {
    double look_angle_deg;
    double central_angle_rad;
    double ground_distance_km;
    double lead_time_s;
} dt_lookahead_geometry;

typedef struct dt_footprint {
    double along_track_center_km;
    double across_track_center_km;
    double along_track_extent_km;
    double across_track_extent_km;
} dt_footprint;

/* Spherical-Earth lookahead solution for an off-nadir look angle. */
DTSIM_API dt_status dt_lookahead_from_angle(const dt_orbit* orbit, double look_angle_deg,
                                            dt_lookahead_geometry* out);
/* Flat-Earth cross-check: (h tan eta) / v. */
DTSIM_API dt_status dt_flat_earth_lead_time(const dt_orbit* orbit, double look_angle_deg,
                                            double* out_s);
DTSIM_API dt_status dt_footprint_at(const dt_orbit* orbit, double along_track_pos_km,
                                    double pointing_across_track_deg,
                                    double sensor_fov_deg, dt_footprint* out);

/* ------------------------------------------------------------------ */
/* Rasters (DTRAST01 container)                                        */
/* ------------------------------------------------------------------ */

typedef struct dt_raster dt_raster;

DTSIM_API dt_status dt_raster_read(const char* path, dt_raster** out);
DTSIM_API dt_status dt_raster_write(const dt_raster* raster, const char* path);
DTSIM_API void dt_raster_free(dt_raster* raster);

DTSIM_API uint32_t dt_raster_width(const dt_raster* raster);
DTSIM_API uint32_t dt_raster_height(const dt_raster* raster);
DTSIM_API uint32_t dt_raster_bands(const dt_raster* raster);
DTSIM_API double dt_raster_gsd_km(const dt_raster* raster);
/* Band-sequential samples, row-major within band; valid until the raster is
 * freed. */
DTSIM_API const float* dt_raster_data(const dt_raster* raster);
DTSIM_API size_t dt_raster_sample_count(const dt_raster* raster);
/* FNV-1a 64 content hash, as recorded in event-log records. */
DTSIM_API uint64_t dt_raster_content_hash(const dt_raster* raster);

/* ------------------------------------------------------------------ */
/* Scene generation (seeded, bit-reproducible)                         */
/* ------------------------------------------------------------------ */

DTSIM_API dt_status dt_scene_cloud_field(uint64_t seed, uint32_t width, uint32_t height,
                                         double coverage, double correlation_px,
                                         double gsd_km, dt_raster** out);
/* Renders a cloud-opacity field as a 4-band R,G,B,NIR scene. */
DTSIM_API dt_status dt_scene_render_clouds(const dt_raster* opacity, dt_raster** out);
/* truth_jsonl (optional) receives one JSON line per hotspot. */
DTSIM_API dt_status dt_scene_thermal(uint64_t seed, uint32_t width, uint32_t height,
                                     uint32_t n_hotspots, double hotspot_sigma_px,
                                     double background_level, double gsd_km,
                                     dt_raster** out, char** truth_jsonl);
/* endmembers: n_endmembers x bands, row-major, each row one spectrum in
 * [0,1]. Pass NULL to use the built-in demo library (bands must then be 4).
 * out_abundance receives the ground-truth abundance raster (one band per
 * endmember); truth_jsonl one JSON line per endmember. Both optional. */
DTSIM_API dt_status dt_scene_spectral(uint64_t seed, uint32_t width, uint32_t height,
                                      const double* endmembers, uint32_t n_endmembers,
                                      uint32_t bands, double noise_sigma, double gsd_km,
                                      dt_raster** out_image, dt_raster** out_abundance,
                                      char** truth_jsonl);

/* ------------------------------------------------------------------ */
/* Sensor model                                                        */
/* ------------------------------------------------------------------ */

typedef struct dt_readout_model {
    double bytes_per_sample;
    double link_rate_bytes_s;
    double fixed_overhead_s;
} dt_readout_model;

/* 2 B/sample at 8 MB/s with 0.5 s overhead (fictional defaults). */
DTSIM_API dt_readout_model dt_readout_model_default(void);

/* Crop + decimate + band-subset capture. band_subset may be NULL (all
 * bands); decimation keeps every k-th pixel per axis. */
DTSIM_API dt_status dt_capture(const dt_raster* scene, const dt_footprint* footprint,
                               uint32_t decimation, const uint32_t* band_subset,
                               uint32_t band_subset_len, dt_raster** out);
DTSIM_API dt_status dt_readout_time(uint64_t pixels, uint32_t bands,
                                    const dt_readout_model* model, double* out_s);

/* ------------------------------------------------------------------ */
/* Analysis kernels                                                    */
/* ------------------------------------------------------------------ */

DTSIM_API dt_status dt_stretch(const dt_raster* image, double p_low, double p_high,
                               dt_raster** out);
/* mask_out (optional): 1-band raster of 0/1. fraction_out (optional). */
DTSIM_API dt_status dt_cloud_mask(const dt_raster* stretched, double t_bright,
                                  double t_sat, dt_raster** mask_out,
                                  double* fraction_out);
/* detections_jsonl receives one JSON line per merged detection. */
DTSIM_API dt_status dt_thermal_anomalies(const dt_raster* image, double t_hot,
                                         double t_ratio, char** detections_jsonl,
                                         uint32_t* count_out);
DTSIM_API dt_status dt_spectral_angle(const double* x, const double* r, uint32_t bands,
                                      double* out_rad);
DTSIM_API dt_status dt_spectral_angle_map(const dt_raster* image, const double* reference,
                                          uint32_t bands, dt_raster** out);
/* Background stats are estimated from the image itself. */
DTSIM_API dt_status dt_matched_filter(const dt_raster* image, const double* target,
                                      uint32_t bands, dt_raster** score_out);
/* Active-set nonnegative least squares for one pixel spectrum.
 * abundances_out must hold n_endmembers entries. */
DTSIM_API dt_status dt_unmix(const double* pixel, uint32_t bands,
                             const double* endmembers, uint32_t n_endmembers,
                             double* abundances_out, double* residual_out);
DTSIM_API dt_status dt_unmix_raster(const dt_raster* image, const double* endmembers,
                                    uint32_t n_endmembers, dt_raster** abundance_out);

/* ------------------------------------------------------------------ */
/* Slew model                                                          */
/* ------------------------------------------------------------------ */

typedef struct dt_agility {
    double max_rate_deg_s;
    double max_accel_deg_s2;
    double settle_time_s;
} dt_agility;

/* Bang-bang trapezoid time for a maneuver of delta_deg, plus settle. */
DTSIM_API dt_status dt_slew_time(double delta_deg, const dt_agility* agility,
                                 double* out_s);

/* ------------------------------------------------------------------ */
/* Mission                                                             */
/* ------------------------------------------------------------------ */

typedef struct dt_mission_config dt_mission_config;

typedef struct dt_mission_metrics {
    uint32_t cycles_total;
    uint32_t cycles_feasible;
    double dt_cloud_free_fraction;
    double baseline_cloud_free_fraction;
    double dt_hotspot_recall;
    double baseline_hotspot_recall;
    double mean_timeline_slack_s;
} dt_mission_metrics;

DTSIM_API dt_status dt_mission_config_load(const char* path, dt_mission_config** out);
DTSIM_API dt_status dt_mission_config_parse(const char* text, dt_mission_config** out);
/* dotted_key is "section.key", as in the config file. Revalidates. */
DTSIM_API dt_status dt_mission_config_override(dt_mission_config* config,
                                               const char* dotted_key, const char* value);
DTSIM_API void dt_mission_config_free(dt_mission_config* config);
/* The documented example config file, with every key at its default. */
DTSIM_API dt_status dt_mission_config_example(char** out_text);

/* Runs the mission, writing the event log and metrics CSV configured in
 * [output]. metrics_out is optional. */
DTSIM_API dt_status dt_run_mission(const dt_mission_config* config,
                                   dt_mission_metrics* metrics_out);
/* Recomputes metrics from an event log. metrics_csv_path and summary_out are
 * optional; the summary is a human-readable block. */
DTSIM_API dt_status dt_report(const char* log_path, const char* metrics_csv_path,
                              dt_mission_metrics* metrics_out, char** summary_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DTSIM_DTSIM_H */
