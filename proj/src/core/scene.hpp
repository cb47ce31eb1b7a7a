// Seeded synthetic ground-truth scenes: correlated cloud fields, thermal
// hotspot scenes, and linear spectral mixtures. Same seed and parameters
// produce bit-identical rasters (see core/rng.hpp for the generator).
#pragma once

#include "core/raster.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dtsim::scene {

struct EndmemberLibrary {
    std::vector<std::string> names;
    std::vector<std::vector<double>> spectra; // one band-vector per endmember

    std::size_t count() const { return spectra.size(); }
    std::size_t bands() const { return spectra.empty() ? 0 : spectra.front().size(); }
    void validate() const;
};

struct Hotspot {
    int row = 0;
    int col = 0;
    double sigma_px = 0.0;
    double nir_peak = 0.0; // amplitude added to the NIR band at the center
};

// Correlated cloud-opacity field, 1 band. Seeded value noise is smoothed by
// an odd box filter of half-width floor(correlation_px/2), then thresholded
// at the empirical (1-coverage) quantile (ties broken by pixel index) so the
// cloudy fraction equals `coverage` to within 1/(width*height). Opacities are
// rank-mapped: cloudy pixels land in (0.5, 1], clear pixels in [0, 0.5).
Raster generate_cloud_field(std::uint64_t seed, std::uint32_t width,
                            std::uint32_t height, double coverage,
                            double correlation_px);

// Renders an opacity field as a 4-band R,G,B,NIR scene: bright white-gray
// clouds over darker vegetated ground, so a brightness/saturation cloud mask
// recovers exactly the pixels with opacity > 0.5.
Raster render_cloud_scene(const Raster& opacity);

struct ThermalScene {
    Raster image; // 4 bands
    std::vector<Hotspot> hotspots;
};

// Uniform background plus n Gaussian blobs added predominantly to the NIR
// band (peak 0.9, red leakage 0.2 of that), clipped to [0,1]. Blob centers
// are drawn from the seeded generator, kept clear of the edges and pairwise
// separated so detections are unambiguous; centers are returned as truth.
ThermalScene generate_thermal_scene(std::uint64_t seed, std::uint32_t width,
                                    std::uint32_t height, std::uint32_t n_hotspots,
                                    double hotspot_sigma_px, double background_level);

// Pixel spectrum = E * a + seeded Gaussian noise, clipped to [0,1]. The
// abundance map is a raster with one band per endmember; entries must be
// nonnegative with per-pixel sum <= 1.
Raster generate_spectral_scene(std::uint64_t seed, const EndmemberLibrary& library,
                               const Raster& abundance_map, double noise_sigma);

// Smooth nonnegative abundance fields normalized to per-pixel sum <= 1, for
// demo scenes generated from the CLI.
Raster procedural_abundance_map(std::uint64_t seed, std::uint32_t width,
                                std::uint32_t height, std::uint32_t n_endmembers);

// Fixed 4-band demo endmembers (up to 4: vegetation, soil, water, snow).
EndmemberLibrary default_library(std::uint32_t n_endmembers);

// A generated scene together with whatever truth the generator recorded.
// The truth side is what mission metrics are scored against.
struct GroundTruthScene {
    Raster image;                        // 4-band radiance scene
    std::optional<Raster> cloud_opacity; // 1-band truth for cloud scenes
    std::vector<Hotspot> hotspots;       // truth for thermal scenes
};

} // namespace dtsim::scene
