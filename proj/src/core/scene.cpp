#include "core/scene.hpp"

#include "core/errors.hpp"
#include "core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dtsim::scene {

namespace {

float clip01(double v) {
    return static_cast<float>(std::min(1.0, std::max(0.0, v)));
}

// Separable box filter with clamped edges; double accumulation keeps the
// result independent of traversal order.
void box_filter(std::vector<double>& values, std::uint32_t width,
                std::uint32_t height, int radius) {
    if (radius <= 0) return;
    std::vector<double> tmp(values.size());
    const int w = static_cast<int>(width);
    const int h = static_cast<int>(height);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int cc = std::clamp(c + k, 0, w - 1);
                acc += values[static_cast<std::size_t>(r) * w + cc];
            }
            tmp[static_cast<std::size_t>(r) * w + c] = acc / (2 * radius + 1);
        }
    }
    for (int c = 0; c < w; ++c) {
        for (int r = 0; r < h; ++r) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int rr = std::clamp(r + k, 0, h - 1);
                acc += tmp[static_cast<std::size_t>(rr) * w + c];
            }
            values[static_cast<std::size_t>(r) * w + c] = acc / (2 * radius + 1);
        }
    }
}

} // namespace

void EndmemberLibrary::validate() const {
    require(!spectra.empty(), Errc::invalid_argument,
            "endmember library must hold at least one spectrum");
    require(names.size() == spectra.size(), Errc::dimension_mismatch,
            "endmember library: names/spectra count mismatch");
    const std::size_t nb = spectra.front().size();
    require(nb > 0, Errc::invalid_argument, "endmember spectra must be non-empty");
    for (std::size_t i = 0; i < spectra.size(); ++i) {
        require(spectra[i].size() == nb, Errc::dimension_mismatch,
                "endmember '" + names[i] + "' has inconsistent band count");
        double norm = 0.0;
        for (double v : spectra[i]) {
            require(std::isfinite(v) && v >= 0.0 && v <= 1.0, Errc::invalid_argument,
                    "endmember '" + names[i] + "' has samples outside [0,1]");
            norm += v * v;
        }
        require(norm > 0.0, Errc::zero_vector,
                "endmember '" + names[i] + "' is the zero vector");
        for (std::size_t j = i + 1; j < spectra.size(); ++j)
            require(spectra[i] != spectra[j], Errc::invalid_argument,
                    "endmembers " + names[i] + " and " + names[j] + " are identical");
    }
}

Raster generate_cloud_field(std::uint64_t seed, std::uint32_t width,
                            std::uint32_t height, double coverage,
                            double correlation_px) {
    require(width > 0 && height > 0, Errc::invalid_argument,
            "cloud field dimensions must be positive");
    require(std::isfinite(coverage) && coverage >= 0.0 && coverage <= 1.0,
            Errc::invalid_argument, "coverage must be in [0, 1]");
    require(std::isfinite(correlation_px) && correlation_px >= 1.0,
            Errc::invalid_argument, "correlation_px must be >= 1");

    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<double> noise(n);
    Xorshift64Star rng(seed);
    for (double& v : noise) v = rng.uniform();
    box_filter(noise, width, height, static_cast<int>(std::llround(correlation_px)) / 2);

    // Rank pixels by (value, index); the top llround(coverage*n) become cloudy.
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&noise](std::uint32_t a, std::uint32_t b) {
        if (noise[a] != noise[b]) return noise[a] < noise[b];
        return a < b;
    });
    const std::size_t n_cloudy =
        static_cast<std::size_t>(std::llround(coverage * static_cast<double>(n)));
    const std::size_t n_clear = n - n_cloudy;

    Raster field(width, height, 1);
    field.gsd_km = 1.0;
    for (std::size_t i = 0; i < n_clear; ++i)
        field.samples[order[i]] =
            static_cast<float>(0.5 * static_cast<double>(i) /
                               static_cast<double>(std::max<std::size_t>(n_clear, 1)));
    for (std::size_t i = 0; i < n_cloudy; ++i)
        field.samples[order[n_clear + i]] =
            static_cast<float>(0.5 + 0.5 * static_cast<double>(i + 1) /
                                         static_cast<double>(n_cloudy));
    return field;
}

Raster render_cloud_scene(const Raster& opacity) {
    require(opacity.bands == 1, Errc::dimension_mismatch,
            "render_cloud_scene expects a 1-band opacity field");
    Raster img(opacity.width, opacity.height, 4);
    img.gsd_km = opacity.gsd_km;
    img.origin_along_km = opacity.origin_along_km;
    img.origin_across_km = opacity.origin_across_km;

    const std::size_t n = opacity.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double a = opacity.samples[i];
        double r, g, b, nir;
        if (a > 0.5) {
            const double w = (a - 0.5) / 0.5; // (0, 1]
            const double gray = 0.82 + 0.18 * w;
            r = g = b = gray;
            nir = 0.70 + 0.30 * w;
        } else {
            const double t = a / 0.5; // [0, 1)
            r = 0.08 + 0.12 * t;
            g = 0.16 + 0.18 * t;
            b = 0.06 + 0.10 * t;
            nir = 0.30 + 0.20 * t;
        }
        img.samples[i] = clip01(r);
        img.samples[n + i] = clip01(g);
        img.samples[2 * n + i] = clip01(b);
        img.samples[3 * n + i] = clip01(nir);
    }
    return img;
}

ThermalScene generate_thermal_scene(std::uint64_t seed, std::uint32_t width,
                                    std::uint32_t height, std::uint32_t n_hotspots,
                                    double hotspot_sigma_px, double background_level) {
    require(width > 0 && height > 0, Errc::invalid_argument,
            "thermal scene dimensions must be positive");
    require(std::isfinite(hotspot_sigma_px) && hotspot_sigma_px > 0.0,
            Errc::invalid_argument, "hotspot_sigma_px must be > 0");
    require(std::isfinite(background_level) && background_level >= 0.0 &&
                background_level <= 1.0,
            Errc::invalid_argument, "background_level must be in [0, 1]");

    constexpr double kNirPeak = 0.9;
    constexpr double kRedLeak = 0.2; // fraction of the NIR amplitude seen in red

    ThermalScene out;
    out.image = Raster(width, height, 4, static_cast<float>(background_level));
    out.image.gsd_km = 1.0;

    Xorshift64Star rng(seed);
    const int margin = static_cast<int>(std::ceil(3.0 * hotspot_sigma_px));
    const double min_sep = 6.0 * hotspot_sigma_px;
    const int row_span = static_cast<int>(height) - 2 * margin;
    const int col_span = static_cast<int>(width) - 2 * margin;

    for (std::uint32_t k = 0; k < n_hotspots; ++k) {
        Hotspot hs;
        hs.sigma_px = hotspot_sigma_px;
        hs.nir_peak = kNirPeak;
        bool placed = false;
        for (int attempt = 0; attempt < 256 && !placed; ++attempt) {
            hs.row = row_span > 0
                         ? margin + static_cast<int>(rng.below(static_cast<std::uint64_t>(row_span)))
                         : static_cast<int>(rng.below(height));
            hs.col = col_span > 0
                         ? margin + static_cast<int>(rng.below(static_cast<std::uint64_t>(col_span)))
                         : static_cast<int>(rng.below(width));
            placed = true;
            for (const Hotspot& other : out.hotspots) {
                const double dr = hs.row - other.row;
                const double dc = hs.col - other.col;
                if (std::sqrt(dr * dr + dc * dc) < min_sep) {
                    placed = false;
                    break;
                }
            }
        }
        // Crowded scene: accept the last candidate rather than spin forever.
        out.hotspots.push_back(hs);
    }

    const std::size_t n = out.image.pixel_count();
    const int reach = static_cast<int>(std::ceil(4.0 * hotspot_sigma_px));
    for (const Hotspot& hs : out.hotspots) {
        for (int dr = -reach; dr <= reach; ++dr) {
            for (int dc = -reach; dc <= reach; ++dc) {
                const int r = hs.row + dr;
                const int c = hs.col + dc;
                if (r < 0 || c < 0 || r >= static_cast<int>(height) ||
                    c >= static_cast<int>(width))
                    continue;
                const double d2 = static_cast<double>(dr) * dr + static_cast<double>(dc) * dc;
                const double amp = std::exp(-d2 / (2.0 * hotspot_sigma_px * hotspot_sigma_px));
                const std::size_t i = static_cast<std::size_t>(r) * width + c;
                out.image.samples[i] =
                    clip01(out.image.samples[i] + kRedLeak * kNirPeak * amp); // red
                out.image.samples[3 * n + i] =
                    clip01(out.image.samples[3 * n + i] + kNirPeak * amp); // NIR
            }
        }
    }
    return out;
}

Raster generate_spectral_scene(std::uint64_t seed, const EndmemberLibrary& library,
                               const Raster& abundance_map, double noise_sigma) {
    library.validate();
    require(std::isfinite(noise_sigma) && noise_sigma >= 0.0, Errc::invalid_argument,
            "noise_sigma must be >= 0");
    require(abundance_map.bands == library.count(), Errc::dimension_mismatch,
            "abundance map bands (" + std::to_string(abundance_map.bands) +
                ") must match endmember count (" + std::to_string(library.count()) + ")");

    const std::size_t n = abundance_map.pixel_count();
    const std::uint32_t nb = static_cast<std::uint32_t>(library.bands());
    const std::uint32_t ne = abundance_map.bands;

    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::uint32_t e = 0; e < ne; ++e) {
            const double a = abundance_map.samples[static_cast<std::size_t>(e) * n + i];
            require(a >= 0.0, Errc::invalid_argument,
                    "abundance map entries must be nonnegative");
            sum += a;
        }
        require(sum <= 1.0 + 1e-6, Errc::invalid_argument,
                "abundance map per-pixel sum must be <= 1");
    }

    Raster img(abundance_map.width, abundance_map.height, nb);
    img.gsd_km = abundance_map.gsd_km;
    img.origin_along_km = abundance_map.origin_along_km;
    img.origin_across_km = abundance_map.origin_across_km;

    Xorshift64Star rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t b = 0; b < nb; ++b) {
            double v = 0.0;
            for (std::uint32_t e = 0; e < ne; ++e)
                v += library.spectra[e][b] *
                     abundance_map.samples[static_cast<std::size_t>(e) * n + i];
            if (noise_sigma > 0.0) v += noise_sigma * rng.gaussian();
            img.samples[static_cast<std::size_t>(b) * n + i] = clip01(v);
        }
    }
    return img;
}

Raster procedural_abundance_map(std::uint64_t seed, std::uint32_t width,
                                std::uint32_t height, std::uint32_t n_endmembers) {
    require(n_endmembers >= 1, Errc::invalid_argument,
            "need at least one endmember");
    const std::size_t n = static_cast<std::size_t>(width) * height;
    Raster map(width, height, n_endmembers);

    // One smooth nonnegative field per endmember, then normalize any pixel
    // whose sum exceeds 0.95.
    for (std::uint32_t e = 0; e < n_endmembers; ++e) {
        std::vector<double> field(n);
        Xorshift64Star rng(splitmix64(seed) ^ (0xA5A5ull + e));
        for (double& v : field) v = rng.uniform();
        box_filter(field, width, height, 8);
        for (std::size_t i = 0; i < n; ++i)
            map.samples[static_cast<std::size_t>(e) * n + i] =
                static_cast<float>(field[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::uint32_t e = 0; e < n_endmembers; ++e)
            sum += map.samples[static_cast<std::size_t>(e) * n + i];
        if (sum > 0.95) {
            const double scale = 0.95 / sum;
            for (std::uint32_t e = 0; e < n_endmembers; ++e)
                map.samples[static_cast<std::size_t>(e) * n + i] =
                    static_cast<float>(map.samples[static_cast<std::size_t>(e) * n + i] * scale);
        }
    }
    return map;
}

EndmemberLibrary default_library(std::uint32_t n_endmembers) {
    require(n_endmembers >= 1 && n_endmembers <= 4, Errc::invalid_argument,
            "default library provides 1..4 endmembers");
    EndmemberLibrary lib;
    lib.names = {"vegetation", "soil", "water", "snow"};
    lib.spectra = {
        {0.10, 0.25, 0.07, 0.75}, // vegetation: green bump, strong NIR
        {0.35, 0.30, 0.22, 0.45}, // soil
        {0.05, 0.08, 0.12, 0.02}, // water: dark, NIR-absorbing
        {0.90, 0.92, 0.95, 0.40}, // snow: bright visible
    };
    lib.names.resize(n_endmembers);
    lib.spectra.resize(n_endmembers);
    return lib;
}

} // namespace dtsim::scene
