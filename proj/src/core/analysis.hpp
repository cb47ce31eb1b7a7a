// Onboard image-analysis kernels: dynamic-range stretch, cloud masking,
// thermal anomaly detection, spectral angle mapping, matched filtering and
// nonnegative least-squares unmixing.
//
// All kernels are pure and reentrant. Band order for 4-band imagery is
// R, G, B, NIR.
#pragma once

#include "core/raster.hpp"
#include "core/scene.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dtsim::analysis {

struct CloudMask {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> cloudy; // row-major, 1 = cloudy
    double cloud_fraction = 0.0;      // always (#cloudy) / (width*height)

    double fraction_in(std::uint32_t col_lo, std::uint32_t col_hi) const;
};

struct ThermalDetection {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    double score = 0.0; // NIR / max(red, 1e-6) at the detection pixel
};

struct BackgroundStats {
    std::vector<double> mean;       // band vector
    std::vector<double> covariance; // bands x bands, row-major
    double regularization = 1e-6;

    void validate() const; // symmetry and positive definiteness of cov + eps*I
};

// Per band, maps the [p_low, p_high] percentile range affinely onto [0,1]
// and clips outside. Percentiles are linearly interpolated on the sorted
// samples. A constant band maps to all zeros.
Raster stretch(const Raster& image, double p_low, double p_high);

// Pixel is cloudy iff mean(R,G,B) > t_bright and the RGB saturation
// (max-min)/max < t_sat; clouds are bright and white. Expects a stretched
// 4-band image; max = 0 counts as saturation 0.
CloudMask cloud_mask(const Raster& stretched, double t_bright, double t_sat);

// Pixel is hot iff NIR > t_hot and NIR/max(red, 1e-6) > t_ratio. Adjacent
// hot pixels are merged by 4-connectivity into one detection at the
// max-score pixel (ties to the smallest row, then column).
std::vector<ThermalDetection> thermal_anomalies(const Raster& image, double t_hot,
                                                double t_ratio);

// Angle between band vectors, clamped into [0, pi] against rounding.
double spectral_angle(std::span<const double> x, std::span<const double> r);

// Sample mean and (biased, 1/N) covariance of all pixels.
BackgroundStats estimate_background(const Raster& image, double regularization = 1e-6);

// Score for one pixel spectrum:
//   MF(x) = (x-mu)^T (Sigma+eps I)^-1 (r-mu) / ((r-mu)^T (Sigma+eps I)^-1 (r-mu)).
// Prepared once per (target, stats) pair; x = r scores exactly 1 and x = mu
// exactly 0 by construction.
class MatchedFilter {
public:
    MatchedFilter(std::span<const double> target, const BackgroundStats& stats);

    double score(std::span<const double> x) const;
    Raster score_map(const Raster& image) const;

private:
    std::vector<double> mean_;
    std::vector<double> weights_; // (Sigma+eps I)^-1 (r-mu)
    double denom_ = 0.0;
};

// Convenience: estimates stats from the image itself when none are supplied.
Raster matched_filter(const Raster& image, std::span<const double> target,
                      const BackgroundStats* stats = nullptr);

struct UnmixResult {
    std::vector<double> abundances;
    double residual = 0.0; // ||E a - x||_2
};

// argmin ||E a - x||_2 subject to a >= 0, by active-set nonnegative least
// squares (Lawson-Hanson). Pivot ties choose the lowest index; rank-deficient
// passive sets are solved least-norm.
UnmixResult unmix(std::span<const double> pixel, const scene::EndmemberLibrary& library);

// Per-pixel unmixing over a raster; output has one band per endmember.
Raster unmix_raster(const Raster& image, const scene::EndmemberLibrary& library);

// Per-pixel spectral angle against a reference spectrum.
Raster spectral_angle_map(const Raster& image, std::span<const double> reference);

} // namespace dtsim::analysis
