#include "core/analysis.hpp"

#include "core/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace dtsim::analysis {

namespace {

constexpr double kRedFloor = 1e-6; // ratio denominator floor

void require_bands(const Raster& image, std::uint32_t bands, const char* op) {
    require(image.bands == bands, Errc::dimension_mismatch,
            std::string(op) + " expects a " + std::to_string(bands) +
                "-band image, got " + std::to_string(image.bands));
}

double percentile(const std::vector<double>& sorted, double p) {
    const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

Eigen::MatrixXd regularized_covariance(const BackgroundStats& stats) {
    const auto nb = static_cast<Eigen::Index>(stats.mean.size());
    Eigen::MatrixXd a(nb, nb);
    for (Eigen::Index i = 0; i < nb; ++i)
        for (Eigen::Index j = 0; j < nb; ++j)
            a(i, j) = stats.covariance[static_cast<std::size_t>(i * nb + j)];
    a += stats.regularization * Eigen::MatrixXd::Identity(nb, nb);
    return a;
}

} // namespace

double CloudMask::fraction_in(std::uint32_t col_lo, std::uint32_t col_hi) const {
    if (col_hi <= col_lo || height == 0) return 0.0;
    std::size_t n = 0;
    for (std::uint32_t r = 0; r < height; ++r)
        for (std::uint32_t c = col_lo; c < col_hi; ++c)
            n += cloudy[static_cast<std::size_t>(r) * width + c];
    return static_cast<double>(n) /
           (static_cast<double>(col_hi - col_lo) * height);
}

void BackgroundStats::validate() const {
    const std::size_t nb = mean.size();
    require(nb > 0, Errc::invalid_argument, "background stats: empty mean");
    require(covariance.size() == nb * nb, Errc::dimension_mismatch,
            "background stats: covariance size mismatch");
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t j = i + 1; j < nb; ++j)
            require(std::abs(covariance[i * nb + j] - covariance[j * nb + i]) < 1e-12,
                    Errc::invalid_argument, "background stats: covariance not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(regularized_covariance(*this));
    require(llt.info() == Eigen::Success, Errc::invalid_argument,
            "background stats: covariance + eps*I not positive definite");
}

Raster stretch(const Raster& image, double p_low, double p_high) {
    require(p_low >= 0.0 && p_low < p_high && p_high <= 100.0, Errc::invalid_argument,
            "stretch: need 0 <= p_low < p_high <= 100");
    const std::size_t n = image.pixel_count();
    Raster out = image;
    std::vector<double> sorted(n);
    for (std::uint32_t b = 0; b < image.bands; ++b) {
        const std::size_t base = static_cast<std::size_t>(b) * n;
        for (std::size_t i = 0; i < n; ++i) sorted[i] = image.samples[base + i];
        std::sort(sorted.begin(), sorted.end());
        const double lo = percentile(sorted, p_low);
        const double hi = percentile(sorted, p_high);
        if (hi - lo <= 1e-12) {
            std::fill(out.samples.begin() + base, out.samples.begin() + base + n, 0.0f);
            continue;
        }
        const double scale = 1.0 / (hi - lo);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = (static_cast<double>(image.samples[base + i]) - lo) * scale;
            out.samples[base + i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }
    }
    return out;
}

CloudMask cloud_mask(const Raster& stretched, double t_bright, double t_sat) {
    require_bands(stretched, 4, "cloud_mask");
    const std::size_t n = stretched.pixel_count();
    CloudMask mask;
    mask.width = stretched.width;
    mask.height = stretched.height;
    mask.cloudy.assign(n, 0);

    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = stretched.samples[i];
        const double g = stretched.samples[n + i];
        const double b = stretched.samples[2 * n + i];
        const double brightness = (r + g + b) / 3.0;
        const double mx = std::max({r, g, b});
        const double mn = std::min({r, g, b});
        const double saturation = mx > 0.0 ? (mx - mn) / mx : 0.0;
        if (brightness > t_bright && saturation < t_sat) {
            mask.cloudy[i] = 1;
            ++count;
        }
    }
    mask.cloud_fraction = static_cast<double>(count) / static_cast<double>(n);
    return mask;
}

std::vector<ThermalDetection> thermal_anomalies(const Raster& image, double t_hot,
                                                double t_ratio) {
    require_bands(image, 4, "thermal_anomalies");
    const std::size_t n = image.pixel_count();
    const std::uint32_t w = image.width;
    const std::uint32_t h = image.height;

    std::vector<double> score(n, 0.0);
    std::vector<std::uint8_t> hot(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double red = image.samples[i];
        const double nir = image.samples[3 * n + i];
        const double ratio = nir / std::max(red, kRedFloor);
        if (nir > t_hot && ratio > t_ratio) {
            hot[i] = 1;
            score[i] = ratio;
        }
    }

    // Merge 4-connected hot pixels; one detection per component at its
    // max-score pixel (ties to the smallest row, then column).
    std::vector<ThermalDetection> detections;
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < n; ++start) {
        if (!hot[start] || seen[start]) continue;
        ThermalDetection best{static_cast<std::uint32_t>(start / w),
                              static_cast<std::uint32_t>(start % w), score[start]};
        stack.assign(1, start);
        seen[start] = 1;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            const std::uint32_t r = static_cast<std::uint32_t>(i / w);
            const std::uint32_t c = static_cast<std::uint32_t>(i % w);
            if (score[i] > best.score ||
                (score[i] == best.score &&
                 (r < best.row || (r == best.row && c < best.col))))
                best = {r, c, score[i]};
            const std::size_t neighbors[4] = {
                r > 0 ? i - w : n, r + 1 < h ? i + w : n,
                c > 0 ? i - 1 : n, c + 1 < w ? i + 1 : n};
            for (std::size_t j : neighbors)
                if (j < n && hot[j] && !seen[j]) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
        }
        detections.push_back(best);
    }
    std::sort(detections.begin(), detections.end(),
              [](const ThermalDetection& a, const ThermalDetection& b) {
                  return a.row != b.row ? a.row < b.row : a.col < b.col;
              });
    return detections;
}

double spectral_angle(std::span<const double> x, std::span<const double> r) {
    require(x.size() == r.size() && !x.empty(), Errc::dimension_mismatch,
            "spectral_angle: vectors must share a nonzero length");
    double xx = 0.0, rr = 0.0, xr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx += x[i] * x[i];
        rr += r[i] * r[i];
        xr += x[i] * r[i];
    }
    require(xx > 0.0 && rr > 0.0, Errc::zero_vector,
            "spectral_angle: zero vector");
    const double c = std::clamp(xr / (std::sqrt(xx) * std::sqrt(rr)), -1.0, 1.0);
    return std::acos(c);
}

BackgroundStats estimate_background(const Raster& image, double regularization) {
    require(image.pixel_count() > 0, Errc::invalid_argument,
            "estimate_background: empty image");
    const std::size_t n = image.pixel_count();
    const std::uint32_t nb = image.bands;

    BackgroundStats stats;
    stats.regularization = regularization;
    stats.mean.assign(nb, 0.0);
    stats.covariance.assign(static_cast<std::size_t>(nb) * nb, 0.0);

    for (std::uint32_t b = 0; b < nb; ++b) {
        double acc = 0.0;
        const std::size_t base = static_cast<std::size_t>(b) * n;
        for (std::size_t i = 0; i < n; ++i) acc += image.samples[base + i];
        stats.mean[b] = acc / static_cast<double>(n);
    }
    for (std::uint32_t bi = 0; bi < nb; ++bi) {
        for (std::uint32_t bj = bi; bj < nb; ++bj) {
            double acc = 0.0;
            const std::size_t base_i = static_cast<std::size_t>(bi) * n;
            const std::size_t base_j = static_cast<std::size_t>(bj) * n;
            for (std::size_t i = 0; i < n; ++i)
                acc += (image.samples[base_i + i] - stats.mean[bi]) *
                       (image.samples[base_j + i] - stats.mean[bj]);
            const double cov = acc / static_cast<double>(n);
            stats.covariance[static_cast<std::size_t>(bi) * nb + bj] = cov;
            stats.covariance[static_cast<std::size_t>(bj) * nb + bi] = cov;
        }
    }
    return stats;
}

MatchedFilter::MatchedFilter(std::span<const double> target, const BackgroundStats& stats) {
    stats.validate();
    require(target.size() == stats.mean.size(), Errc::dimension_mismatch,
            "matched filter: target/stats band mismatch");
    mean_.assign(stats.mean.begin(), stats.mean.end());

    const auto nb = static_cast<Eigen::Index>(target.size());
    Eigen::VectorXd d(nb);
    for (Eigen::Index i = 0; i < nb; ++i) d(i) = target[i] - mean_[i];

    Eigen::LLT<Eigen::MatrixXd> llt(regularized_covariance(stats));
    require(llt.info() == Eigen::Success, Errc::invalid_argument,
            "matched filter: covariance + eps*I not positive definite");
    Eigen::VectorXd q = llt.solve(d);

    weights_.resize(target.size());
    for (Eigen::Index i = 0; i < nb; ++i) weights_[i] = q(i);

    // denom uses the same accumulation as score() so score(r) == 1 exactly.
    denom_ = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i)
        denom_ += weights_[i] * (target[i] - mean_[i]);
    require(denom_ > std::numeric_limits<double>::min(), Errc::degenerate_target,
            "matched filter: target equals the background mean");
}

double MatchedFilter::score(std::span<const double> x) const {
    require(x.size() == weights_.size(), Errc::dimension_mismatch,
            "matched filter: pixel band mismatch");
    double num = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        num += weights_[i] * (x[i] - mean_[i]);
    return num / denom_;
}

Raster MatchedFilter::score_map(const Raster& image) const {
    require(image.bands == weights_.size(), Errc::dimension_mismatch,
            "matched filter: image band mismatch");
    const std::size_t n = image.pixel_count();
    Raster out(image.width, image.height, 1);
    out.gsd_km = image.gsd_km;
    out.origin_along_km = image.origin_along_km;
    out.origin_across_km = image.origin_across_km;
    std::vector<double> x(image.bands);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t b = 0; b < image.bands; ++b)
            x[b] = image.samples[static_cast<std::size_t>(b) * n + i];
        out.samples[i] = static_cast<float>(score(x));
    }
    return out;
}

Raster matched_filter(const Raster& image, std::span<const double> target,
                      const BackgroundStats* stats) {
    if (stats) return MatchedFilter(target, *stats).score_map(image);
    const BackgroundStats estimated = estimate_background(image);
    return MatchedFilter(target, estimated).score_map(image);
}

UnmixResult unmix(std::span<const double> pixel, const scene::EndmemberLibrary& library) {
    library.validate();
    require(pixel.size() == library.bands(), Errc::dimension_mismatch,
            "unmix: pixel band count does not match the library");

    const auto nb = static_cast<Eigen::Index>(library.bands());
    const auto ne = static_cast<Eigen::Index>(library.count());
    Eigen::MatrixXd e(nb, ne);
    for (Eigen::Index j = 0; j < ne; ++j)
        for (Eigen::Index i = 0; i < nb; ++i)
            e(i, j) = library.spectra[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    Eigen::VectorXd x(nb);
    for (Eigen::Index i = 0; i < nb; ++i) x(i) = pixel[static_cast<std::size_t>(i)];

    // Lawson-Hanson active set. w is the negative gradient; the termination
    // tolerance is far below the 1e-8 the KKT conditions are checked at.
    const double tol = 1e-11 * (1.0 + (e.transpose() * x).cwiseAbs().maxCoeff());
    Eigen::VectorXd a = Eigen::VectorXd::Zero(ne);
    std::vector<bool> passive(static_cast<std::size_t>(ne), false);

    auto solve_passive = [&](const std::vector<Eigen::Index>& idx) {
        Eigen::MatrixXd ep(nb, static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) ep.col(static_cast<Eigen::Index>(k)) = e.col(idx[k]);
        // Complete orthogonal decomposition gives the least-norm solution
        // when the passive columns are rank deficient.
        return ep.completeOrthogonalDecomposition().solve(x).eval();
    };

    const int max_outer = 3 * static_cast<int>(ne) + 10;
    for (int outer = 0; outer < max_outer; ++outer) {
        const Eigen::VectorXd w = e.transpose() * (x - e * a);
        Eigen::Index pivot = -1;
        double best = tol;
        for (Eigen::Index i = 0; i < ne; ++i)
            if (!passive[static_cast<std::size_t>(i)] && w(i) > best) {
                best = w(i); // strict > keeps the lowest index on ties
                pivot = i;
            }
        if (pivot < 0) break;
        passive[static_cast<std::size_t>(pivot)] = true;

        for (int inner = 0; inner <= static_cast<int>(ne); ++inner) {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index i = 0; i < ne; ++i)
                if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
            const Eigen::VectorXd z = solve_passive(idx);

            double min_z = std::numeric_limits<double>::infinity();
            for (Eigen::Index k = 0; k < z.size(); ++k) min_z = std::min(min_z, z(k));
            if (min_z > 0.0) {
                a.setZero();
                for (std::size_t k = 0; k < idx.size(); ++k)
                    a(idx[k]) = z(static_cast<Eigen::Index>(k));
                break;
            }
            // Step toward z until the first passive variable hits zero.
            double alpha = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < idx.size(); ++k) {
                const double zk = z(static_cast<Eigen::Index>(k));
                if (zk <= 0.0) {
                    const double ak = a(idx[k]);
                    alpha = std::min(alpha, ak / (ak - zk));
                }
            }
            Eigen::VectorXd step = Eigen::VectorXd::Zero(ne);
            for (std::size_t k = 0; k < idx.size(); ++k)
                step(idx[k]) = z(static_cast<Eigen::Index>(k));
            a += alpha * (step - a);
            for (Eigen::Index i = 0; i < ne; ++i)
                if (passive[static_cast<std::size_t>(i)] && a(i) <= 1e-14) {
                    a(i) = 0.0;
                    passive[static_cast<std::size_t>(i)] = false;
                }
        }
    }

    UnmixResult result;
    result.abundances.resize(static_cast<std::size_t>(ne));
    for (Eigen::Index i = 0; i < ne; ++i)
        result.abundances[static_cast<std::size_t>(i)] = a(i);
    result.residual = (e * a - x).norm();
    return result;
}

Raster unmix_raster(const Raster& image, const scene::EndmemberLibrary& library) {
    require(image.bands == library.bands(), Errc::dimension_mismatch,
            "unmix_raster: image band count does not match the library");
    const std::size_t n = image.pixel_count();
    Raster out(image.width, image.height, static_cast<std::uint32_t>(library.count()));
    out.gsd_km = image.gsd_km;
    out.origin_along_km = image.origin_along_km;
    out.origin_across_km = image.origin_across_km;
    std::vector<double> x(image.bands);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t b = 0; b < image.bands; ++b)
            x[b] = image.samples[static_cast<std::size_t>(b) * n + i];
        const UnmixResult r = unmix(x, library);
        for (std::size_t e = 0; e < r.abundances.size(); ++e)
            out.samples[e * n + i] = static_cast<float>(r.abundances[e]);
    }
    return out;
}

Raster spectral_angle_map(const Raster& image, std::span<const double> reference) {
    require(image.bands == reference.size(), Errc::dimension_mismatch,
            "spectral_angle_map: image band count does not match the reference");
    const std::size_t n = image.pixel_count();
    Raster out(image.width, image.height, 1);
    out.gsd_km = image.gsd_km;
    out.origin_along_km = image.origin_along_km;
    out.origin_across_km = image.origin_across_km;
    std::vector<double> x(image.bands);
    for (std::size_t i = 0; i < n; ++i) {
        double norm = 0.0;
        for (std::uint32_t b = 0; b < image.bands; ++b) {
            x[b] = image.samples[static_cast<std::size_t>(b) * n + i];
            norm += x[b] * x[b];
        }
        // Zero pixels carry no direction; report the max angle.
        out.samples[i] = norm > 0.0
                             ? static_cast<float>(spectral_angle(x, reference))
                             : static_cast<float>(std::numbers::pi);
    }
    return out;
}

} // namespace dtsim::analysis
