#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hawkeslab/point_config.hpp"
#include "hawkeslab/rng.hpp"

namespace hawkeslab {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

MeanSe mean_se(std::span<const double> values);

/// Intensity estimate count/length with a block-bootstrap standard error:
/// the window is split into blocks whose counts are resampled with
/// replacement. Deterministic given the stream.
struct IntensityEstimate {
    double lambda_hat = 0.0;
    double se = 0.0;
};

IntensityEstimate estimate_intensity(const PointConfiguration& points, int block_count,
                                     int bootstrap_rounds, RngStream& stream);

/// Kolmogorov-Smirnov distance of sorted samples against a cdf.
double ks_statistic(std::span<const double> sorted_samples, const std::function<double(double)>& cdf);

/// Asymptotic 99% critical value of the KS statistic.
inline double ks_band_99(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

/// Chi-square statistic of observed counts against expected counts.
double chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected);

/// 99% quantiles of the chi-square distribution for small degrees of freedom.
double chi_square_99(int dof);

}  // namespace hawkeslab
