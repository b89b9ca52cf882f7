#include "hawkeslab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hawkeslab/errors.hpp"

namespace hawkeslab {

MeanSe mean_se(std::span<const double> values) {
    MeanSe r;
    r.n = values.size();
    if (r.n == 0) return r;
    double sum = 0.0;
    for (const double v : values) sum += v;
    r.mean = sum / static_cast<double>(r.n);
    if (r.n < 2) return r;
    double ss = 0.0;
    for (const double v : values) ss += (v - r.mean) * (v - r.mean);
    r.se = std::sqrt(ss / static_cast<double>(r.n - 1) / static_cast<double>(r.n));
    return r;
}

IntensityEstimate estimate_intensity(const PointConfiguration& points, int block_count,
                                     int bootstrap_rounds, RngStream& stream) {
    const Window& win = points.window();
    if (!(win.length() > 0.0)) throw ConfigError("intensity window must have positive length");
    IntensityEstimate est;
    est.lambda_hat = static_cast<double>(points.count_window()) / win.length();
    if (points.count_window() == 0 || block_count < 2 || bootstrap_rounds < 2) return est;

    const auto blocks = static_cast<std::size_t>(block_count);
    const double block_len = win.length() / static_cast<double>(blocks);
    std::vector<double> block_counts(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const double lo = win.lo + block_len * static_cast<double>(b);
        const double hi = b + 1 == blocks ? win.hi : lo + block_len;
        block_counts[b] = static_cast<double>(points.count_between(lo, hi));
    }
    // block bootstrap of the window total
    double sum = 0.0, sum_sq = 0.0;
    for (int round = 0; round < bootstrap_rounds; ++round) {
        double total = 0.0;
        for (std::size_t b = 0; b < blocks; ++b) total += block_counts[stream.uniform_int(blocks)];
        const double lam = total / win.length();
        sum += lam;
        sum_sq += lam * lam;
    }
    const auto r = static_cast<double>(bootstrap_rounds);
    const double mean = sum / r;
    est.se = std::sqrt(std::max(0.0, sum_sq / r - mean * mean) * r / (r - 1.0));
    return est;
}

double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& cdf) {
    const auto n = static_cast<double>(sorted_samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        const double f = cdf(sorted_samples[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::abs(f - lo), std::abs(hi - f)});
    }
    return d;
}

double chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected) {
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) continue;
        const double diff = static_cast<double>(observed[i]) - expected[i];
        stat += diff * diff / expected[i];
    }
    return stat;
}

double chi_square_99(int dof) {
    static constexpr double table[] = {0.0,    6.635,  9.210,  11.345, 13.277, 15.086, 16.812,
                                       18.475, 20.090, 21.666, 23.209, 24.725, 26.217, 27.688,
                                       29.141, 30.578, 32.000, 33.409, 34.805, 36.191, 37.566};
    if (dof < 1 || dof > 20) throw ConfigError("chi_square_99 table covers dof 1..20");
    return table[dof];
}

}  // namespace hawkeslab
