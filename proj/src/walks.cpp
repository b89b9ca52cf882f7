#include "hawkeslab/walks.hpp"

#include <algorithm>
#include <cmath>

#include "hawkeslab/errors.hpp"

namespace hawkeslab {

double LatticeLaw::sample(RngStream& stream) const {
    const double u = stream.uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<double>(k_min + static_cast<std::int64_t>(i));
    }
    return static_cast<double>(k_min + static_cast<std::int64_t>(probs.size()) - 1);
}

OccupationCurve occupation_curve(const WalkSpec& spec, RngStream& stream) {
    if (spec.n_steps < 32) throw ConfigError("walk needs at least 32 steps");
    OccupationCurve curve;
    for (std::uint64_t n = 32; n <= spec.n_steps; n <<= 1) curve.checkpoints.push_back(n);
    const std::size_t n_cp = curve.checkpoints.size();
    const std::uint64_t last = curve.checkpoints.back();
    const double h = spec.interval_halfwidth;

    std::vector<double> sum(n_cp, 0.0), sum_sq(n_cp, 0.0);
    std::vector<double> sum_neg(n_cp, 0.0), sum_pos(n_cp, 0.0);
    std::vector<std::uint64_t> visits(n_cp), visits_neg(n_cp), visits_pos(n_cp);

    for (std::uint64_t rep = 0; rep < spec.replications; ++rep) {
        RngStream rep_stream = stream.substream(static_cast<std::uint32_t>(rep + 1));
        double s = 0.0;
        std::uint64_t v = 1, vn = 0, vp = 0;  // g = 0 sits at the origin
        std::size_t cp = 0;
        for (std::uint64_t g = 1; g <= last; ++g) {
            s += std::visit([&](const auto& law) { return law.sample(rep_stream); }, spec.step);
            if (s >= -h && s <= h) {
                ++v;
                if (s < 0.0) ++vn;
                else if (s > 0.0) ++vp;
            }
            if (g == curve.checkpoints[cp]) {
                visits[cp] = v;
                visits_neg[cp] = vn;
                visits_pos[cp] = vp;
                ++cp;
            }
        }
        for (std::size_t i = 0; i < n_cp; ++i) {
            const auto vi = static_cast<double>(visits[i]);
            sum[i] += vi;
            sum_sq[i] += vi * vi;
            sum_neg[i] += static_cast<double>(visits_neg[i]);
            sum_pos[i] += static_cast<double>(visits_pos[i]);
        }
    }

    const auto reps = static_cast<double>(spec.replications);
    curve.mean_visits.resize(n_cp);
    curve.stderr_visits.resize(n_cp);
    curve.mean_visits_neg.resize(n_cp);
    curve.mean_visits_pos.resize(n_cp);
    for (std::size_t i = 0; i < n_cp; ++i) {
        const double mean = sum[i] / reps;
        curve.mean_visits[i] = mean;
        const double var = std::max(0.0, sum_sq[i] / reps - mean * mean);
        curve.stderr_visits[i] = reps > 1 ? std::sqrt(var / (reps - 1)) : 0.0;
        curve.mean_visits_neg[i] = sum_neg[i] / reps;
        curve.mean_visits_pos[i] = sum_pos[i] / reps;
    }
    return curve;
}

const char* to_string(WalkVerdict v) {
    switch (v) {
        case WalkVerdict::transient: return "transient";
        case WalkVerdict::recurrent: return "recurrent";
        case WalkVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

double occupation_tail_slope(const OccupationCurve& curve) {
    const std::size_t n = curve.checkpoints.size();
    if (n < 4) throw ConfigError("slope fit needs at least 4 checkpoints");
    const std::size_t tail = std::max<std::size_t>(4, n / 2);
    const std::size_t first = n - tail;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = first; i < n; ++i) {
        const double x = std::log(static_cast<double>(curve.checkpoints[i]));
        const double y = std::log(std::max(curve.mean_visits[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const auto m = static_cast<double>(tail);
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

WalkVerdict classify_transience(const OccupationCurve& curve,
                                const TransienceThresholds& thresholds) {
    const std::size_t n = curve.checkpoints.size();
    if (n < 4) throw ConfigError("classification needs at least 4 checkpoints");
    const double slope = occupation_tail_slope(curve);

    const double last = curve.mean_visits[n - 1];
    const double prev = curve.mean_visits[n - 2];
    const bool flat = last <= 0.0 || (last - prev) <= thresholds.flat_tol * last;

    if (slope < thresholds.slope_lo && flat) return WalkVerdict::transient;
    if (slope > thresholds.slope_hi) return WalkVerdict::recurrent;
    return WalkVerdict::inconclusive;
}

}  // namespace hawkeslab
